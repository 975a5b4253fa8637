"""
Risk package: Gaussian helpers, Monte Carlo risk, and exact ML / HT risks.
"""

from ssnmbounds.risk.gaussian import (
    q_tail,
    std_normal_pdf,
    std_normal_cdf,
    interval_prob,
    interval_moments,
    adaptive_quad,
)
from ssnmbounds.risk.monte_carlo import RiskReport, monte_carlo_risk
from ssnmbounds.risk.exact import (
    prob_not_in_top_s,
    ml_risk_exact,
    ml_mse_exact,
    ht_risk_exact,
    ht_mse_exact,
)

__all__ = [
    'q_tail',
    'std_normal_pdf',
    'std_normal_cdf',
    'interval_prob',
    'interval_moments',
    'adaptive_quad',
    'RiskReport',
    'monte_carlo_risk',
    'prob_not_in_top_s',
    'ml_risk_exact',
    'ml_mse_exact',
    'ht_risk_exact',
    'ht_mse_exact',
]
