"""
Experiments package: figure sweeps, single-point evaluations, result files and self-checks.
"""

from ssnmbounds.experiments.sweep import SweepResult, build_metadata
from ssnmbounds.experiments.analysis import (
    level_crossing_db,
    transition_fraction_db,
    transition_midpoint_db,
)
from ssnmbounds.experiments.figures import (
    FIGURES,
    generate_fig2_parameters,
    run_fig1,
    run_fig2,
    run_fig3,
    run_fig4,
)
from ssnmbounds.experiments.evaluations import (
    bound_values,
    bounds_eval,
    bounds_sweep,
    risk_mc,
    risk_ml_exact,
    risk_ht_exact,
)

__all__ = [
    'SweepResult',
    'build_metadata',
    'level_crossing_db',
    'transition_fraction_db',
    'transition_midpoint_db',
    'FIGURES',
    'generate_fig2_parameters',
    'run_fig1',
    'run_fig2',
    'run_fig3',
    'run_fig4',
    'bound_values',
    'bounds_eval',
    'bounds_sweep',
    'risk_mc',
    'risk_ml_exact',
    'risk_ht_exact',
]
