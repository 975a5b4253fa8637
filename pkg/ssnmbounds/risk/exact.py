"""Exact (quadrature / closed-form) risks of the ML and hard-thresholding estimators."""
import itertools
import logging
from functools import lru_cache

import numpy as np
from scipy import special

from ssnmbounds.config.run_config import QuadratureSpec
from ssnmbounds.config.settings import Config
from ssnmbounds.errors import ConfigError, DimensionGuard
from ssnmbounds.risk.gaussian import (adaptive_quad, interval_moments, interval_prob, q_tail, std_normal_cdf,
                                      std_normal_pdf)
from ssnmbounds.risk.monte_carlo import RiskReport
from ssnmbounds.workers.pool_worker import run_parallel

logger = logging.getLogger('ssnmbounds')


def _guard(config):
    if config.N > Config.ML_EXACT_MAX_N:
        raise DimensionGuard(
            f"exact ML risk enumerates subsets of N-1 coordinates; N={config.N} exceeds {Config.ML_EXACT_MAX_N}")


@lru_cache(maxsize=64)
def _masks(n):
    """All 2^n subsets of range(n) as a boolean (2^n, n) array."""
    return np.array(list(itertools.product((False, True), repeat=n)), dtype=bool).reshape(2 ** n, n)


def _exceed_probs(others, y, sigma):
    """P(|y_l| > |y|) and its complement for y_l ~ N(x_l, sigma^2)."""
    mag = abs(y)
    p = q_tail((mag - others) / sigma) + q_tail((mag + others) / sigma)
    not_p = interval_prob((-mag - others) / sigma, (mag - others) / sigma)
    return p, not_p


def _collapsed(on_supp, n_off, y, S, sigma):
    p_on, q_on = _exceed_probs(on_supp, y, sigma)
    p0 = float(2.0 * q_tail(abs(y) / sigma))
    masks = _masks(on_supp.size)
    weights = np.prod(np.where(masks, p_on[np.newaxis, :], q_on[np.newaxis, :]), axis=1)
    needed = S - masks.sum(axis=1)
    # P(Binomial(n_off, p0) >= needed); bdtrc(k, n, p) = P(X > k) and is undefined for k > n
    k = np.clip(needed - 1, 0, n_off)
    tail = np.where(needed <= 0, 1.0, np.where(needed > n_off, 0.0, special.bdtrc(k, n_off, p0)))
    return float(np.dot(weights, tail))


def _enumerate(others, y, S, sigma):
    p, q = _exceed_probs(others, y, sigma)
    masks = _masks(others.size)
    masks = masks[masks.sum(axis=1) >= S]
    return float(np.sum(np.prod(np.where(masks, p[np.newaxis, :], q[np.newaxis, :]), axis=1)))


def prob_not_in_top_s(x, k, y, config, method="collapsed"):
    """P(y in L_k | y_k = y): at least S of the other N-1 coordinates exceed |y| in magnitude.

    ``method="collapsed"`` enumerates subsets of the support coordinates only and
    treats the identically distributed off-support coordinates as a binomial count;
    ``method="enumerate"`` runs over all 2^(N-1) subsets.
    """
    _guard(config)
    others = np.delete(x.values, k)
    if method == "collapsed":
        on_supp = others[others != 0.0]
        value = _collapsed(on_supp, others.size - on_supp.size, y, config.S, config.sigma)
    elif method == "enumerate":
        value = _enumerate(others, y, config.S, config.sigma)
    else:
        raise ConfigError(f"unknown method '{method}'")
    if value < -1e-12 or value > 1.0 + 1e-12:
        logger.warning(f"prob_not_in_top_s: clamping {value:.3e} to [0, 1]")
    return min(max(value, 0.0), 1.0)


def _ml_component(xk, on_supp, n_off, config, quad):
    """(E{y_k 1_L}, E{y_k^2 1_L}) for one component, 1_L the event that ML zeroes it."""
    sigma = config.sigma
    S = config.S
    radius = quad.truncation_radius_sigmas * sigma

    def weight(y):
        return std_normal_pdf((y - xk) / sigma) / sigma * _collapsed(on_supp, n_off, y, S, sigma)

    breaks = [0.0, xk] + [s * v for v in on_supp for s in (1.0, -1.0)]
    lo, hi = xk - radius, xk + radius
    m1 = adaptive_quad(lambda y: y * weight(y), lo, hi, quad, label=f"ML first moment (x_k={xk:.4g})", points=breaks)
    m2 = adaptive_quad(lambda y: y * y * weight(y), lo, hi, quad, label=f"ML second moment (x_k={xk:.4g})",
                       points=breaks)
    return m1, m2


def ml_risk_exact(x, config, quad=None, threads=1):
    """Exact ML risk by 1-D quadrature of the partition sum, per component.

    Components with the same |x_k| and the same multiset of the other
    magnitudes share their integrals.
    """
    _guard(config)
    quad = quad or QuadratureSpec()
    N, S, s2 = config.N, config.S, config.sigma2
    values = x.values
    if S == N:
        return RiskReport(mse=N * s2, bias=np.zeros(N), variance=N * s2, per_component_mse=np.full(N, s2))

    def signature(k):
        others = np.abs(np.delete(values, k))
        return abs(float(values[k])), tuple(sorted(float(v) for v in others[others != 0.0]))

    keys = [signature(k) for k in range(N)]
    unique = list(dict.fromkeys(keys))
    logger.debug(f"ML exact: {len(unique)} distinct component signatures for N={N}")

    def solve(key):
        xk, on_supp = key
        return _ml_component(xk, np.array(on_supp), N - 1 - len(on_supp), config, quad)

    moments = dict(zip(unique, run_parallel(solve, unique, threads=threads, label="ML exact components")))

    bias = np.zeros(N)
    per_component = np.zeros(N)
    for k in range(N):
        m1, m2 = moments[keys[k]]
        xk = float(values[k])
        sign = -1.0 if xk < 0 else 1.0
        mean = xk - sign * m1
        power = s2 + xk * xk - m2
        bias[k] = mean - xk
        per_component[k] = power - 2.0 * xk * mean + xk * xk
    mse = float(per_component.sum())
    return RiskReport(mse=mse, bias=bias, variance=mse - float(np.dot(bias, bias)),
                      per_component_mse=per_component)


def ml_mse_exact(x, config, quad=None, threads=1):
    return ml_risk_exact(x, config, quad, threads).mse


def ht_risk_exact(x, T, config):
    """Hard-thresholding risk from Gaussian moments on [-T, T]; no quadrature involved."""
    if not T > 0:
        raise ConfigError(f"threshold must be positive, got {T!r}")
    sigma, s2 = config.sigma, config.sigma2
    mu = x.values
    a = (-T - mu) / sigma
    b = (T - mu) / sigma
    with np.errstate(invalid="ignore", over="ignore"):
        b_phi = np.where(np.isfinite(b), b * std_normal_pdf(b), 0.0)
        a_phi = np.where(np.isfinite(a), a * std_normal_pdf(a), 0.0)
    zeroed_mass = interval_prob(a, b)
    per_component = s2 * (b_phi + q_tail(b)) + s2 * (-a_phi + std_normal_cdf(a)) + mu * mu * zeroed_mass
    # E{x_hat_k} - x_k = -E{y_k 1{|y_k| < T}}
    _, inside_first, _ = interval_moments(-T, T, mu, sigma)
    bias = -inside_first
    mse = float(per_component.sum())
    return RiskReport(mse=mse, bias=bias, variance=mse - float(np.dot(bias, bias)),
                      per_component_mse=per_component)


def ht_mse_exact(x, T, config, quad=None):
    """Exact hard-thresholding MSE. ``quad`` is accepted for interface symmetry and unused."""
    return ht_risk_exact(x, T, config).mse
