"""Closed-form bounds: CRB, the t -> 0 HCRB, and the BB_c upper bound."""
import logging
from functools import lru_cache

import numpy as np

from ssnmbounds.config.run_config import QuadratureSpec
from ssnmbounds.errors import MaxSupportRequired
from ssnmbounds.risk.gaussian import adaptive_quad

logger = logging.getLogger('ssnmbounds')


def _require_maximal(x, config, what):
    if x.l0 != config.S:
        raise MaxSupportRequired(
            f"{what} needs ||x||_0 = S = {config.S}, got {x.l0}")


def crb(x, config):
    if x.l0 == config.S:
        return config.S * config.sigma2
    return config.N * config.sigma2


def hcrb_closed(x, config):
    if x.l0 != config.S:
        return config.N * config.sigma2
    decay = np.exp(-x.xi * x.xi / config.sigma2)
    return config.S * config.sigma2 + (config.N - config.S - 1) * decay * config.sigma2


def g_factor(x_l, sigma2, quad=None):
    """The g-integral g(x; sigma^2) in [0, 1].

    g(x) = int_0^inf [phi_s(y - x) - phi_s(y + x)] tanh(x y / s^2) dy, which is
    the sinh/cosh form rewritten so that nothing overflows. It equals
    E{tanh(x y / s^2)} for y ~ N(x, s^2).
    """
    quad = quad or QuadratureSpec()
    return _g_cached(abs(float(x_l)), float(sigma2), quad)


@lru_cache(maxsize=4096)
def _g_cached(x, sigma2, quad):
    if x == 0.0:
        return 0.0
    sigma = np.sqrt(sigma2)
    norm = 1.0 / np.sqrt(2.0 * np.pi * sigma2)

    def integrand(y):
        diff = np.exp(-(x - y) ** 2 / (2.0 * sigma2)) - np.exp(-(x + y) ** 2 / (2.0 * sigma2))
        return norm * diff * np.tanh(x * y / sigma2)

    upper = x + quad.truncation_radius_sigmas * sigma
    # split at the peak so QUADPACK sees it
    value = (adaptive_quad(integrand, 0.0, x, quad, label=f"g({x:.4g})")
             + adaptive_quad(integrand, x, upper, quad, label=f"g({x:.4g})"))
    return float(min(max(value, 0.0), 1.0))


def bb_upper_component(x, config, quad=None):
    """Per-off-support-component MSE of the locally optimal unbiased correction."""
    _require_maximal(x, config, "bb_upper_component")
    prod = 1.0
    for l in x.support:
        prod *= g_factor(x.values[l], config.sigma2, quad)
    return (1.0 - prod) * config.sigma2


def bb_upper(x, config, quad=None):
    _require_maximal(x, config, "bb_upper")
    return config.S * config.sigma2 + (config.N - config.S) * bb_upper_component(x, config, quad)


def bb_upper_component_envelope(x, config):
    """[1 - prod(1 - 1.5 exp(-x_l^2 / 2 sigma^2))] sigma^2, the per-component bound behind the 3^S envelope."""
    _require_maximal(x, config, "bb_upper_component_envelope")
    vals = x.values[list(x.support)]
    # g >= 0, so negative lower bounds are replaced by 0
    factors = np.clip(1.0 - 1.5 * np.exp(-vals * vals / (2.0 * config.sigma2)), 0.0, 1.0)
    return float(1.0 - np.prod(factors)) * config.sigma2


def bb_upper_envelope(x, config):
    _require_maximal(x, config, "bb_upper_envelope")
    decay = np.exp(-x.xi * x.xi / (2.0 * config.sigma2))
    return config.S * config.sigma2 + (config.N - config.S) * (3.0 ** config.S) * decay * config.sigma2
