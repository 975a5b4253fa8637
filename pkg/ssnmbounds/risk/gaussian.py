"""Gaussian tail, interval-moment and adaptive-quadrature helpers."""
import logging

import numpy as np
from scipy import integrate, special

from ssnmbounds.config.run_config import QuadratureSpec
from ssnmbounds.errors import QuadratureFailure

logger = logging.getLogger('ssnmbounds')

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def q_tail(u):
    """Right tail Q(u) = P(Z > u) of the standard normal."""
    return 0.5 * special.erfc(np.asarray(u, dtype=float) / np.sqrt(2.0))


def std_normal_pdf(z):
    z = np.asarray(z, dtype=float)
    return _INV_SQRT_2PI * np.exp(-0.5 * z * z)


def std_normal_cdf(z):
    return special.ndtr(np.asarray(z, dtype=float))


def interval_prob(a, b):
    """P(a < Z < b) for standard normal Z, evaluated on the tail side to avoid cancellation."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    upper = special.ndtr(-a) - special.ndtr(-b)
    lower = special.ndtr(b) - special.ndtr(a)
    return np.where(a > 0, upper, lower)


def _z_pdf(z):
    # z * phi(z), zero at +-inf
    with np.errstate(invalid="ignore"):
        out = np.asarray(z, dtype=float) * std_normal_pdf(z)
    return np.where(np.isfinite(z), out, 0.0)


def interval_moments(lo, hi, mean, sigma):
    """Truncated moments of y ~ N(mean, sigma^2) over [lo, hi].

    Returns (P, E[y 1{lo<y<hi}], E[y^2 1{lo<y<hi}]). Endpoints may be infinite.
    """
    a = (np.asarray(lo, dtype=float) - mean) / sigma
    b = (np.asarray(hi, dtype=float) - mean) / sigma
    p = interval_prob(a, b)
    dphi = std_normal_pdf(a) - std_normal_pdf(b)
    m1 = mean * p + sigma * dphi
    m2 = (mean * mean) * p + 2.0 * mean * sigma * dphi + sigma * sigma * (p + _z_pdf(a) - _z_pdf(b))
    return p, m1, m2


def adaptive_quad(func, lo, hi, quad=None, label="integral", points=None):
    """Integrate ``func`` over [lo, hi] with scipy's adaptive QUADPACK routine.

    ``points`` are interior break points (kinks of the integrand). Raises
    QuadratureFailure if QUADPACK reports trouble and its error estimate
    exceeds the requested tolerance.
    """
    quad = quad or QuadratureSpec()
    kwargs = {}
    if points is not None:
        inner = sorted({float(p) for p in points if lo < p < hi})
        if inner:
            kwargs["points"] = inner
    result = integrate.quad(
        func, lo, hi,
        epsabs=quad.abs_tol,
        epsrel=quad.rel_tol,
        limit=quad.max_subdivisions,
        full_output=1,
        **kwargs,
    )
    value, abserr = result[0], result[1]
    if len(result) > 3:
        allowed = max(quad.abs_tol, quad.rel_tol * abs(value))
        if not np.isfinite(value) or abserr > allowed:
            raise QuadratureFailure(
                f"{label}: tolerance not met after {quad.max_subdivisions} subdivisions "
                f"(value={value:.6g}, error estimate={abserr:.3g}): {result[3]}")
        logger.debug(f"{label}: QUADPACK warning ignored, error estimate {abserr:.3g} within tolerance")
    return float(value)
