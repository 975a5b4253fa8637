"""Unbiased estimators over X_S (S < N).

The family and counterexample estimators modify component 0 using the
coordinates 1..S; the tanh-product estimator is the locally optimal estimator at a
reference parameter.
"""
import numpy as np

from ssnmbounds.config.run_config import QuadratureSpec
from ssnmbounds.errors import ConfigError, DegenerateAlpha, MaxSupportRequired, ScopeError
from ssnmbounds.estimators.base import Estimator
from ssnmbounds.model.problem import validate_param
from ssnmbounds.risk.gaussian import adaptive_quad, std_normal_pdf

COUNTEREXAMPLE_BAND = (0.4, 0.6)


def _require_s_below_n(config, what):
    if config.S >= config.N:
        raise ScopeError(f"{what} is defined only for S < N (got S = N = {config.N})")


def band_sign(y, lo, hi):
    """sgn(y) where lo <= |y| <= hi, else 0."""
    mag = np.abs(y)
    return np.where((mag >= lo) & (mag <= hi), np.sign(y), 0.0)


class FamilyEstimator(Estimator):
    """y + a * y_0 * prod_{l=1..S} h^(c,d)(y_l) * e_0, with h^(c,d) = sgn on |y| in [c, c+d]."""

    kind = "family"

    def __init__(self, config, a, c, d):
        super().__init__(config)
        _require_s_below_n(config, "the unbiased family")
        if not (c > 0 and d > 0):
            raise ConfigError(f"family parameters need c, d > 0, got c={c!r}, d={d!r}")
        self.a, self.c, self.d = float(a), float(c), float(d)

    def _estimate_batch(self, Y):
        S = self.config.S
        gate = np.prod(band_sign(Y[:, 1:S + 1], self.c, self.c + self.d), axis=1)
        out = Y.copy()
        out[:, 0] += self.a * Y[:, 0] * gate
        return out

    def describe(self):
        return {"kind": self.kind, "a": self.a, "c": self.c, "d": self.d}


class CounterexampleEstimator(Estimator):
    """Component 0 is y_0 + A y_0 prod_{l=1..S} h(y_l), h = sgn on |y| in [0.4, 0.6]."""

    kind = "counterexample"

    def __init__(self, config, A):
        super().__init__(config)
        _require_s_below_n(config, "the counterexample estimator")
        self.A = float(A)

    def _estimate_batch(self, Y):
        S = self.config.S
        gate = np.prod(band_sign(Y[:, 1:S + 1], *COUNTEREXAMPLE_BAND), axis=1)
        out = Y.copy()
        out[:, 0] += self.A * Y[:, 0] * gate
        return out

    def describe(self):
        return {"kind": self.kind, "A": self.A}


class Lemma2OptimalEstimator(Estimator):
    """Locally optimal unbiased estimator at ``x_ref``.

    Support components are returned unchanged; off-support components are
    y_k - y_k prod_{l in supp} tanh(x_l y_l / sigma^2).
    """

    kind = "lemma2"

    def __init__(self, config, x_ref):
        super().__init__(config)
        if not x_ref.is_maximal(config):
            raise MaxSupportRequired(f"reference parameter needs ||x||_0 = S = {config.S}")
        self.x_ref = x_ref
        self._support = list(x_ref.support)
        self._off = list(x_ref.off_support())

    def _estimate_batch(self, Y):
        weights = self.x_ref.values[self._support] / self.config.sigma2
        shrink = np.prod(np.tanh(Y[:, self._support] * weights[np.newaxis, :]), axis=1)
        out = Y.copy()
        out[:, self._off] -= Y[:, self._off] * shrink[:, np.newaxis]
        return out

    def describe(self):
        return {"kind": self.kind, "x_ref": self.x_ref.values.tolist()}


def family_estimate(y, a, c, d, config):
    return FamilyEstimator(config, a, c, d).estimate(y)


def counterexample_estimate(y, A, config):
    return CounterexampleEstimator(config, A).estimate(y)


def lemma2_optimal_estimate(y, x_ref, config):
    return Lemma2OptimalEstimator(config, x_ref).estimate(y)


def counterexample_reference(config):
    """x' = (0, 1, ..., 1, 0, ...) with ones at indices 1..S."""
    _require_s_below_n(config, "the counterexample reference")
    values = np.zeros(config.N)
    values[1:config.S + 1] = 1.0
    return validate_param(values, config)


def _band_expectations(config, quad):
    """(E h(y), E h^2(y)) for y ~ N(1, sigma^2) by quadrature over the two bands."""
    sigma = config.sigma
    lo, hi = COUNTEREXAMPLE_BAND

    def pdf(y):
        return std_normal_pdf((y - 1.0) / sigma) / sigma

    right = adaptive_quad(pdf, lo, hi, quad, label="E h(y) right band")
    left = adaptive_quad(pdf, -hi, -lo, quad, label="E h(y) left band")
    return right - left, right + left


def counterexample_coefficients(config, quad=None):
    """alpha = E{y_0^2 prod h^2(y_l)} and beta = E{2 y_0^2 prod h(y_l)} at x'."""
    _require_s_below_n(config, "the counterexample estimator")
    quad = quad or QuadratureSpec()
    e_h, e_h2 = _band_expectations(config, quad)
    alpha = config.sigma2 * e_h2 ** config.S
    beta = 2.0 * config.sigma2 * e_h ** config.S
    return alpha, beta


def counterexample_optimal_A(config, quad=None):
    """A = -beta / (2 alpha), the coefficient minimising the variance at x'."""
    alpha, beta = counterexample_coefficients(config, quad)
    if not alpha > 1e-300:
        raise DegenerateAlpha(f"alpha = {alpha!r} is not positive")
    return -beta / (2.0 * alpha)


def counterexample_variance_at_reference(config, A, quad=None):
    """Total variance of the counterexample estimator at x': N sigma^2 + A beta + A^2 alpha."""
    alpha, beta = counterexample_coefficients(config, quad)
    return config.N * config.sigma2 + A * beta + A * A * alpha
