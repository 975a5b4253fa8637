"""Biased benchmark estimators: ML (hard sparsification), hard thresholding, and the support oracle."""
import numpy as np

from ssnmbounds.errors import ConfigError
from ssnmbounds.estimators.base import Estimator
from ssnmbounds.model.problem import hard_sparsify


class IdentityEstimator(Estimator):
    """x_hat(y) = y; the unique unbiased estimator when S = N."""

    kind = "identity"

    def _estimate_batch(self, Y):
        return Y.copy()


class MLEstimator(Estimator):
    """Maximum likelihood / least squares: keep the S largest-magnitude entries."""

    kind = "ml"

    def _estimate_batch(self, Y):
        return hard_sparsify(Y, self.config.S)


class HardThresholdingEstimator(Estimator):
    """Keep y_k when |y_k| >= T. T defaults to sigma * sqrt(2 log N)."""

    kind = "ht"

    def __init__(self, config, threshold=None):
        super().__init__(config)
        self.threshold = config.default_threshold() if threshold is None else float(threshold)
        if not self.threshold > 0:
            raise ConfigError(f"threshold must be positive, got {self.threshold!r}")

    def _estimate_batch(self, Y):
        return np.where(np.abs(Y) >= self.threshold, Y, 0.0)

    def describe(self):
        return {"kind": self.kind, "threshold": self.threshold}


class OracleEstimator(Estimator):
    """Knows the support: y on ``support``, zero elsewhere."""

    kind = "oracle"

    def __init__(self, config, support):
        super().__init__(config)
        support = tuple(sorted(int(k) for k in support))
        if len(set(support)) != config.S or not all(0 <= k < config.N for k in support):
            raise ConfigError(f"oracle support must hold S={config.S} distinct indices in [0, N)")
        self.support = support
        self._mask = np.zeros(config.N, dtype=bool)
        self._mask[list(support)] = True

    def _estimate_batch(self, Y):
        return np.where(self._mask[np.newaxis, :], Y, 0.0)

    def describe(self):
        return {"kind": self.kind, "support": list(self.support)}


def ml_estimate(y, config):
    return MLEstimator(config).estimate(y)


def ht_estimate(y, T, config):
    return HardThresholdingEstimator(config, T).estimate(y)


def oracle_estimate(y, supp, config):
    return OracleEstimator(config, supp).estimate(y)
