import logging
from abc import ABC, abstractmethod

import numpy as np

from ssnmbounds.errors import DimensionMismatch

logger = logging.getLogger('ssnmbounds')


class Estimator(ABC):
    """Base class for estimators of x from y = x + n"""

    kind = "estimator"

    def __init__(self, config):
        self.config = config
        self.logger = logger

    def __call__(self, y):
        return self.estimate(y)

    def estimate(self, y):
        """
        Estimate x from one observation or a batch of observations.

        Args:
            y (array-like): Shape (N,) or (n, N).

        Returns:
            np.ndarray: Estimates with the same shape as y.
        """
        arr = np.asarray(y, dtype=float)
        if arr.shape[-1] != self.config.N:
            raise DimensionMismatch(f"observation has length {arr.shape[-1]}, expected N={self.config.N}")
        if arr.ndim == 1:
            return self._estimate_batch(arr[np.newaxis, :])[0]
        return self._estimate_batch(arr)

    @abstractmethod
    def _estimate_batch(self, Y):
        """
        Apply the estimator row-wise.

        Args:
            Y (np.ndarray): Observations, shape (n, N).

        Returns:
            np.ndarray: Estimates, shape (n, N).
        """
        pass

    def describe(self):
        """Parameters recorded in run metadata."""
        return {"kind": self.kind}
