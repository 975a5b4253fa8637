import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ssnmbounds.errors import ConfigError, DimensionMismatch, NotOrthonormal, SparsityViolation

logger = logging.getLogger('ssnmbounds')


@dataclass(frozen=True)
class ProblemConfig:
    """One SSNM instance: y = x + n, x at most S-sparse, n ~ N(0, sigma2 I_N)."""

    N: int
    S: int
    sigma2: float = 1.0

    def __post_init__(self):
        for name in ("N", "S", "sigma2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)) \
                    or not np.isfinite(value):
                raise ConfigError(f"{name} must be a finite number, got {value!r}")
        if int(self.N) != self.N or self.N < 1:
            raise ConfigError(f"N must be a positive integer, got {self.N!r}")
        if int(self.S) != self.S or not 1 <= self.S <= self.N:
            raise ConfigError(f"S must satisfy 1 <= S <= N={self.N}, got {self.S!r}")
        if not np.isfinite(self.sigma2) or self.sigma2 <= 0:
            raise ConfigError(f"sigma2 must be positive, got {self.sigma2!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "S", int(self.S))
        object.__setattr__(self, "sigma2", float(self.sigma2))

    @property
    def sigma(self):
        return float(np.sqrt(self.sigma2))

    def default_threshold(self):
        """Hard-thresholding level sigma * sqrt(2 log N)."""
        return self.sigma * float(np.sqrt(2.0 * np.log(self.N))) if self.N > 1 else 0.0


@dataclass(frozen=True, eq=False)
class SparseParam:
    """A validated parameter x in X_S.

    ``xi`` is the smallest nonzero magnitude and ``xi_index`` the (lowest)
    index where it occurs; both are None for the zero vector.
    """

    values: np.ndarray
    support: Tuple[int, ...]
    xi: Optional[float]
    xi_index: Optional[int]
    snr: Optional[float]

    @property
    def l0(self):
        return len(self.support)

    @property
    def signed_xi(self):
        """The entry x_(S) itself, sign included."""
        return None if self.xi_index is None else float(self.values[self.xi_index])

    def is_maximal(self, config):
        return self.l0 == config.S

    def off_support(self):
        support = set(self.support)
        return tuple(k for k in range(self.values.size) if k not in support)


@dataclass(frozen=True, eq=False)
class GaussianSample:
    y: np.ndarray


def validate_param(values, config):
    """Check membership in X_S and cache support, xi and SNR."""
    try:
        arr = np.array(values, dtype=float).reshape(-1)
    except (TypeError, ValueError):
        raise ConfigError(f"parameter entries must be numbers, got {values!r}")
    if arr.size != config.N:
        raise DimensionMismatch(f"parameter has length {arr.size}, expected N={config.N}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError("parameter entries must be finite")
    support = tuple(int(k) for k in np.flatnonzero(arr))
    if len(support) > config.S:
        raise SparsityViolation(
            f"parameter has {len(support)} nonzero entries but S={config.S}")
    xi = xi_index = snr = None
    if support:
        mags = np.abs(arr[list(support)])
        pos = int(np.argmin(mags))  # argmin returns the first minimum, i.e. the lowest index
        xi_index = support[pos]
        xi = float(mags[pos])
        snr = xi * xi / config.sigma2
    arr.setflags(write=False)
    return SparseParam(values=arr, support=support, xi=xi, xi_index=xi_index, snr=snr)


def hard_sparsify(y, S):
    """Keep the S largest-magnitude entries of y in place; ties keep the lowest index."""
    y = np.asarray(y, dtype=float)
    if int(S) != S or not 1 <= S <= y.shape[-1]:
        raise ConfigError(f"S must satisfy 1 <= S <= {y.shape[-1]}, got {S!r}")
    order = np.argsort(-np.abs(y), axis=-1, kind="stable")[..., :S]
    out = np.zeros_like(y)
    np.put_along_axis(out, order, np.take_along_axis(y, order, axis=-1), axis=-1)
    return out


def reduce_orthonormal_model(A, y, tol=1e-10):
    """Map an orthonormal-column model z = A x + n to the SSNM observation A^T z."""
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if A.ndim != 2:
        raise DimensionMismatch("A must be a matrix")
    if A.shape[0] != y.size:
        raise DimensionMismatch(f"A has {A.shape[0]} rows but y has length {y.size}")
    deviation = float(np.max(np.abs(A.T @ A - np.eye(A.shape[1])))) if A.size else 0.0
    if deviation > tol:
        raise NotOrthonormal(f"max |A^T A - I| = {deviation:.3e} exceeds tol={tol:g}")
    return A.T @ y


def snr_db_to_ratio(snr_db):
    return 10.0 ** (np.asarray(snr_db, dtype=float) / 10.0)


def ratio_to_snr_db(ratio):
    return 10.0 * np.log10(np.asarray(ratio, dtype=float))


def param_at_snr(pattern, snr_db, config):
    """Scale a sparsity pattern so that its smallest nonzero entry has the given SNR.

    The pattern's smallest nonzero magnitude is mapped to xi = sigma * 10^(snr_db/20).
    """
    pattern = np.asarray(pattern, dtype=float)
    nonzero = np.abs(pattern[pattern != 0])
    if nonzero.size == 0:
        raise ConfigError("pattern must have at least one nonzero entry")
    xi = config.sigma * 10.0 ** (float(snr_db) / 20.0)
    return validate_param(pattern * (xi / nonzero.min()), config)
