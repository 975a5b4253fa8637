"""Hammersley-Chapman-Robbins bounds from explicit test points."""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ssnmbounds.config.settings import Config
from ssnmbounds.errors import (ConfigError, DegenerateGram, MaxSupportRequired, ScaleError,
                               SingularStructure, SparsityViolation)
from ssnmbounds.model.problem import SparseParam, validate_param

logger = logging.getLogger('ssnmbounds')


@dataclass(frozen=True, eq=False)
class TestPointSet:
    """Base parameter x plus perturbations v_i (rows of ``points``) with x + v_i in X_S."""

    __test__ = False  # not a pytest class

    base: SparseParam
    points: np.ndarray

    @property
    def p(self):
        return self.points.shape[0]

    @classmethod
    def create(cls, base, points, config):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[0] < 1 or pts.shape[1] != config.N:
            raise ConfigError(f"test points must form a (p, {config.N}) array with p >= 1")
        for v in pts:
            if not np.any(v):
                raise ConfigError("test points must be nonzero")
            try:
                validate_param(base.values + v, config)
            except SparsityViolation:
                raise SparsityViolation(f"x + v leaves X_S for test point {v.tolist()}")
        pts.setflags(write=False)
        return cls(base=base, points=pts)


@dataclass(frozen=True)
class StructuredMatrixParams:
    """Entries of the (r+1)x(r+1) matrix [[a, b 1^T], [b 1, (d - c) I + c 1 1^T]]."""

    a: float
    b: float
    c: float
    d: float
    r: int

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ConfigError(f"r must be a positive integer, got {self.r!r}")

    def assemble(self):
        n = self.r + 1
        m = np.full((n, n), self.c, dtype=float)
        np.fill_diagonal(m, self.d)
        m[0, :] = self.b
        m[:, 0] = self.b
        m[0, 0] = self.a
        return m


def _check_t(t):
    if not t > 0:
        raise ConfigError(f"test-point scale t must be positive, got {t!r}")


def build_crb_testpoints(x, t, config):
    _check_t(t)
    indices = x.support if x.is_maximal(config) else range(config.N)
    points = [t * np.eye(config.N)[i] for i in indices]
    return TestPointSet.create(x, points, config)


def build_hcrb_testpoints(x, t, config):
    """N test points: t e_i on the support, t e_i - x_(S) e_(S) off it."""
    _check_t(t)
    if not x.is_maximal(config):
        raise MaxSupportRequired(f"HCRB test points need ||x||_0 = S = {config.S}")
    eye = np.eye(config.N)
    support = set(x.support)
    shift = x.signed_xi * eye[x.xi_index]
    points = [t * eye[i] if i in support else t * eye[i] - shift for i in range(config.N)]
    return TestPointSet.create(x, points, config)


def build_extended_testpoints(x, alpha, config):
    """Union of {alpha e_l} on the support and, per support index k, the points
    alpha e_l - x_k e_k and x_k e_l - x_k e_k over off-support l. Exact duplicates are dropped."""
    if alpha is None:
        alpha = 0.02 * config.sigma
    _check_t(alpha)
    if not x.is_maximal(config):
        raise MaxSupportRequired(f"extended test points need ||x||_0 = S = {config.S}")
    eye = np.eye(config.N)
    off = x.off_support()
    candidates = [alpha * eye[l] for l in x.support]
    for k in x.support:
        xk = x.values[k]
        candidates.extend(alpha * eye[l] - xk * eye[k] for l in off)
        candidates.extend(xk * eye[l] - xk * eye[k] for l in off)
    seen = set()
    points = []
    for v in candidates:
        key = v.tobytes()
        if key not in seen:
            seen.add(key)
            points.append(v)
    if len(points) < len(candidates):
        logger.debug(f"extended test points: {len(candidates) - len(points)} duplicates removed")
    return TestPointSet.create(x, points, config)


def gram_matrix_J(tp, sigma2):
    """J_ij = exp(v_i^T v_j / sigma^2) - 1."""
    inner = tp.points @ tp.points.T / sigma2
    peak = float(np.max(inner))
    if peak > Config.GRAM_EXPONENT_LIMIT:
        raise ScaleError(
            f"v_i^T v_j / sigma^2 reaches {peak:.1f} (> {Config.GRAM_EXPONENT_LIMIT:g}); "
            "test points are too large relative to sigma")
    J = np.expm1(inner)
    return 0.5 * (J + J.T)


def hcrb_eval(x, tp, sigma2, eig_tol_rel=Config.PINV_EIG_TOL_REL):
    """tr(V J^+ V^T) with J^+ from a thresholded symmetric eigendecomposition.

    J is first scaled to unit diagonal, D^{-1/2} J D^{-1/2}, and the points are
    mapped through D^{-1/2}; the relative cutoff applies to the scaled matrix.
    Entries of J span many orders of magnitude once x is large next to sigma.
    """
    if not np.array_equal(tp.base.values, x.values):
        raise ConfigError("test points were built around a different parameter")
    J = gram_matrix_J(tp, sigma2)
    scale = 1.0 / np.sqrt(np.diag(J))
    eigvals, eigvecs = linalg.eigh(J * np.outer(scale, scale))
    lam_max = float(eigvals[-1])
    if lam_max <= 0:
        raise DegenerateGram("Gram matrix has no positive eigenvalue")
    keep = eigvals > eig_tol_rel * lam_max
    if not np.any(keep):
        raise DegenerateGram("all Gram eigenvalues fall below the cutoff")
    dropped = int(np.count_nonzero(~keep))
    if dropped:
        logger.debug(f"hcrb_eval: {dropped} of {eigvals.size} eigenvalues below cutoff")
    proj = eigvecs[:, keep].T @ (scale[:, np.newaxis] * tp.points)
    return float(np.sum(np.sum(proj * proj, axis=1) / eigvals[keep]))


def structured_inverse(p, rtol=1e-12):
    """Closed-form inverse entries (a', b', c', d') of the structured matrix.

    Raises SingularStructure when d - c, d + (r-1)c or
    q = r b^2 - a d - (r-1) a c vanishes relative to the entry scale.
    """
    a, b, c, d, r = p.a, p.b, p.c, p.d, p.r
    scale = max(abs(a), abs(b), abs(c), abs(d), np.finfo(float).tiny)
    q = r * b * b - a * d - (r - 1) * a * c
    if abs(d - c) <= rtol * scale:
        raise SingularStructure("d - c vanishes")
    if abs(d + (r - 1) * c) <= rtol * scale * max(r, 1):
        raise SingularStructure("d + (r-1) c vanishes")
    if abs(q) <= rtol * scale * scale * (r + 1):
        raise SingularStructure("q = r b^2 - a d - (r-1) a c vanishes")
    a_inv = -(d + (r - 1) * c) / q
    b_inv = b / q
    c_inv = (a * c - b * b) / ((d - c) * q)
    d_inv = ((r - 1) * b * b - (r - 2) * a * c - a * d) / ((d - c) * q)
    return a_inv, b_inv, c_inv, d_inv


def _finite_t_value(x, t, config):
    s2 = config.sigma2
    xs = x.signed_xi
    r = config.N - config.S
    a = np.expm1(t * t / s2)
    params = StructuredMatrixParams(
        a=a,
        b=np.expm1(-t * xs / s2),
        c=np.expm1(xs * xs / s2),
        d=np.expm1((t * t + xs * xs) / s2),
        r=r,
    )
    a_i, b_i, c_i, d_i = structured_inverse(params)
    return float((config.S - 1) * t * t / a
                 + t * t * a_i
                 - 2.0 * r * t * xs * b_i
                 + r * (r - 1) * xs * xs * c_i
                 + r * (t * t + xs * xs) * d_i)


def hcrb_finite_t(x, t, config):
    """Analytic HCRB for the N-point test set at finite t (r = N - S off-support points)."""
    _check_t(t)
    if not x.is_maximal(config):
        raise MaxSupportRequired(f"finite-t HCRB needs ||x||_0 = S = {config.S}")
    if config.S == config.N:
        # no off-support points; only the orthogonal support block remains
        return float(config.S * t * t / np.expm1(t * t / config.sigma2))
    try:
        return _finite_t_value(x, t, config)
    except SingularStructure as e:
        logger.warning(f"hcrb_finite_t: singular structure at t={t:g} ({e}); retrying with t*(1+1e-6)")
        return _finite_t_value(x, t * (1.0 + 1e-6), config)


def hcrb_testpoint(x, config, t):
    """Numeric HCRB for the N-point test set."""
    return hcrb_eval(x, build_hcrb_testpoints(x, t, config), config.sigma2)


def hcrb_extended(x, config, alpha=None):
    """HCRB_V: numeric HCRB for the extended test set."""
    return hcrb_eval(x, build_extended_testpoints(x, alpha, config), config.sigma2)
