"""Numerical upper bound BB'_c.

The correction x'_k(y) = x_k(y) - y_k of one off-support component is restricted
to functions that are piecewise constant on a Q^(S+1) grid over the active
coordinates {k} U supp(x) (a hypercube of side 10 sigma centred at x) and zero
outside it. Its MSE at x is then a diagonal quadratic in the cell values, and
unbiasedness over X_S is a set of linear equalities, so the best correction
solves an equality-constrained QP.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Tuple

import numpy as np
from scipy import linalg

from ssnmbounds.config.settings import Config
from ssnmbounds.errors import ConfigError, DimensionGuard, IndexOnSupport, MaxSupportRequired, NumericalFailure
from ssnmbounds.risk.gaussian import interval_moments, interval_prob

logger = logging.getLogger('ssnmbounds')

BOX_SIDE_SIGMAS = 10.0


@dataclass(eq=False)
class PiecewiseCorrection:
    """Cell values of x'_k on the grid. ``coefficients`` is flat, C-ordered over ``active_dims``."""

    k: int
    active_dims: Tuple[int, ...]
    Q: int
    delta: float
    center: np.ndarray
    coefficients: np.ndarray

    @property
    def k_pos(self):
        return self.active_dims.index(self.k)

    @property
    def n_cells(self):
        return self.Q ** len(self.active_dims)

    def edges(self):
        """(S+1, Q+1) array of cell boundaries per active dimension."""
        offsets = self.delta * np.arange(self.Q + 1) - 0.5 * self.delta * self.Q
        return self.center[:, np.newaxis] + offsets[np.newaxis, :]

    def evaluate(self, y):
        """Value of the correction at observation(s) y of shape (N,) or (n, N)."""
        single = np.ndim(y) == 1
        y = np.atleast_2d(np.asarray(y, dtype=float))
        lows = self.center - 0.5 * self.delta * self.Q
        cell = np.floor((y[:, list(self.active_dims)] - lows) / self.delta).astype(int)
        inside = np.all((cell >= 0) & (cell < self.Q), axis=1)
        flat = np.ravel_multi_index(tuple(np.clip(cell, 0, self.Q - 1).T), (self.Q,) * len(self.active_dims))
        out = np.where(inside, self.coefficients[flat], 0.0)
        return float(out[0]) if single else out


@dataclass(eq=False)
class UnbiasednessGrid:
    """Parameter restrictions theta (length S+1, at least one zero) where E_theta{x'_k} = 0 is imposed.

    With ``exact_marginals`` the point rows are complemented by the rows that
    make the piecewise-constant correction unbiased on every theta with a zero
    coordinate.
    """

    thetas: np.ndarray
    exact_marginals: bool = True
    grid_id: str = field(default="custom")

    def __post_init__(self):
        self.thetas = np.atleast_2d(np.asarray(self.thetas, dtype=float))
        if self.thetas.size and not np.all(np.any(self.thetas == 0.0, axis=1)):
            raise ConfigError("every theta must have at least one zero coordinate")

    @classmethod
    def default(cls, x, config, exact_marginals=True):
        sigma = config.sigma
        levels = [0.0] + [s * m * sigma for m in (1, 2, 3) for s in (1.0, -1.0)]
        levels += [float(x.values[l]) for l in x.support]
        levels = list(dict.fromkeys(levels))
        thetas = [theta for theta in itertools.product(levels, repeat=x.l0 + 1) if 0.0 in theta]
        return cls(thetas=np.array(thetas, dtype=float), exact_marginals=exact_marginals,
                   grid_id=cls.default_id(exact_marginals))

    @staticmethod
    def default_id(exact_marginals=True):
        return "points(0,+-1,+-2,+-3 sigma,x)" + ("+marginals" if exact_marginals else "")


def build_grid(x, k, Q, config):
    """Zero correction for component k on a Q^(S+1) grid centred at x."""
    if not x.is_maximal(config):
        raise MaxSupportRequired(f"BB'_c needs ||x||_0 = S = {config.S}")
    if k in x.support:
        raise IndexOnSupport(f"component {k} lies on the support {x.support}")
    if not 0 <= k < config.N:
        raise ConfigError(f"component index {k} out of range")
    if int(Q) != Q or Q < 2:
        raise ConfigError(f"Q must be an integer >= 2, got {Q!r}")
    active = tuple(sorted(set(x.support) | {k}))
    n_cells = int(Q) ** len(active)
    if n_cells > Config.QP_MAX_CELLS:
        raise DimensionGuard(
            f"Q^(S+1) = {n_cells} cells exceeds the limit of {Config.QP_MAX_CELLS}")
    return PiecewiseCorrection(
        k=int(k),
        active_dims=active,
        Q=int(Q),
        delta=BOX_SIDE_SIGMAS * config.sigma / Q,
        center=np.array([x.values[d] for d in active], dtype=float),
        coefficients=np.zeros(n_cells),
    )


def _dim_factors(pc, theta, sigma):
    edges = pc.edges()
    probs, firsts = [], []
    for d in range(len(pc.active_dims)):
        p, m1, _ = interval_moments(edges[d, :-1], edges[d, 1:], theta[d], sigma)
        probs.append(p)
        firsts.append(m1)
    return probs, firsts


def _outer(vectors):
    return reduce(np.multiply.outer, vectors).reshape(-1)


def cell_gaussian_moments(pc, theta, sigma2):
    """Cell probabilities and first moments of y_k under y|active ~ N(theta, sigma2 I)."""
    sigma = float(np.sqrt(sigma2))
    theta = np.asarray(theta, dtype=float)
    probs, firsts = _dim_factors(pc, theta, sigma)
    p_cell = _outer(probs)
    swapped = list(probs)
    swapped[pc.k_pos] = firsts[pc.k_pos]
    return p_cell, _outer(swapped)


def _marginal_rows(pc, sigma):
    """Rows sum_{j_d} c_j P(y_d in I_{j_d} | theta_d = 0) for every dim d and remaining index."""
    n_dims = len(pc.active_dims)
    edges = pc.edges()
    idx = np.arange(pc.n_cells).reshape((pc.Q,) * n_dims)
    blocks = []
    for d in range(n_dims):
        p0 = interval_prob(edges[d, :-1] / sigma, edges[d, 1:] / sigma)
        lines = np.moveaxis(idx, d, -1).reshape(-1, pc.Q)
        rows = np.zeros((lines.shape[0], pc.n_cells))
        rows[np.arange(lines.shape[0])[:, np.newaxis], lines] = p0[np.newaxis, :]
        blocks.append(rows)
    return np.vstack(blocks)


def assemble_component_qp(pc, ug, x, sigma2):
    """QP data (diag_H, lin_b, A) for objective sigma2 + sum H c^2 + 2 b^T c subject to A c = 0."""
    theta_x = np.array([x.values[d] for d in pc.active_dims], dtype=float)
    theta_x[pc.k_pos] = 0.0
    diag_H, lin_b = cell_gaussian_moments(pc, theta_x, sigma2)
    rows = [cell_gaussian_moments(pc, theta, sigma2)[0] for theta in ug.thetas]
    A = np.array(rows) if rows else np.zeros((0, pc.n_cells))
    if ug.exact_marginals:
        A = np.vstack([A, _marginal_rows(pc, float(np.sqrt(sigma2)))])
    logger.debug(f"QP for component {pc.k}: {pc.n_cells} cells, {A.shape[0]} constraint rows")
    return diag_H, lin_b, A


def _independent_rows(A, cos_tol=1e-12):
    norms = np.linalg.norm(A, axis=1)
    A = A[norms > 0] / norms[norms > 0, np.newaxis]
    if A.shape[0] < 2:
        return A
    cos = A @ A.T
    keep = np.ones(A.shape[0], dtype=bool)
    for i in range(A.shape[0]):
        if keep[i]:
            dup = cos[i, i + 1:] > 1.0 - cos_tol
            keep[i + 1:][dup] = False
    return A[keep]


def solve_component_qp(diag_H, lin_b, A, reg=None, sigma2=1.0):
    """Minimise sigma2 + c^T diag(H) c + 2 b^T c subject to A c = 0.

    Null-space method: an SVD of the normalised, de-duplicated constraint rows
    yields an orthonormal basis Z of {c : A c = 0}; the reduced system
    Z^T (diag(H) + reg I) Z z = -Z^T b is solved by least squares.

    Returns:
        tuple: (coefficients, objective_value) with objective_value in [0, sigma2].
    """
    H = np.asarray(diag_H, dtype=float)
    b = np.asarray(lin_b, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float)) if np.size(A) else np.zeros((0, H.size))
    n = H.size
    if b.size != n or A.shape[1] != n:
        raise ConfigError("QP shapes are inconsistent")
    if reg is None:
        reg = 1e-12 * float(np.max(H)) if n else 0.0

    rows = _independent_rows(A) if A.shape[0] else A
    if rows.shape[0]:
        _, s, vt = linalg.svd(rows, full_matrices=True)
        tol = s.max() * max(rows.shape) * np.finfo(float).eps if s.size else 0.0
        rank = int(np.count_nonzero(s > tol))
        Z = vt[rank:].T
    else:
        rank = 0
        Z = np.eye(n)
    logger.debug(f"QP: {n} unknowns, {A.shape[0]} rows, rank {rank}")

    if Z.shape[1] == 0:
        c = np.zeros(n)
    else:
        reduced = Z.T @ ((H + reg)[:, np.newaxis] * Z)
        z = linalg.lstsq(reduced, -(Z.T @ b))[0]
        c = Z @ z

    if A.shape[0]:
        norms = np.linalg.norm(A, axis=1)
        norms[norms == 0] = 1.0
        residual = float(np.max(np.abs((A / norms[:, np.newaxis]) @ c)))
        if residual > 1e-8 * max(1.0, float(np.max(np.abs(c)))):
            raise NumericalFailure(f"QP solution violates the constraints (residual {residual:.3e})")

    objective = sigma2 + float(np.dot(H, c * c)) + 2.0 * float(np.dot(b, c))
    return c, float(min(max(objective, 0.0), sigma2))


def solve_correction(x, k, Q, ug, config):
    """Optimal piecewise-constant correction for component k and its MSE."""
    pc = build_grid(x, k, Q, config)
    if ug is None:
        ug = UnbiasednessGrid.default(x, config)
    diag_H, lin_b, A = assemble_component_qp(pc, ug, x, config.sigma2)
    pc.coefficients, objective = solve_component_qp(diag_H, lin_b, A, sigma2=config.sigma2)
    return pc, objective


def bb_upper_numeric(x, Q, ug, config):
    """BB'_c(x) = S sigma^2 + (N - S) * (per-component QP optimum).

    Every off-support component sees the same QP (x_k = 0 and the same support
    values), so one solve is scaled by N - S.
    """
    if not x.is_maximal(config):
        raise MaxSupportRequired(f"BB'_c needs ||x||_0 = S = {config.S}")
    off = x.off_support()
    if not off:
        return config.S * config.sigma2
    _, objective = solve_correction(x, off[0], Q, ug, config)
    return config.S * config.sigma2 + len(off) * objective
