"""SNR sweeps behind the four figures.

Each ``run_figN`` returns a SweepResult whose rows follow the SNR grid order,
independent of the number of worker threads.
"""
import logging
import time

import numpy as np

from ssnmbounds.bounds.closed_form import bb_upper, crb, hcrb_closed
from ssnmbounds.bounds.numeric_upper import UnbiasednessGrid, bb_upper_numeric
from ssnmbounds.bounds.test_points import hcrb_extended
from ssnmbounds.config.run_config import QuadratureSpec
from ssnmbounds.experiments.sweep import SweepResult, build_metadata
from ssnmbounds.model.problem import ProblemConfig, param_at_snr, ratio_to_snr_db, validate_param
from ssnmbounds.model.sampling import box_muller, make_rng
from ssnmbounds.risk.exact import ht_mse_exact, ml_mse_exact
from ssnmbounds.workers.pool_worker import run_parallel

logger = logging.getLogger('ssnmbounds')

FIG1_GRID_DB = np.linspace(-30.0, 10.0, 41)
FIG34_GRID_DB = np.linspace(-20.0, 20.0, 41)
FIG2_RATIOS = (4.0, 9.0, 16.0, 25.0)


def _pattern(N, head):
    pattern = np.zeros(N)
    pattern[:len(head)] = head
    return pattern


def _grid(snr_grid_db, default):
    return np.asarray(default if snr_grid_db is None else snr_grid_db, dtype=float)


def run_fig1(sigma2=1.0, N=5, S=1, snr_grid_db=None, Q=20, alpha=None, exact_marginals=True,
             quad=None, threads=1):
    """HCRB, HCRB_V, BB_c and BB'_c at x = c e_0."""
    config = ProblemConfig(N=N, S=S, sigma2=sigma2)
    quad = quad or QuadratureSpec()
    grid = _grid(snr_grid_db, FIG1_GRID_DB)
    alpha = 0.02 * config.sigma if alpha is None else alpha
    pattern = _pattern(N, np.ones(S))
    logger.info(f"Figure 1: N={N}, S={S}, {grid.size} SNR points, Q={Q}")
    start = time.time()

    def point(snr):
        x = param_at_snr(pattern, snr, config)
        ug = UnbiasednessGrid.default(x, config, exact_marginals=exact_marginals)
        return (hcrb_closed(x, config),
                hcrb_extended(x, config, alpha),
                bb_upper(x, config, quad),
                bb_upper_numeric(x, Q, ug, config))

    rows = np.array(run_parallel(point, grid, threads=threads, label="figure 1"))
    result = SweepResult(
        config=config,
        snr_db=grid,
        columns={"hcrb": rows[:, 0], "hcrb_v": rows[:, 1], "bb_c": rows[:, 2], "bb_c_prime": rows[:, 3]},
        meta=build_metadata(config, figure="fig1", seed=None, threads=threads, quadrature=quad, Q=Q,
                            alpha=alpha, constraint_grid=UnbiasednessGrid.default_id(exact_marginals)),
    )
    logger.info(f"Figure 1 finished in {time.time() - start:.1f}s")
    return result


def generate_fig2_parameters(config, snr_ratio, n_vectors, rng):
    """Random maximal-support parameters with smallest magnitude exactly xi.

    One support entry equals xi; the other S-1 are xi (1 + 3 sigma |q|), q standard
    normal, and the support positions are a random permutation.
    """
    xi = config.sigma * float(np.sqrt(snr_ratio))
    params = []
    for _ in range(int(n_vectors)):
        q = box_muller(rng, config.S - 1)
        magnitudes = np.concatenate([[xi], xi * (1.0 + 3.0 * config.sigma * np.abs(q))])
        positions = rng.permutation(config.N)[:config.S]
        values = np.zeros(config.N)
        values[positions] = magnitudes
        params.append(validate_param(values, config))
    return params


def run_fig2(sigma2=1.0, N=10, S=4, snr_ratios=FIG2_RATIOS, n_vectors=100, seed=0, quad=None, threads=1):
    """Exact ML MSE over random parameter vectors at fixed xi^2 / sigma^2."""
    config = ProblemConfig(N=N, S=S, sigma2=sigma2)
    quad = quad or QuadratureSpec()
    rng = make_rng(seed)
    ratios = [float(r) for r in snr_ratios]
    logger.info(f"Figure 2: N={N}, S={S}, ratios {ratios}, {n_vectors} vectors each, seed {seed}")
    start = time.time()

    params = [(ratio, i, x) for ratio in ratios
              for i, x in enumerate(generate_fig2_parameters(config, ratio, n_vectors, rng))]
    mses = np.array(run_parallel(lambda item: ml_mse_exact(item[2], config, quad), params,
                                 threads=threads, label="figure 2"))

    ratio_col = np.array([p[0] for p in params])
    mean_col = np.empty_like(mses)
    std_col = np.empty_like(mses)
    for ratio in ratios:
        sel = ratio_col == ratio
        mean_col[sel] = mses[sel].mean()
        std_col[sel] = mses[sel].std()
    result = SweepResult(
        config=config,
        snr_db=ratio_to_snr_db(ratio_col),
        columns={
            "snr_ratio": ratio_col,
            "vector_index": np.array([p[1] for p in params], dtype=float),
            "mse_ml": mses,
            "mse_ml_mean": mean_col,
            "mse_ml_std": std_col,
        },
        meta=build_metadata(config, figure="fig2", seed=seed, threads=threads, quadrature=quad,
                            n_vectors=n_vectors, rng="PCG64+Box-Muller"),
    )
    logger.info(f"Figure 2 finished in {time.time() - start:.1f}s")
    return result


def run_fig3(sigma2=1.0, N=10, S=4, snr_grid_db=None, seed=None, threshold=None, quad=None, threads=1):
    """Bounds against the exact ML and HT risks on x = c (1, ..., 1, 0, ..., 0)."""
    config = ProblemConfig(N=N, S=S, sigma2=sigma2)
    quad = quad or QuadratureSpec()
    grid = _grid(snr_grid_db, FIG34_GRID_DB)
    T = config.default_threshold() if threshold is None else float(threshold)
    pattern = _pattern(N, np.ones(S))
    logger.info(f"Figure 3: N={N}, S={S}, {grid.size} SNR points, HT threshold {T:.4f}")
    start = time.time()

    def point(snr):
        x = param_at_snr(pattern, snr, config)
        return (crb(x, config),
                hcrb_closed(x, config),
                bb_upper(x, config, quad),
                ml_mse_exact(x, config, quad),
                ht_mse_exact(x, T, config))

    rows = np.array(run_parallel(point, grid, threads=threads, label="figure 3"))
    result = SweepResult(
        config=config,
        snr_db=grid,
        columns={"crb": rows[:, 0], "hcrb": rows[:, 1], "bb_c": rows[:, 2],
                 "mse_ml": rows[:, 3], "mse_ht": rows[:, 4]},
        meta=build_metadata(config, figure="fig3", seed=seed, threads=threads, quadrature=quad, threshold=T),
    )
    logger.info(f"Figure 3 finished in {time.time() - start:.1f}s")
    return result


FIG4_PATTERNS = {
    "ratio_r": (1.0, 1.0, 1.0, 1.0),
    "ratio_r2": (10.0, 1.0, 1.0, 1.0),
    "ratio_r3": (0.1, 1.0, 1.0, 1.0),
}


def run_fig4(sigma2=1.0, N=10, S=4, snr_grid_db=None, quad=None, threads=1):
    """BB_c / HCRB along the rays R, R2 and R3; the SNR uses the smallest nonzero entry."""
    config = ProblemConfig(N=N, S=S, sigma2=sigma2)
    quad = quad or QuadratureSpec()
    grid = _grid(snr_grid_db, FIG34_GRID_DB)
    patterns = {name: _pattern(N, (list(head) + [1.0] * S)[:S]) for name, head in FIG4_PATTERNS.items()}
    logger.info(f"Figure 4: N={N}, S={S}, {grid.size} SNR points")
    start = time.time()

    def point(snr):
        out = []
        for pattern in patterns.values():
            x = param_at_snr(pattern, snr, config)
            out.append(bb_upper(x, config, quad) / hcrb_closed(x, config))
        return out

    rows = np.array(run_parallel(point, grid, threads=threads, label="figure 4"))
    result = SweepResult(
        config=config,
        snr_db=grid,
        columns={name: rows[:, i] for i, name in enumerate(patterns)},
        meta=build_metadata(config, figure="fig4", seed=None, threads=threads, quadrature=quad,
                            patterns={name: p.tolist() for name, p in patterns.items()}),
    )
    logger.info(f"Figure 4 finished in {time.time() - start:.1f}s")
    return result


FIGURES = {"fig1": run_fig1, "fig2": run_fig2, "fig3": run_fig3, "fig4": run_fig4}

# RunConfig fields each figure accepts
FIGURE_KEYS = {
    "fig1": ("sigma2", "N", "S", "snr_grid_db", "Q", "alpha", "exact_marginals"),
    "fig2": ("sigma2", "N", "S", "snr_ratios", "n_vectors", "seed"),
    "fig3": ("sigma2", "N", "S", "snr_grid_db", "seed", "threshold"),
    "fig4": ("sigma2", "N", "S", "snr_grid_db"),
}
