"""Single-parameter evaluations behind the ``bounds`` and ``risk`` commands."""
import logging
from collections import OrderedDict

import numpy as np

from ssnmbounds.bounds.closed_form import bb_upper, bb_upper_envelope, crb, hcrb_closed
from ssnmbounds.bounds.numeric_upper import UnbiasednessGrid, bb_upper_numeric
from ssnmbounds.bounds.test_points import hcrb_extended, hcrb_finite_t
from ssnmbounds.config.settings import Config
from ssnmbounds.experiments.sweep import SweepResult, build_metadata
from ssnmbounds.model.problem import param_at_snr, ratio_to_snr_db
from ssnmbounds.risk.exact import ht_risk_exact, ml_risk_exact
from ssnmbounds.risk.monte_carlo import monte_carlo_risk
from ssnmbounds.workers.pool_worker import run_parallel

logger = logging.getLogger('ssnmbounds')


def _snr_db_of(x):
    return float(ratio_to_snr_db(x.snr)) if x.snr else float("nan")


def _qp_fits(config, Q):
    return Q is not None and Q ** (config.S + 1) <= Config.QP_MAX_CELLS


def bound_values(x, config, quad, Q=None, alpha=None, t=None, exact_marginals=True):
    """All bounds that apply at x, keyed by column name."""
    values = OrderedDict()
    values["crb"] = crb(x, config)
    values["hcrb"] = hcrb_closed(x, config)
    if not x.is_maximal(config):
        return values
    if t is not None:
        values["hcrb_t"] = hcrb_finite_t(x, t, config)
    values["hcrb_v"] = hcrb_extended(x, config, alpha)
    values["bb_c"] = bb_upper(x, config, quad)
    values["bb_c_envelope"] = bb_upper_envelope(x, config)
    if _qp_fits(config, Q):
        ug = UnbiasednessGrid.default(x, config, exact_marginals=exact_marginals)
        values["bb_c_prime"] = bb_upper_numeric(x, Q, ug, config)
    elif Q is not None:
        logger.warning(f"Skipping BB'_c: Q^(S+1) = {Q ** (config.S + 1)} exceeds {Config.QP_MAX_CELLS} cells")
    return values


def bounds_eval(x, config, quad, Q=None, alpha=None, t=None, exact_marginals=True, seed=None, threads=1):
    values = bound_values(x, config, quad, Q, alpha, t, exact_marginals)
    return SweepResult(
        config=config,
        snr_db=[_snr_db_of(x)],
        columns={name: [v] for name, v in values.items()},
        meta=build_metadata(config, command="bounds eval", x=x.values.tolist(), seed=seed, threads=threads,
                            quadrature=quad, Q=Q, alpha=alpha, t=t,
                            constraint_grid=UnbiasednessGrid.default_id(exact_marginals) if Q else None),
    )


def bounds_sweep(pattern, config, snr_grid_db, quad, Q=None, alpha=None, t=None, exact_marginals=True,
                 seed=None, threads=1):
    """Bounds along the ray through ``pattern``, scaled so its smallest entry hits each SNR."""
    grid = np.asarray(snr_grid_db, dtype=float)
    logger.info(f"Bounds sweep: {grid.size} SNR points, N={config.N}, S={config.S}")
    rows = run_parallel(
        lambda snr: bound_values(param_at_snr(pattern, snr, config), config, quad, Q, alpha, t, exact_marginals),
        grid, threads=threads, label="bounds sweep")
    names = list(rows[0])
    return SweepResult(
        config=config,
        snr_db=grid,
        columns={name: [row[name] for row in rows] for name in names},
        meta=build_metadata(config, command="bounds sweep", pattern=np.asarray(pattern, dtype=float).tolist(),
                            seed=seed, threads=threads, quadrature=quad, Q=Q, alpha=alpha, t=t,
                            constraint_grid=UnbiasednessGrid.default_id(exact_marginals) if Q else None),
    )


def _report_result(report, x, config, meta):
    columns = OrderedDict()
    columns["mse"] = [report.mse]
    columns["variance"] = [report.variance]
    if report.n_trials is not None:
        columns["std_error"] = [report.std_error]
        columns["n_trials"] = [report.n_trials]
    for k in range(config.N):
        columns[f"bias_{k}"] = [report.bias[k]]
    if report.bias_std_error is not None:
        for k in range(config.N):
            columns[f"bias_se_{k}"] = [report.bias_std_error[k]]
    for k in range(config.N):
        columns[f"mse_{k}"] = [report.per_component_mse[k]]
    return SweepResult(config=config, snr_db=[_snr_db_of(x)], columns=columns, meta=meta)


def risk_mc(est, x, config, n_trials, seed, threads=1):
    report = monte_carlo_risk(est, x, config, n_trials, seed, workers=threads)
    meta = build_metadata(config, command="risk mc", x=x.values.tolist(), estimator=est.describe(),
                          seed=seed, threads=threads, workers=threads, n_trials=n_trials,
                          rng="PCG64+Box-Muller, SeedSequence.spawn per worker")
    return _report_result(report, x, config, meta)


def risk_ml_exact(x, config, quad, seed=None, threads=1):
    report = ml_risk_exact(x, config, quad, threads=threads)
    meta = build_metadata(config, command="risk ml-exact", x=x.values.tolist(), seed=seed, threads=threads,
                          quadrature=quad)
    return _report_result(report, x, config, meta)


def risk_ht_exact(x, config, threshold=None, seed=None, threads=1):
    T = config.default_threshold() if threshold is None else float(threshold)
    report = ht_risk_exact(x, T, config)
    meta = build_metadata(config, command="risk ht-exact", x=x.values.tolist(), threshold=T, seed=seed,
                          threads=threads)
    return _report_result(report, x, config, meta)
