import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ssnmbounds.config.settings import Config
from ssnmbounds.errors import ConfigError
from ssnmbounds.model.sampling import sample_observations, spawn_rngs
from ssnmbounds.workers.pool_worker import run_parallel

logger = logging.getLogger('ssnmbounds')

BATCH_SIZE = 50_000


@dataclass(frozen=True, eq=False)
class RiskReport:
    """MSE = ||bias||^2 + variance, with per-component MSEs summing to ``mse``.

    Monte Carlo reports also carry standard errors and the number of trials;
    exact reports leave them as None.
    """

    mse: float
    bias: np.ndarray
    variance: float
    per_component_mse: np.ndarray
    std_error: Optional[float] = None
    n_trials: Optional[int] = None
    bias_std_error: Optional[np.ndarray] = None
    workers: Optional[int] = None

    def as_dict(self):
        out = {
            "mse": self.mse,
            "variance": self.variance,
            "bias": self.bias.tolist(),
            "per_component_mse": self.per_component_mse.tolist(),
        }
        if self.n_trials is not None:
            out.update(std_error=self.std_error, n_trials=self.n_trials,
                       bias_std_error=self.bias_std_error.tolist(), workers=self.workers)
        return out


def _block_sums(est, x, config, n, rng):
    N = config.N
    sum_e = np.zeros(N)
    sum_e2 = np.zeros(N)
    sum_sq = 0.0
    sum_sq2 = 0.0
    remaining = n
    while remaining > 0:
        m = min(BATCH_SIZE, remaining)
        err = est.estimate(sample_observations(x, config, m, rng)) - x.values[np.newaxis, :]
        sq = np.sum(err * err, axis=1)
        sum_e += err.sum(axis=0)
        sum_e2 += (err * err).sum(axis=0)
        sum_sq += float(sq.sum())
        sum_sq2 += float((sq * sq).sum())
        remaining -= m
    return sum_e, sum_e2, sum_sq, sum_sq2


def monte_carlo_risk(est, x, config, n_trials, master_seed, workers=1):
    """
    Sample-average MSE, bias and variance of ``est`` at ``x``.

    Trials are split into ``workers`` blocks; block i draws from the i-th child
    of SeedSequence(master_seed), so results depend on (master_seed, workers) only.

    Args:
        est (Estimator): Estimator under test.
        x (SparseParam): True parameter.
        config (ProblemConfig): Problem instance.
        n_trials (int): Number of observations, at least Config.MC_MIN_TRIALS.
        master_seed (int): Seed for the block streams.
        workers (int): Number of blocks (and threads).

    Returns:
        RiskReport: Estimates with standard errors.
    """
    n_trials = int(n_trials)
    workers = max(1, int(workers or 1))
    if n_trials < Config.MC_MIN_TRIALS:
        raise ConfigError(f"n_trials must be at least {Config.MC_MIN_TRIALS}, got {n_trials}")
    sizes = [n_trials // workers + (1 if i < n_trials % workers else 0) for i in range(workers)]
    rngs = spawn_rngs(master_seed, workers)
    logger.info(f"Monte Carlo: {est.kind} estimator, {n_trials} trials in {workers} block(s), seed {master_seed}")

    blocks = run_parallel(lambda i: _block_sums(est, x, config, sizes[i], rngs[i]),
                          range(workers), threads=workers, label="monte carlo blocks")

    sum_e = sum(b[0] for b in blocks)
    sum_e2 = sum(b[1] for b in blocks)
    sum_sq = sum(b[2] for b in blocks)
    sum_sq2 = sum(b[3] for b in blocks)

    n = float(n_trials)
    bias = sum_e / n
    per_component = sum_e2 / n
    mse = float(per_component.sum())
    variance = mse - float(np.dot(bias, bias))
    sq_var = max(sum_sq2 / n - (sum_sq / n) ** 2, 0.0) * n / (n - 1.0)
    comp_var = np.maximum(per_component - bias * bias, 0.0) * n / (n - 1.0)
    return RiskReport(
        mse=mse,
        bias=bias,
        variance=variance,
        per_component_mse=per_component,
        std_error=float(np.sqrt(sq_var / n)),
        n_trials=n_trials,
        bias_std_error=np.sqrt(comp_var / n),
        workers=workers,
    )
