"""Seedable Gaussian noise.

All randomness goes through ``numpy.random.Generator(PCG64(seed))``; normal
variates are produced by the Box-Muller transform from the generator's
uniform stream so that sample paths depend only on PCG64 and this module.
Parallel work splits a master seed with ``SeedSequence(master).spawn(k)``.
"""
import numpy as np

from ssnmbounds.model.problem import GaussianSample


def make_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(None if seed is None else int(seed)))


def spawn_rngs(master_seed, count):
    """One independent generator per worker, derived from ``master_seed``."""
    children = np.random.SeedSequence(int(master_seed)).spawn(int(count))
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def box_muller(rng, size):
    """Standard normal array of the given shape."""
    shape = (size,) if np.isscalar(size) else tuple(size)
    total = int(np.prod(shape))
    pairs = (total + 1) // 2
    u1 = 1.0 - rng.random(pairs)  # (0, 1], keeps the log finite
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
    return z[:total].reshape(shape)


def sample_observations(x, config, n, rng):
    """``n`` independent observations stacked as an (n, N) array."""
    noise = box_muller(rng, (int(n), config.N))
    return x.values[np.newaxis, :] + config.sigma * noise


def sample_observation(x, config, rng_state):
    rng = make_rng(rng_state)
    return GaussianSample(y=sample_observations(x, config, 1, rng)[0])
