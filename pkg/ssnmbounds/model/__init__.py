"""
Model package: problem instances, sparse parameters, and noise sampling.
"""

from ssnmbounds.model.problem import (
    ProblemConfig,
    SparseParam,
    GaussianSample,
    validate_param,
    hard_sparsify,
    reduce_orthonormal_model,
    snr_db_to_ratio,
    ratio_to_snr_db,
    param_at_snr,
)
from ssnmbounds.model.sampling import (
    make_rng,
    spawn_rngs,
    box_muller,
    sample_observation,
    sample_observations,
)

__all__ = [
    'ProblemConfig',
    'SparseParam',
    'GaussianSample',
    'validate_param',
    'hard_sparsify',
    'reduce_orthonormal_model',
    'snr_db_to_ratio',
    'ratio_to_snr_db',
    'param_at_snr',
    'make_rng',
    'spawn_rngs',
    'box_muller',
    'sample_observation',
    'sample_observations',
]
