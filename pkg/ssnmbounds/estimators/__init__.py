"""
Estimators package.

Contains the biased benchmarks (ML, hard thresholding, oracle), the identity
map, and the unbiased constructions (the band-sign family, the no-UMVU
counterexample and the locally optimal tanh-product estimator).
"""

from ssnmbounds.estimators.base import Estimator
from ssnmbounds.estimators.classic import (
    IdentityEstimator,
    MLEstimator,
    HardThresholdingEstimator,
    OracleEstimator,
    ml_estimate,
    ht_estimate,
    oracle_estimate,
)
from ssnmbounds.estimators.unbiased import (
    FamilyEstimator,
    CounterexampleEstimator,
    Lemma2OptimalEstimator,
    family_estimate,
    counterexample_estimate,
    lemma2_optimal_estimate,
    counterexample_reference,
    counterexample_coefficients,
    counterexample_optimal_A,
    counterexample_variance_at_reference,
)
from ssnmbounds.estimators.factory import ESTIMATOR_KINDS, build_estimator

__all__ = [
    'Estimator',
    'IdentityEstimator',
    'MLEstimator',
    'HardThresholdingEstimator',
    'OracleEstimator',
    'ml_estimate',
    'ht_estimate',
    'oracle_estimate',
    'FamilyEstimator',
    'CounterexampleEstimator',
    'Lemma2OptimalEstimator',
    'family_estimate',
    'counterexample_estimate',
    'lemma2_optimal_estimate',
    'counterexample_reference',
    'counterexample_coefficients',
    'counterexample_optimal_A',
    'counterexample_variance_at_reference',
    'ESTIMATOR_KINDS',
    'build_estimator',
]
