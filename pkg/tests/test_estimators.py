import os
import sys
import logging

import numpy as np
import pytest
from dotenv import load_dotenv

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ssnmbounds.bounds.closed_form import bb_upper
from ssnmbounds.errors import ConfigError, DimensionMismatch, MaxSupportRequired, ScopeError
from ssnmbounds.estimators.classic import (HardThresholdingEstimator, IdentityEstimator, MLEstimator,
                                           OracleEstimator, ht_estimate, ml_estimate, oracle_estimate)
from ssnmbounds.estimators.factory import ESTIMATOR_KINDS, build_estimator
from ssnmbounds.estimators.unbiased import (CounterexampleEstimator, FamilyEstimator, Lemma2OptimalEstimator,
                                            band_sign, counterexample_coefficients, counterexample_estimate,
                                            counterexample_optimal_A, counterexample_reference,
                                            counterexample_variance_at_reference, family_estimate,
                                            lemma2_optimal_estimate)
from ssnmbounds.model.problem import ProblemConfig, param_at_snr, validate_param
from ssnmbounds.model.sampling import make_rng, sample_observations
from ssnmbounds.risk.monte_carlo import monte_carlo_risk

load_dotenv()
logging.basicConfig(level=logging.INFO)

FAMILY_PARAMS = [(1.0, 0.5, 0.5), (-0.7, 0.2, 1.0), (2.5, 1.0, 0.3)]


def random_param(config, rng):
    """Random x in X_S with between 0 and S nonzero entries."""
    values = np.zeros(config.N)
    count = int(rng.integers(0, config.S + 1))
    positions = rng.permutation(config.N)[:count]
    values[positions] = rng.normal(scale=1.5, size=count)
    return validate_param(values, config)


def test_classic_estimators():
    config = ProblemConfig(N=5, S=2, sigma2=1.0)
    y = np.array([0.3, -2.5, 1.0, 4.0, -0.1])
    np.testing.assert_array_equal(ml_estimate(y, config), [0.0, -2.5, 0.0, 4.0, 0.0])
    np.testing.assert_array_equal(ht_estimate(y, 1.0, config), [0.0, -2.5, 1.0, 4.0, 0.0])
    np.testing.assert_array_equal(oracle_estimate(y, (0, 2), config), [0.3, 0.0, 1.0, 0.0, 0.0])
    np.testing.assert_array_equal(IdentityEstimator(config)(y), y)

    Y = np.vstack([y, -y])
    out = MLEstimator(config).estimate(Y)
    assert out.shape == (2, 5)
    np.testing.assert_array_equal(out[1], -out[0])

    ht = HardThresholdingEstimator(config)
    assert abs(ht.threshold - np.sqrt(2.0 * np.log(5))) < 1e-12
    assert ht.describe() == {"kind": "ht", "threshold": ht.threshold}

    with pytest.raises(DimensionMismatch):
        MLEstimator(config).estimate(np.ones(4))
    with pytest.raises(ConfigError):
        HardThresholdingEstimator(config, 0.0)
    with pytest.raises(ConfigError):
        OracleEstimator(config, (0, 0))
    with pytest.raises(ConfigError):
        OracleEstimator(config, (0, 7))


def test_ht_commutes_with_permutation_and_sign():
    config = ProblemConfig(N=8, S=3, sigma2=1.0)
    rng = np.random.default_rng(12)
    Y = rng.normal(scale=2.0, size=(40, 8))
    T = config.default_threshold()
    out = ht_estimate(Y, T, config)
    np.testing.assert_array_equal(ht_estimate(-Y, T, config), -out)
    for _ in range(5):
        perm = rng.permutation(8)
        np.testing.assert_array_equal(ht_estimate(Y[:, perm], T, config), out[:, perm])


def test_band_sign():
    y = np.array([-0.7, -0.5, -0.3, 0.0, 0.45, 0.6, 0.61])
    np.testing.assert_array_equal(band_sign(y, 0.4, 0.6), [0.0, -1.0, 0.0, 0.0, 1.0, 1.0, 0.0])


def test_unbiased_estimators_need_s_below_n():
    config = ProblemConfig(N=3, S=3, sigma2=1.0)
    with pytest.raises(ScopeError):
        FamilyEstimator(config, 1.0, 0.5, 0.5)
    with pytest.raises(ScopeError):
        CounterexampleEstimator(config, 1.0)
    with pytest.raises(ScopeError):
        counterexample_reference(config)
    with pytest.raises(ConfigError):
        FamilyEstimator(ProblemConfig(N=3, S=1), 1.0, 0.0, 0.5)
    config = ProblemConfig(N=4, S=2)
    with pytest.raises(MaxSupportRequired):
        Lemma2OptimalEstimator(config, validate_param([1.0, 0, 0, 0], config))


def test_family_only_touches_component_zero():
    config = ProblemConfig(N=4, S=2, sigma2=1.0)
    y = np.array([2.0, 0.7, -0.9, 3.0])
    out = family_estimate(y, 1.5, 0.5, 0.5, config)
    np.testing.assert_array_equal(out[1:], y[1:])
    assert out[0] == 2.0 + 1.5 * 2.0 * (1.0 * -1.0)
    assert counterexample_estimate(y, 2.0, config)[0] == 2.0


def test_unbiasedness_suite():
    """Per-component bias of the family and counterexample estimators within 4 SE of zero"""
    rng = np.random.default_rng(13)
    chunks, chunk_size = 5, 200000
    n = chunks * chunk_size
    for i in range(20):
        config = ProblemConfig(N=5, S=1 + i % 3, sigma2=1.0)
        x = random_param(config, rng)
        estimators = [FamilyEstimator(config, *p) for p in FAMILY_PARAMS]
        estimators.append(CounterexampleEstimator(config, counterexample_optimal_A(config)))
        sums = np.zeros((len(estimators), 2))
        noise_sum = np.zeros((2, config.N - 1))
        sampler = make_rng(100 + i)
        for _ in range(chunks):
            Y = sample_observations(x, config, chunk_size, sampler)
            # components 1..N-1 pass y through, so their bias is the sample noise mean
            noise = Y[:, 1:] - x.values[np.newaxis, 1:]
            noise_sum += [noise.sum(axis=0), (noise * noise).sum(axis=0)]
            for j, est in enumerate(estimators):
                correction = est.estimate(Y) - Y
                np.testing.assert_array_equal(correction[:, 1:], 0.0)
                sums[j] += [correction[:, 0].sum(), (correction[:, 0] ** 2).sum()]
        noise_mean = noise_sum[0] / n
        noise_std = np.sqrt(noise_sum[1] / n - noise_mean ** 2)
        assert np.all(np.abs(noise_mean) <= 5.0 * noise_std / np.sqrt(n))
        for est, (total, total_sq) in zip(estimators, sums):
            mean = total / n
            se = np.sqrt(max(total_sq / n - mean * mean, 0.0) / n)
            assert abs(mean) <= 4.0 * se, (est.describe(), x.values)


def test_counterexample_coefficients():
    config = ProblemConfig(N=5, S=1, sigma2=1.0)
    alpha, beta = counterexample_coefficients(config)
    assert alpha > 0 and beta > 0
    A = counterexample_optimal_A(config)
    assert A < 0
    reduced = counterexample_variance_at_reference(config, A)
    assert abs(reduced - (5.0 - beta * beta / (4.0 * alpha))) < 1e-12
    assert reduced < 5.0
    assert counterexample_variance_at_reference(config, 0.0) == 5.0
    np.testing.assert_array_equal(counterexample_reference(ProblemConfig(N=5, S=2)).values, [0, 1, 1, 0, 0])


def test_no_uniformly_best_unbiased_estimator():
    """At x' the counterexample beats the identity, which is optimal at x = 0"""
    config = ProblemConfig(N=5, S=1, sigma2=1.0)
    x_ref = counterexample_reference(config)
    A = counterexample_optimal_A(config)
    est = CounterexampleEstimator(config, A)

    Y = sample_observations(x_ref, config, 1000000, make_rng(2718))
    err0 = est.estimate(Y)[:, 0] - x_ref.values[0]
    mse0 = float(np.mean(err0 ** 2))
    se0 = float(np.std(err0 ** 2) / np.sqrt(err0.size))
    assert config.sigma2 - mse0 > 5.0 * se0
    expected0 = counterexample_variance_at_reference(config, A) - (config.N - 1) * config.sigma2
    assert abs(mse0 - expected0) <= 4.0 * se0
    assert abs(err0.mean()) <= 4.0 * err0.std() / np.sqrt(err0.size)

    report = monte_carlo_risk(est, x_ref, config, 1000000, master_seed=31)
    assert report.variance < config.N * config.sigma2
    assert np.all(np.abs(report.bias) <= 4.0 * report.bias_std_error)


def test_lemma2_estimator_attains_bb_upper():
    """Monte Carlo MSE of the tanh-product estimator at its reference equals BB_c"""
    config = ProblemConfig(N=5, S=1, sigma2=1.0)
    for i, snr in enumerate((-5.0, 0.0, 5.0)):
        x_ref = param_at_snr([1.0, 0, 0, 0, 0], snr, config)
        est = Lemma2OptimalEstimator(config, x_ref)
        report = monte_carlo_risk(est, x_ref, config, 1000000, master_seed=500 + i)
        assert abs(report.mse - bb_upper(x_ref, config)) <= 4.0 * report.std_error


def test_lemma2_estimator_componentwise_unbiased():
    """Off-support corrections average to zero at parameters away from the reference"""
    config = ProblemConfig(N=5, S=2, sigma2=1.0)
    x_ref = validate_param([1.0, -0.5, 0.0, 0.0, 0.0], config)
    est = Lemma2OptimalEstimator(config, x_ref)
    for i, values in enumerate(([0.0, 0.0, 2.0, 0.0, -1.0], [1.5, 0.0, 0.0, 3.0, 0.0], [0.0, 0.0, 0.0, 0.0, 0.0])):
        x = validate_param(values, config)
        Y = sample_observations(x, config, 200000, make_rng(900 + i))
        correction = est.estimate(Y) - Y
        np.testing.assert_array_equal(correction[:, :2], 0.0)
        se = correction.std(axis=0) / np.sqrt(Y.shape[0])
        assert np.all(np.abs(correction.mean(axis=0)) <= 4.0 * se + 1e-15)


def test_lemma2_estimate_shape():
    config = ProblemConfig(N=4, S=2, sigma2=2.0)
    x_ref = validate_param([0.0, 1.0, 0.0, -1.5], config)
    y = np.array([0.3, 1.2, -0.4, -2.0])
    out = lemma2_optimal_estimate(y, x_ref, config)
    shrink = np.tanh(1.2 * 1.0 / 2.0) * np.tanh(-2.0 * -1.5 / 2.0)
    np.testing.assert_allclose(out, [0.3 * (1 - shrink), 1.2, -0.4 * (1 - shrink), -2.0])


def test_build_estimator():
    config = ProblemConfig(N=5, S=1, sigma2=1.0)
    x = validate_param([0.0, 1.0, 0.0, 0.0, 0.0], config)
    assert isinstance(build_estimator("ml", config), MLEstimator)
    assert isinstance(build_estimator(None, config), MLEstimator)
    assert build_estimator({"kind": "ht", "threshold": 2.0}, config).threshold == 2.0
    assert build_estimator("oracle", config, x=x).support == (1,)
    assert build_estimator({"kind": "family", "a": 1, "c": 0.5, "d": 0.5}, config).a == 1.0
    assert build_estimator("counterexample", config).A == counterexample_optimal_A(config)
    assert build_estimator({"kind": "counterexample", "A": -0.3}, config).A == -0.3
    assert build_estimator("lemma2", config, x=x).x_ref is x
    for kind in ESTIMATOR_KINDS:
        if kind != "family":
            assert build_estimator(kind, config, x=x).kind == kind

    with pytest.raises(ConfigError):
        build_estimator("bayes", config)
    with pytest.raises(ConfigError):
        build_estimator({"kind": "ml", "threshold": 1.0}, config)
    with pytest.raises(ConfigError):
        build_estimator({"kind": "family", "a": 1.0}, config)
    with pytest.raises(ConfigError):
        build_estimator("oracle", config)
    with pytest.raises(ConfigError):
        build_estimator("lemma2", config)


if __name__ == "__main__":
    print("\n====== TEST: ESTIMATORS ======")
    test_classic_estimators()
    test_ht_commutes_with_permutation_and_sign()
    test_band_sign()
    test_unbiased_estimators_need_s_below_n()
    test_family_only_touches_component_zero()
    test_unbiasedness_suite()
    test_counterexample_coefficients()
    test_no_uniformly_best_unbiased_estimator()
    test_lemma2_estimator_attains_bb_upper()
    test_lemma2_estimator_componentwise_unbiased()
    test_lemma2_estimate_shape()
    test_build_estimator()
    print("All estimator tests passed")
