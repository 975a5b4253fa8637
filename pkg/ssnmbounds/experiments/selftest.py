"""Quick property checks run by ``ssnmbounds selftest``.

Each check raises AssertionError on failure. The full suites live in tests/.
"""
import logging
import time

import numpy as np

from ssnmbounds.bounds.closed_form import bb_upper, bb_upper_envelope, crb, g_factor, hcrb_closed
from ssnmbounds.bounds.numeric_upper import assemble_component_qp, build_grid, solve_component_qp, UnbiasednessGrid
from ssnmbounds.bounds.test_points import (StructuredMatrixParams, build_crb_testpoints, hcrb_eval, hcrb_finite_t,
                                          hcrb_testpoint, structured_inverse)
from ssnmbounds.config.run_config import QuadratureSpec
from ssnmbounds.model.problem import ProblemConfig, hard_sparsify, validate_param
from ssnmbounds.risk.exact import ht_mse_exact, prob_not_in_top_s
from ssnmbounds.risk.gaussian import q_tail

logger = logging.getLogger('ssnmbounds')


def check_hard_sparsify():
    np.testing.assert_array_equal(hard_sparsify([3.0, -1.0, 0.5], 1), [3.0, 0.0, 0.0])
    np.testing.assert_array_equal(hard_sparsify([1.0, -1.0], 1), [1.0, 0.0])
    y = np.array([0.2, -5.0, 4.0, 0.1])
    once = hard_sparsify(y, 2)
    np.testing.assert_array_equal(hard_sparsify(once, 2), once)


def check_closed_forms():
    config = ProblemConfig(N=5, S=1, sigma2=1.0)
    x = validate_param([2, 0, 0, 0, 0], config)
    assert crb(x, config) == 1.0
    assert abs(hcrb_closed(x, config) - (1.0 + 3.0 * np.exp(-4.0))) < 1e-12
    assert abs(bb_upper_envelope(x, config) - (1.0 + 12.0 * np.exp(-2.0))) < 1e-12
    assert hcrb_closed(x, config) <= bb_upper(x, config) <= bb_upper_envelope(x, config)


def check_g_factor():
    quad = QuadratureSpec()
    for ratio in np.arange(0.0, 8.5, 0.5):
        g = g_factor(ratio, 1.0, quad)
        assert 0.0 <= g <= 1.0
        assert g >= 1.0 - 1.5 * np.exp(-ratio * ratio / 2.0) - 1e-9
        assert g_factor(-ratio, 1.0, quad) == g


def check_structured_inverse():
    got = structured_inverse(StructuredMatrixParams(a=3.0, b=1.0, c=1.0, d=2.0, r=2))
    np.testing.assert_allclose(got, [3 / 7, -1 / 7, -2 / 7, 5 / 7], atol=1e-14)


def check_hcrb_consistency():
    config = ProblemConfig(N=5, S=1, sigma2=1.0)
    x = validate_param([2, 0, 0, 0, 0], config)
    analytic = hcrb_finite_t(x, 0.5, config)
    numeric = hcrb_testpoint(x, config, 0.5)
    assert abs(analytic - numeric) <= 1e-8 * abs(numeric)
    crb_limit = hcrb_eval(x, build_crb_testpoints(x, 1e-3, config), config.sigma2)
    assert abs(crb_limit - crb(x, config)) <= 1e-4 * crb(x, config)


def check_qp():
    config = ProblemConfig(N=3, S=1, sigma2=1.0)
    x = validate_param([1.0, 0.0, 0.0], config)
    pc = build_grid(x, 1, 6, config)
    diag_H, lin_b, A = assemble_component_qp(pc, UnbiasednessGrid.default(x, config), x, config.sigma2)
    c, obj = solve_component_qp(diag_H, lin_b, A)
    assert 0.0 <= obj <= 1.0
    assert np.max(np.abs(A @ c)) <= 1e-8 * max(1.0, np.max(np.abs(c)))


def check_partition_sum():
    from scipy.special import comb
    config = ProblemConfig(N=6, S=2, sigma2=1.0)
    x = validate_param(np.zeros(6), config)
    for y in (0.3, 1.1, 2.5):
        p = 2.0 * q_tail(y)
        expected = sum(comb(5, j) * p ** j * (1 - p) ** (5 - j) for j in range(2, 6))
        assert abs(prob_not_in_top_s(x, 0, y, config, method="enumerate") - expected) < 1e-10


def check_ht_limits():
    config = ProblemConfig(N=4, S=2, sigma2=1.0)
    x = validate_param([1.5, -0.5, 0, 0], config)
    assert abs(ht_mse_exact(x, 1e-9, config) - 4.0) < 1e-6
    assert abs(ht_mse_exact(x, 1e3, config) - 2.5) < 1e-9


CHECKS = [
    ("hard_sparsify", check_hard_sparsify),
    ("closed_forms", check_closed_forms),
    ("g_factor", check_g_factor),
    ("structured_inverse", check_structured_inverse),
    ("hcrb_consistency", check_hcrb_consistency),
    ("qp", check_qp),
    ("partition_sum", check_partition_sum),
    ("ht_limits", check_ht_limits),
]


def run_selftest():
    """
    Run every check.

    Returns:
        list: (name, passed, message) per check.
    """
    results = []
    for name, check in CHECKS:
        start = time.time()
        try:
            check()
            results.append((name, True, f"{time.time() - start:.2f}s"))
            logger.info(f"selftest {name}: PASS")
        except AssertionError as e:
            results.append((name, False, str(e) or "assertion failed"))
            logger.error(f"selftest {name}: FAIL {e}")
    return results
