"""
Bounds package: closed-form bounds, test-point HCRBs, and the QP upper bound.
"""

from ssnmbounds.bounds.closed_form import (
    crb,
    hcrb_closed,
    g_factor,
    bb_upper_component,
    bb_upper,
    bb_upper_component_envelope,
    bb_upper_envelope,
)
from ssnmbounds.bounds.test_points import (
    TestPointSet,
    StructuredMatrixParams,
    build_crb_testpoints,
    build_hcrb_testpoints,
    build_extended_testpoints,
    gram_matrix_J,
    hcrb_eval,
    structured_inverse,
    hcrb_finite_t,
    hcrb_testpoint,
    hcrb_extended,
)
from ssnmbounds.bounds.numeric_upper import (
    PiecewiseCorrection,
    UnbiasednessGrid,
    build_grid,
    cell_gaussian_moments,
    assemble_component_qp,
    solve_component_qp,
    solve_correction,
    bb_upper_numeric,
)

__all__ = [
    'crb',
    'hcrb_closed',
    'g_factor',
    'bb_upper_component',
    'bb_upper',
    'bb_upper_component_envelope',
    'bb_upper_envelope',
    'TestPointSet',
    'StructuredMatrixParams',
    'build_crb_testpoints',
    'build_hcrb_testpoints',
    'build_extended_testpoints',
    'gram_matrix_J',
    'hcrb_eval',
    'structured_inverse',
    'hcrb_finite_t',
    'hcrb_testpoint',
    'hcrb_extended',
    'PiecewiseCorrection',
    'UnbiasednessGrid',
    'build_grid',
    'cell_gaussian_moments',
    'assemble_component_qp',
    'solve_component_qp',
    'solve_correction',
    'bb_upper_numeric',
]
