"""
ssnmbounds - Barankin-bound analysis for sparse estimation in Gaussian noise.

This package computes lower bounds (CRB, Hammersley-Chapman-Robbins) and
upper bounds (closed-form and quadratic-program) on the minimum MSE of
unbiased estimators of an S-sparse vector observed in white Gaussian noise,
implements the estimators those bounds are compared against, and
regenerates the SNR sweeps behind the accompanying figures.
"""

__version__ = '0.1.0'
