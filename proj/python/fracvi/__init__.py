"""Fractional variational integrators for mechanically damped systems."""

from ._fracvi import (
    DomainError,
    LengthMismatch,
    NewtonDiverged,
    SingularMatrix,
    UsageError,
    coefficient_table,
    converge,
    delta_minus,
    delta_minus_squared,
    delta_plus,
    delta_plus_squared,
    exact_oscillator,
    fit_slope,
    grunwald_coeffs,
    matrix_oracle,
    operator_matrix,
    run,
)

__all__ = [
    "DomainError",
    "LengthMismatch",
    "NewtonDiverged",
    "SingularMatrix",
    "UsageError",
    "coefficient_table",
    "converge",
    "delta_minus",
    "delta_minus_squared",
    "delta_plus",
    "delta_plus_squared",
    "exact_oscillator",
    "fit_slope",
    "grunwald_coeffs",
    "matrix_oracle",
    "operator_matrix",
    "run",
]
