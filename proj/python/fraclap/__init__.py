"""Finite-difference-quadrature scheme for the integral fractional Laplacian."""

from ._fraclap import (
    FraclapError,
    Grid,
    KernelSpec,
    apply_operator,
    clear_weight_cache,
    coeffs_1d,
    coeffs_2d,
    gamma,
    gauss_2f1,
    kummer_1f1,
    normalization_constant,
    operator_error_study,
    parse_h_list,
    poisson_convergence_study,
    reproduce_table,
    solve_poisson,
    toeplitz_matvec,
    weights_1d_analytic,
    weights_1d_quadrature,
    weights_2d_quadrature,
)

__all__ = [
    "FraclapError",
    "Grid",
    "KernelSpec",
    "apply_operator",
    "clear_weight_cache",
    "coeffs_1d",
    "coeffs_2d",
    "gamma",
    "gauss_2f1",
    "kummer_1f1",
    "normalization_constant",
    "operator_error_study",
    "parse_h_list",
    "poisson_convergence_study",
    "reproduce_table",
    "solve_poisson",
    "toeplitz_matvec",
    "weights_1d_analytic",
    "weights_1d_quadrature",
    "weights_2d_quadrature",
]
