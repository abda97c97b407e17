import math

import numpy as np
import pytest

import fraclap


def test_runge_operator_error_matches_printed_value():
    rows = fraclap.operator_error_study("runge", 0.5, 2, h="1/16,1/32")
    assert rows[0]["rate"] is None
    assert abs(rows[0]["error_inf"] - 1.7384e-7) <= 0.5e-11
    assert rows[1]["rate"] == pytest.approx(3.8391, abs=0.02)


def test_constant_is_annihilated():
    spec = fraclap.KernelSpec.power(1, 1.2)
    grid = fraclap.Grid.interval(-1.0, 1.0, 32)
    v = fraclap.apply_operator(spec, grid, 1, lambda x: 1.0)
    assert v.shape == (31,)
    assert np.max(np.abs(v)) < 1e-10


def test_weights_analytic_and_quadrature_agree():
    a = fraclap.weights_1d_analytic(2, 0.7, 1.6, 16, 0.125)
    q = fraclap.weights_1d_quadrature(fraclap.KernelSpec.power(1, 0.7, 1.6), 2, 16, 0.125)
    assert a.shape == (17,)
    np.testing.assert_allclose(a, q, rtol=1e-10)


def test_poisson_solve_benchmark():
    alpha = 1.0
    spec = fraclap.KernelSpec.power(1, alpha)
    grid = fraclap.Grid.interval(-1.0, 1.0, 32)
    out = fraclap.solve_poisson(spec, grid, 0, lambda x: 1.0, lambda x: 0.0)
    x = grid.interior_points()[:, 0]
    exact = np.sqrt(1 - x**2) / math.gamma(1 + alpha)
    assert out["final_residual"] <= 1e-12
    assert abs(np.max(np.abs(out["u_h"] - exact)) - 4.9166e-2) <= 0.5e-6


def test_toeplitz_fft_matches_dense():
    rng = np.random.default_rng(0)
    col, x = rng.standard_normal(50), rng.standard_normal(50)
    np.testing.assert_allclose(
        fraclap.toeplitz_matvec(col, x), fraclap.toeplitz_matvec(col, x, dense=True), atol=1e-12
    )


def test_errors_surface_as_exceptions():
    with pytest.raises(fraclap.FraclapError):
        fraclap.KernelSpec.power(1, 1.5, 1.2).validate()
    with pytest.raises(fraclap.FraclapError):
        fraclap.parse_h_list("abc")
