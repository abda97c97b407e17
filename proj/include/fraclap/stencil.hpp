#pragma once

#include <vector>

#include "fraclap/kernel.hpp"
#include "fraclap/weights.hpp"

namespace fraclap {

/// 1D scheme coefficients a_0..a_N. Neighbours at distance k contribute
/// a_k u_{i+-k}; a_0 multiplies u_i.
struct StencilCoefficients1D {
  int n = 0;
  double h = 0.0;
  std::vector<double> a;
  int zeta = 0;
  /// int_L^inf K(xi) xi^(-1-alpha) d xi; 1/(alpha L^alpha) for the power kernel.
  double farfield_measure = 0.0;
};

/// 2D coefficients a_kl, k, l = 0..N, row-major. Lattice offset (dk, dl)
/// contributes a_{|dk||dl|} u_{i+dk, j+dl}.
struct StencilCoefficients2D {
  int n = 0;
  double h = 0.0;
  std::vector<double> a;
  int zeta = 0;
  /// Integral of K(|xi|) |xi|^(-2-alpha) over the positive quadrant minus [0, L]^2.
  double farfield_measure = 0.0;

  double at(int k, int l) const {
    return a[static_cast<std::size_t>(k) * (n + 1) + static_cast<std::size_t>(l)];
  }
};

/// How omega_00 is redistributed at gamma = 2.
///
/// AxisAverage: Phi(0) ~ (Phi(xi_10) + Phi(xi_01)) / 2, so
/// a_10 = (2 omega_10 + omega_00) / h^2 and a_11 carries omega_11 only.
/// This is the variant behind the published 2D error tables.
/// ThreePoint: Phi(0) ~ Phi(xi_10) + Phi(xi_01) - Phi(xi_11), giving
/// a_10 = (2 omega_10 + 2 omega_00) / h^2, a_11 = (omega_11 - omega_00) / (2 h^2).
/// Literal: a_10 with omega_00 once and a_11 with -omega_00. Not consistent
/// for quadratic u; kept for comparison.
enum class OriginFold { AxisAverage, ThreePoint, Literal };

StencilCoefficients1D coeffs_1d(const WeightTable1D& w, const KernelSpec& spec, const Grid& grid,
                                double tol = 1e-14);

StencilCoefficients2D coeffs_2d(const WeightTable2D& w, const KernelSpec& spec, const Grid& grid,
                                double tol = 1e-12, OriginFold fold = OriginFold::AxisAverage);

/// int_L^inf K(xi) xi^(-1-alpha) d xi.
double farfield_measure_1d(const KernelSpec& spec, double L, double tol = 1e-14);

/// Power-kernel far-field measure in 2D.
double farfield_measure_2d(double alpha, double L, double tol = 1e-12);

/// Far-field measure for any radial kernel in 2D.
double farfield_measure_2d(const KernelSpec& spec, double L, double tol = 1e-12);

}  // namespace fraclap
