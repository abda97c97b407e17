#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fraclap/boundary.hpp"
#include "fraclap/fastop.hpp"
#include "fraclap/kernel.hpp"
#include "fraclap/stencil.hpp"

namespace fraclap {

struct PoissonProblem {
  KernelSpec spec;
  Grid grid;
  FieldFn f;  // right-hand side on the interior
  FieldFn g;  // Dirichlet data on the complement
  int p = 1;
  OriginFold fold = OriginFold::AxisAverage;  // 2D only
};

struct SolveReport {
  std::vector<double> u_h;
  int iterations = 0;
  double final_residual = 0.0;  // ||A u - r|| / ||r||, recomputed from scratch
  bool indefiniteness_flag = false;
  double wall_time = 0.0;
};

/// Weight tolerance used when a table has to come from quadrature.
inline constexpr double kWeightTol = 1e-13;

/// Cached weights plus coefficient assembly for a grid.
StencilCoefficients1D assemble_coeffs_1d(const KernelSpec& spec, const Grid& grid, int p);
StencilCoefficients2D assemble_coeffs_2d(const KernelSpec& spec, const Grid& grid, int p,
                                         OriginFold fold = OriginFold::AxisAverage);

/// Discrete operator at the interior nodes, exterior data included.
///
/// In 1D the stencil is summed directly in difference form,
/// sum_k a_k (U_{i+k} + U_{i-k} - 2 U_i) - 2 F U_i + tail. This is the same
/// linear map as A u + b, but without the O(eps ||a||_1) rounding floor of the
/// FFT product, which would otherwise show in 1e-12 level error studies.
/// In 2D the BTTB operator is applied by FFT and the boundary vector added.
std::vector<double> apply_operator(const KernelSpec& spec, const Grid& grid, int p,
                                   const FieldFn& u, const FieldFn& g,
                                   OriginFold fold = OriginFold::AxisAverage);

using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

struct KrylovResult {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;  // relative, as estimated by the recursion
  bool nonpositive_curvature = false;
};

/// Conjugate gradients from x = 0. Stops early, without throwing, at the first
/// direction with p^T A p <= 0 and reports it.
KrylovResult conjugate_gradient(const LinearMap& A, std::span<const double> rhs, double tol,
                                int max_iter);
/// Unpreconditioned MINRES (Paige-Saunders) from x = 0.
KrylovResult minres(const LinearMap& A, std::span<const double> rhs, double tol, int max_iter);

/// CG on A u = f - b with FFT matvecs. Nonpositive curvature sets the
/// indefiniteness flag and restarts with MINRES. Throws
/// ErrorCode::IterationCap if the tolerance is not reached.
SolveReport solve_poisson(const PoissonProblem& problem, double cg_tol = 1e-12,
                          int max_iter = 20000);

/// Dense LU solve of the same system; validation only (size-capped).
std::vector<double> solve_poisson_dense(const PoissonProblem& problem);

struct ErrorNorms {
  double inf_norm = 0.0;
  std::vector<double> pointwise;  // u_h - u at interior nodes
};

ErrorNorms grid_error_norms(std::span<const double> u_h, const FieldFn& u_exact,
                            const Grid& grid);

}  // namespace fraclap
