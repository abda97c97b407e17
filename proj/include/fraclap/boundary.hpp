#pragma once

#include <vector>

#include "fraclap/kernel.hpp"
#include "fraclap/stencil.hpp"

// Contributions of the exterior Dirichlet data g to each interior equation.

namespace fraclap {

/// Interior-sized vector, already multiplied by -c, so that
/// operator(u) = A u + values.
struct BoundaryVector {
  std::vector<double> values;
  double quad_tol = 0.0;
};

/// int_L^inf [g(x - xi) + g(x + xi)] e^(-lambda xi) xi^(-1-alpha) d xi.
/// Uses xi = L t^(-1/alpha), which makes the weight constant in t.
double tail_integral_1d(const FieldFn& g, double x, double L, double alpha, double lambda,
                        double tol);

/// Sum over the four sign patterns s of the integral of
/// g(x + s.xi) K(|xi|) |xi|^(-2-alpha) over the positive quadrant minus [0, L]^2.
double exterior_integral_2d(const FieldFn& g, const Point& x, double L, const KernelSpec& spec,
                            double tol);

BoundaryVector boundary_vector_1d(const FieldFn& g, const StencilCoefficients1D& s,
                                  const Grid& grid, const KernelSpec& spec, double tol = 1e-13);

BoundaryVector boundary_vector_2d(const FieldFn& g, const StencilCoefficients2D& s,
                                  const Grid& grid, const KernelSpec& spec, double tol = 1e-10);

}  // namespace fraclap
