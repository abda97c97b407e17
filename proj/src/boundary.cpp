#include "fraclap/boundary.hpp"

#include <cmath>

#include "fraclap/error.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/quadrature.hpp"

namespace fraclap {

double tail_integral_1d(const FieldFn& g, double x, double L, double alpha, double lambda,
                        double tol) {
  if (g.is_zero()) return 0.0;
  if (!(L > 0.0) || !(alpha > 0.0 && alpha < 2.0)) {
    throw Error(ErrorCode::Domain, "tail integral needs L > 0 and alpha in (0, 2)");
  }
  const double scale = std::pow(L, -alpha) / alpha;
  const double inv = -1.0 / alpha;
  const auto f = [&](double t) {
    if (t == 0.0) return 0.0;
    const double xi = L * std::pow(t, inv);
    const double k = lambda == 0.0 ? 1.0 : std::exp(-lambda * xi);
    if (k == 0.0) return 0.0;
    return (g(x - xi) + g(x + xi)) * k;
  };
  try {
    return scale * quad::adaptive(f, 0.0, 1.0, tol / scale);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ToleranceNotMet) throw;
    throw Error(ErrorCode::ToleranceNotMet,
                "exterior tail integral did not converge; g may decay too slowly");
  }
}

double exterior_integral_2d(const FieldFn& g, const Point& x, double L, const KernelSpec& spec,
                            double tol) {
  if (g.is_zero()) return 0.0;
  const double a = spec.alpha;
  const double scale = std::pow(L, -a) / a;
  const double inv = -1.0 / a;
  const double ex = -1.0 - 0.5 * a;
  // Wedge xi_2 = v xi_1 with xi_1 = L t^(-1/alpha); the swapped wedge shares the weight.
  const auto f = [&](double t, double v) {
    if (t == 0.0) return 0.0;
    const double x1 = L * std::pow(t, inv);
    const double q = 1.0 + v * v;
    const double k = spec.radial(x1 * std::sqrt(q));
    if (k == 0.0) return 0.0;
    const double y1 = v * x1;
    double s = 0.0;
    for (int s1 = -1; s1 <= 1; s1 += 2) {
      for (int s2 = -1; s2 <= 1; s2 += 2) {
        s += g(Point{x[0] + s1 * x1, x[1] + s2 * y1});
        s += g(Point{x[0] + s1 * y1, x[1] + s2 * x1});
      }
    }
    return std::pow(q, ex) * k * s;
  };
  return scale * quad::adaptive_2d(f, 0.0, 1.0, 0.0, 1.0, tol / scale);
}

BoundaryVector boundary_vector_1d(const FieldFn& g, const StencilCoefficients1D& s,
                                  const Grid& grid, const KernelSpec& spec, double tol) {
  if (grid.dim() != 1 || s.n != grid.cells(0)) {
    throw Error(ErrorCode::Mismatch, "1D coefficients do not match the grid");
  }
  const int n = grid.cells(0);
  BoundaryVector b;
  b.quad_tol = tol;
  b.values.assign(static_cast<std::size_t>(n - 1), 0.0);
  if (g.is_zero()) return b;

  const double L = grid.extent();
  const double lambda = spec.untempered() ? 0.0 : spec.lambda;
  // g at lattice points j = -n..2n, offset by n.
  std::vector<double> gl(static_cast<std::size_t>(3 * n + 1));
  for (int j = -n; j <= 2 * n; ++j) {
    const bool exterior = j <= 0 || j >= n;
    gl[static_cast<std::size_t>(j + n)] = exterior ? g(grid.node(0, j)) : 0.0;
  }
  parallel_for(static_cast<std::size_t>(n - 1), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const int i = static_cast<int>(idx) + 1;
      double sum = 0.0;
      for (int k = n; k >= 1; --k) {
        const double ak = s.a[static_cast<std::size_t>(k)];
        if (i + k >= n) sum += ak * gl[static_cast<std::size_t>(i + k + n)];
        if (i - k <= 0) sum += ak * gl[static_cast<std::size_t>(i - k + n)];
      }
      sum += tail_integral_1d(g, grid.node(0, i), L, spec.alpha, lambda, tol);
      b.values[idx] = -spec.c * sum;
    }
  });
  return b;
}

BoundaryVector boundary_vector_2d(const FieldFn& g, const StencilCoefficients2D& s,
                                  const Grid& grid, const KernelSpec& spec, double tol) {
  if (grid.dim() != 2 || s.n != grid.n()) {
    throw Error(ErrorCode::Mismatch, "2D coefficients do not match the grid");
  }
  const int n = s.n;
  const int N1 = grid.cells(0), N2 = grid.cells(1);
  const int n1 = N1 - 1;
  BoundaryVector b;
  b.quad_tol = tol;
  b.values.assign(grid.interior_size(), 0.0);
  if (g.is_zero()) return b;

  // g on the lattice [-n, N1 + n] x [-n, N2 + n], zero at interior points.
  const int w1 = N1 + 2 * n + 1, w2 = N2 + 2 * n + 1;
  std::vector<double> G(static_cast<std::size_t>(w1) * w2, 0.0);
  for (int j = -n; j <= N2 + n; ++j) {
    for (int i = -n; i <= N1 + n; ++i) {
      const bool exterior = i <= 0 || i >= N1 || j <= 0 || j >= N2;
      if (exterior) {
        G[static_cast<std::size_t>(j + n) * w1 + static_cast<std::size_t>(i + n)] =
            g(Point{grid.node(0, i), grid.node(1, j)});
      }
    }
  }
  const double L = grid.extent();
  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  parallel_for(grid.interior_size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const int i = static_cast<int>(idx % static_cast<std::size_t>(n1)) + 1;
      const int j = static_cast<int>(idx / static_cast<std::size_t>(n1)) + 1;
      double sum = 0.0;
      for (int dl = -n; dl <= n; ++dl) {
        const double* grow = &G[static_cast<std::size_t>(j + dl + n) * w1];
        // a is symmetric, so row |dl| holds a_{|dk| |dl|} contiguously.
        const double* arow = &s.a[static_cast<std::size_t>(std::abs(dl)) * stride];
        for (int dk = -n; dk <= n; ++dk) {
          sum += arow[static_cast<std::size_t>(std::abs(dk))] * grow[static_cast<std::size_t>(i + dk + n)];
        }
      }
      sum += exterior_integral_2d(g, grid.interior_point(idx), L, spec, tol);
      b.values[idx] = -spec.c * sum;
    }
  });
  return b;
}

}  // namespace fraclap
