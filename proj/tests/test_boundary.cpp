#include <doctest.h>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "fraclap/boundary.hpp"
#include "fraclap/error.hpp"
#include "fraclap/solver.hpp"

using namespace fraclap;
namespace bq = boost::math::quadrature;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

FieldFn runge_g() {
  return FieldFn::of_1d([](double x) { return 1.0 / (1.0 + x * x); });
}

FieldFn gauss_g() {
  return FieldFn([](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); },
                 FieldFn::Support::Everywhere);
}

double tail_oracle(const std::function<double(double)>& g, double x, double L, double alpha, double lambda) {
  return bq::gauss_kronrod<double, 61>::integrate(
      [&](double xi) { return (g(x - xi) + g(x + xi)) * std::exp(-lambda * xi) * std::pow(xi, -1.0 - alpha); },
      L, INFINITY, 20, 1e-15);
}

// Sum over sign patterns of the integral of g(x + s.xi) |xi|^(-2-alpha) over
// the first quadrant outside [0, L]^2, in polar coordinates.
double exterior_oracle_2d(const FieldFn& g, const Point& x, double L, double alpha) {
  const double q = 0.5 * boost::math::constants::pi<double>();
  auto radial = [&](double t) {
    const double c = std::cos(t), s = std::sin(t);
    const double r0 = L / std::max(c, s);
    return bq::gauss_kronrod<double, 61>::integrate(
        [&](double r) {
          double v = 0.0;
          for (int s1 : {-1, 1}) {
            for (int s2 : {-1, 1}) v += g(Point{x[0] + s1 * r * c, x[1] + s2 * r * s});
          }
          return v * std::pow(r, -1.0 - alpha);
        },
        r0, INFINITY, 20, 1e-13);
  };
  return bq::gauss_kronrod<double, 61>::integrate(radial, 0.0, 0.5 * q, 15, 1e-12) +
         bq::gauss_kronrod<double, 61>::integrate(radial, 0.5 * q, q, 15, 1e-12);
}

}  // namespace

TEST_CASE("1D tail integral") {
  CHECK(tail_integral_1d(FieldFn::zero(), 0.3, 1.0, 1.0, 0.0, 1e-12) == 0.0);
  for (double alpha : {0.3, 1.0, 1.9}) {
    for (double L : {0.5, 2.0}) {
      CHECK(rel(tail_integral_1d(FieldFn::constant(1.0), 0.1, L, alpha, 0.0, 1e-14),
                2.0 / (alpha * std::pow(L, alpha))) < 1e-12);
    }
  }
  const double pi = boost::math::constants::pi<double>();
  CHECK(rel(tail_integral_1d(runge_g(), 0.0, 1.0, 1.0, 0.0, 1e-14), 2.0 * (1.0 - pi / 4.0)) < 1e-12);
  auto g = [](double x) { return 1.0 / (1.0 + x * x); };
  for (double x : {-0.7, 0.0, 0.4}) {
    for (double alpha : {0.5, 1.7}) {
      CHECK(rel(tail_integral_1d(runge_g(), x, 2.0, alpha, 0.0, 1e-14), tail_oracle(g, x, 2.0, alpha, 0.0)) < 1e-10);
      CHECK(rel(tail_integral_1d(runge_g(), x, 2.0, alpha, 0.8, 1e-14), tail_oracle(g, x, 2.0, alpha, 0.8)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(tail_integral_1d(FieldFn::constant(1.0), 0.0, 0.0, 1.0, 0.0, 1e-12), Error);
}

TEST_CASE("1D boundary vector") {
  const int n = 32;
  const double alpha = 1.0;
  const auto spec = KernelSpec::power(1, alpha);
  const auto grid = Grid::interval(-1, 1, n);
  const auto s = assemble_coeffs_1d(spec, grid, 1);

  const auto z = boundary_vector_1d(FieldFn::zero(), s, grid, spec);
  for (double v : z.values) CHECK(v == 0.0);

  // Lattice sums written out from the definition, tail by Gauss-Kronrod.
  const auto b = boundary_vector_1d(runge_g(), s, grid, spec);
  auto g = [](double x) { return 1.0 / (1.0 + x * x); };
  for (int i : {1, 5, 16, 27, 31}) {
    double want = 0.0;
    for (int j = n; j <= n + i; ++j) want += s.a[j - i] * g(grid.node(0, j));
    for (int j = i - n; j <= 0; ++j) want += s.a[i - j] * g(grid.node(0, j));
    want += tail_oracle(g, grid.node(0, i), grid.extent(), alpha, 0.0);
    want *= -spec.c;
    CHECK(rel(b.values[i - 1], want) < 1e-8);
  }

  const auto g2 = FieldFn::of_1d([](double x) { return std::exp(-x * x); });
  const auto both = FieldFn::of_1d([](double x) { return 1.0 / (1.0 + x * x) + std::exp(-x * x); });
  const auto b2 = boundary_vector_1d(g2, s, grid, spec);
  const auto b12 = boundary_vector_1d(both, s, grid, spec);
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    CHECK(std::abs(b12.values[i] - b.values[i] - b2.values[i]) <= 1e-12 * std::abs(b12.values[i]));
  }

  CHECK_THROWS_AS(boundary_vector_1d(runge_g(), s, Grid::interval(-1, 1, 16), spec), Error);
}

TEST_CASE("2D exterior integral against a polar oracle") {
  const double alpha = 0.7;
  const auto spec = KernelSpec::power(2, alpha);
  const auto grid = Grid::rectangle({-1, -1}, {1, 1}, 16);
  const Point x = grid.interior_point(0);  // node (1, 1)
  CHECK(x[0] == doctest::Approx(-1 + grid.h()));
  const double got = exterior_integral_2d(gauss_g(), x, grid.extent(), spec, 1e-12);
  CHECK(rel(got, exterior_oracle_2d(gauss_g(), x, grid.extent(), alpha)) < 1e-6);
  CHECK(exterior_integral_2d(FieldFn::zero(), x, 2.0, spec, 1e-10) == 0.0);
  CHECK(rel(exterior_integral_2d(FieldFn::constant(1.0), x, 2.0, spec, 1e-12),
            4.0 * farfield_measure_2d(alpha, 2.0)) < 1e-10);
}

TEST_CASE("2D boundary vector") {
  const auto spec = KernelSpec::power(2, 1.2);
  const auto grid = Grid::rectangle({-1, -1}, {1, 1}, 8);
  const auto s = assemble_coeffs_2d(spec, grid, 1);
  const auto z = boundary_vector_2d(FieldFn::zero(), s, grid, spec);
  REQUIRE(z.values.size() == grid.interior_size());
  for (double v : z.values) CHECK(v == 0.0);

  const auto b1 = boundary_vector_2d(gauss_g(), s, grid, spec);
  const FieldFn lin([](const Point& x) { return 0.3 / (1.0 + x[0] * x[0] + x[1] * x[1]); },
                    FieldFn::Support::Everywhere);
  const FieldFn sum([](const Point& x) {
    return std::exp(-(x[0] * x[0] + x[1] * x[1])) + 0.3 / (1.0 + x[0] * x[0] + x[1] * x[1]);
  }, FieldFn::Support::Everywhere);
  const auto b2 = boundary_vector_2d(lin, s, grid, spec);
  const auto b12 = boundary_vector_2d(sum, s, grid, spec);
  for (std::size_t i = 0; i < b1.values.size(); ++i) {
    CHECK(std::abs(b12.values[i] - b1.values[i] - b2.values[i]) <= 1e-9 * std::abs(b12.values[i]));
  }
  // Symmetric data on a symmetric grid gives a symmetric vector.
  const int m = grid.interior(0);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      CHECK(b1.values[j * m + i] == doctest::Approx(b1.values[i * m + j]).epsilon(1e-10));
      CHECK(b1.values[j * m + i] == doctest::Approx(b1.values[j * m + (m - 1 - i)]).epsilon(1e-10));
    }
  }
}
