#include <doctest.h>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <random>

#include "fraclap/error.hpp"
#include "fraclap/specfun.hpp"

using namespace fraclap;
using boost::multiprecision::cpp_bin_float_50;

namespace {

// Direct 2F1 series in 50-digit arithmetic, summed until terms drop below 1e-40.
double series_2f1(double a, double b, double c, double z) {
  cpp_bin_float_50 term = 1, sum = 1, A = a, B = b, C = c, Z = z;
  for (int n = 0; n < 2000000; ++n) {
    term *= (A + n) * (B + n) / ((C + n) * (n + 1)) * Z;
    sum += term;
    if (n > 10 && abs(term) < cpp_bin_float_50("1e-40") * abs(sum)) break;
  }
  return static_cast<double>(sum);
}

double series_1f1(double a, double b, double z) {
  cpp_bin_float_50 term = 1, sum = 1, A = a, B = b, Z = z;
  for (int n = 0; n < 100000; ++n) {
    term *= (A + n) / ((B + n) * (n + 1)) * Z;
    sum += term;
    if (n > 10 && abs(term) < cpp_bin_float_50("1e-40") * abs(sum)) break;
  }
  return static_cast<double>(sum);
}

double rel(double got, double want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

}  // namespace

TEST_CASE("gamma reference values") {
  CHECK(specfun::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel(specfun::gamma(0.5), 1.7724538509055160) < 1e-15);
  CHECK(rel(specfun::gamma(3.7), boost::math::tgamma(3.7)) < 1e-13);
}

TEST_CASE("gamma matches Boost on (0, 50]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(1e-3, 50.0);
  for (int i = 0; i < 300; ++i) {
    const double x = U(rng);
    CHECK(rel(specfun::gamma(x), boost::math::tgamma(x)) < 1e-13);
  }
  CHECK(rel(specfun::gamma(-2.5), boost::math::tgamma(-2.5)) < 1e-13);
}

TEST_CASE("gamma poles throw") {
  for (double x : {0.0, -1.0, -2.0, -7.0}) {
    try {
      specfun::gamma(x);
      FAIL("no throw at " << x);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Pole);
    }
  }
  CHECK(specfun::rgamma(-3.0) == 0.0);
}

TEST_CASE("gamma reflection formula") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(1e-6, 1.0 - 1e-6);
  const double pi = boost::math::constants::pi<double>();
  for (int i = 0; i < 100; ++i) {
    const double x = U(rng);
    const double v = specfun::gamma(x) * specfun::gamma(1 - x) * std::sin(pi * x) / pi;
    CHECK(std::abs(v - 1.0) < 1e-12);
  }
}

TEST_CASE("digamma against Boost") {
  for (double x : {0.1, 0.5, 1.0, 2.3, 7.9, 31.0}) {
    CHECK(rel(specfun::digamma(x), boost::math::digamma(x)) < 1e-12);
  }
}

TEST_CASE("gauss_2f1 reference values") {
  CHECK(specfun::gauss_2f1(0.3, -1.2, 0.7, 0.0).value == 1.0);
  CHECK(rel(specfun::gauss_2f1(1, 1, 2, 0.5).value, 1.3862943611198906) < 1e-14);
  CHECK(rel(specfun::gauss_2f1(0.75, -1.75, 0.5, 0.25).value, series_2f1(0.75, -1.75, 0.5, 0.25)) <
        1e-13);
}

TEST_CASE("gauss_2f1 on the Poisson right-hand-side family up to z = 0.999") {
  // a = (alpha+1)/2, b = alpha/2 - s, c = 1/2; s = alpha hits the logarithmic case.
  for (double alpha : {0.5, 1.0, 1.5, 1.7}) {
    for (double s : {alpha, alpha / 2, 1.0, 2.0, 2.1 + alpha, 3.0}) {
      for (double z : {0.1, 0.49, 0.51, 0.8, 0.95, 0.99, 0.999}) {
        const double a = 0.5 * (alpha + 1), b = 0.5 * alpha - s;
        const auto r = specfun::gauss_2f1(a, b, 0.5, z);
        const double want = series_2f1(a, b, 0.5, z);
        INFO("alpha=" << alpha << " s=" << s << " z=" << z);
        CHECK(rel(r.value, want) < 1e-11);
        CHECK(r.est_error >= 0.0);
      }
    }
  }
}

TEST_CASE("gauss_2f1 random arguments") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> A(-3.0, 3.0), C(0.2, 4.0), Z(-0.9, 0.99);
  for (int i = 0; i < 60; ++i) {
    const double a = A(rng), b = A(rng), c = C(rng), z = Z(rng);
    const double want = series_2f1(a, b, c, z);
    if (std::abs(want) < 1e-3) continue;
    INFO(a << ' ' << b << ' ' << c << ' ' << z);
    CHECK(rel(specfun::gauss_2f1(a, b, c, z).value, want) < 1e-10);
  }
}

TEST_CASE("gauss_2f1 contiguous relation in a") {
  // (c-a) F(a-1) + (2a - c + (b-a) z) F(a) + a (z-1) F(a+1) = 0
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> A(-2.0, 2.0), C(0.3, 3.0), Z(0.0, 0.99);
  for (int i = 0; i < 50; ++i) {
    const double a = A(rng), b = A(rng), c = C(rng), z = Z(rng);
    const double fm = specfun::gauss_2f1(a - 1, b, c, z).value;
    const double f0 = specfun::gauss_2f1(a, b, c, z).value;
    const double fp = specfun::gauss_2f1(a + 1, b, c, z).value;
    const double t1 = (c - a) * fm, t2 = (2 * a - c + (b - a) * z) * f0, t3 = a * (z - 1) * fp;
    const double scale = std::max({1.0, std::abs(t1), std::abs(t2), std::abs(t3)});
    INFO(a << ' ' << b << ' ' << c << ' ' << z);
    CHECK(std::abs(t1 + t2 + t3) / scale < 1e-10);
  }
}

TEST_CASE("gauss_2f1 domain") {
  CHECK_THROWS_AS(specfun::gauss_2f1(1, 1, -2.0, 0.3), Error);
  CHECK_THROWS_AS(specfun::gauss_2f1(1, 1, 2.0, 1.0), Error);
}

TEST_CASE("kummer_1f1 reference values") {
  CHECK(specfun::kummer_1f1(0.4, 1.3, 0.0).value == 1.0);
  CHECK(rel(specfun::kummer_1f1(1, 1, -2).value, 0.1353352832366127) < 1e-14);
  CHECK(rel(specfun::kummer_1f1(1.5, 1, -1).value, series_1f1(1.5, 1, -1)) < 1e-13);
}

TEST_CASE("kummer_1f1 against Boost for |z| <= 8") {
  for (double alpha : {0.2, 0.7, 1.0, 1.4, 1.9}) {
    for (double z = 0.0; z <= 8.0; z += 0.37) {
      const double a = 1 + alpha / 2;
      const double want = boost::math::hypergeometric_1F1(a, 1.0, -z);
      INFO(alpha << ' ' << z);
      CHECK(rel(specfun::kummer_1f1(a, 1.0, -z).value, want) < 1e-11);
    }
  }
}

TEST_CASE("kummer_1f1 Kummer transform self-consistency") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> A(0.1, 3.0), Z(0.0, 8.0);
  for (int i = 0; i < 50; ++i) {
    const double a = A(rng), b = A(rng), z = Z(rng);
    const double lhs = specfun::kummer_1f1(a, b, -z).value;
    const double rhs = std::exp(-z) * specfun::kummer_1f1(b - a, b, z).value;
    CHECK(std::abs(lhs - rhs) < 1e-11 * std::abs(lhs));
  }
}

TEST_CASE("normalization constant") {
  CHECK(rel(specfun::normalization_constant(1, 1.0), 0.3183098861837907) < 1e-15);
  CHECK(rel(specfun::normalization_constant(2, 1.0), 0.1591549430918953) < 1e-15);
  const double c1 = specfun::normalization_constant(1, 1e-6);
  const double c2 = specfun::normalization_constant(1, 2e-6);
  CHECK(c1 < 1e-6);
  CHECK(c2 / c1 == doctest::Approx(2.0).epsilon(1e-5));
  CHECK_THROWS_AS(specfun::normalization_constant(3, 1.0), Error);
  CHECK_THROWS_AS(specfun::normalization_constant(1, 2.0), Error);
  CHECK_THROWS_AS(specfun::normalization_constant(1, 0.0), Error);
}
