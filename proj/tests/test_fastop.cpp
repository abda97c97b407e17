#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <random>

#include "fraclap/error.hpp"
#include "fraclap/fastop.hpp"
#include "fraclap/solver.hpp"

using namespace fraclap;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = N(rng);
  return v;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double inf_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Plain double loop over the Toeplitz / BTTB definition.
std::vector<double> naive_toeplitz(const std::vector<double>& col, double scale, const std::vector<double>& x) {
  const std::size_t n = col.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) y[i] += col[i > j ? i - j : j - i] * x[j];
    y[i] *= scale;
  }
  return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("Toeplitz identity and tridiagonal stencil") {
  std::vector<double> e1(9, 0.0);
  e1[0] = 1.0;
  const ToeplitzOperator id(e1, -2.5);
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto y = id.apply(x);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == doctest::Approx(-2.5 * x[i]).epsilon(1e-14));

  std::vector<double> col(10, 0.0);
  col[0] = 2.0;
  col[1] = -1.0;
  const ToeplitzOperator lap(col, 3.0);
  const auto z = lap.apply(std::vector<double>(10, 1.0));
  for (std::size_t i = 0; i < 10; ++i) {
    const double want = (i == 0 || i == 9) ? 3.0 : 0.0;
    CHECK(std::abs(z[i] - want) < 1e-13);
  }

  std::mt19937_64 rng(2);
  const auto c = random_vec(rng, 37), v = random_vec(rng, 37);
  const ToeplitzOperator op(c, 0.7);
  const auto naive = naive_toeplitz(c, 0.7, v);
  CHECK(inf_diff(op.apply(v), naive) <= 1e-12 * inf_norm(naive));
  CHECK(inf_diff(dense_matvec(op, v), naive) <= 1e-13 * inf_norm(naive));
  std::vector<double> e(37, 0.0);
  e[0] = 1.0;
  const auto first = op.apply(e);
  for (std::size_t i = 0; i < 37; ++i) CHECK(std::abs(first[i] - 0.7 * c[i]) < 1e-13 * inf_norm(c));
}

TEST_CASE("Toeplitz FFT matches dense for N up to 128") {
  std::mt19937_64 rng(3);
  for (std::size_t n = 1; n <= 128; n += (n < 16 ? 1 : 7)) {
    const auto c = random_vec(rng, n);
    const ToeplitzOperator op(c, -1.3);
    const Eigen::MatrixXd M = op.dense();
    for (int probe = 0; probe < 3; ++probe) {
      const auto x = random_vec(rng, n);
      Eigen::VectorXd ref = M * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(n));
      std::vector<double> r(ref.data(), ref.data() + n);
      CHECK(inf_diff(op.apply(x), r) <= 1e-12 * inf_norm(r));
    }
    const auto x = random_vec(rng, n), y = random_vec(rng, n);
    const double lhs = dot(op.apply(x), y), rhs = dot(x, op.apply(y));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), 1.0));
  }
}

TEST_CASE("Toeplitz workspace reuse and size checks") {
  std::mt19937_64 rng(4);
  const auto c = random_vec(rng, 20);
  const ToeplitzOperator op(c, 1.0);
  ToeplitzOperator::Workspace ws(op);
  std::vector<double> y(20);
  for (int r = 0; r < 3; ++r) {
    const auto x = random_vec(rng, 20);
    op.apply(x, y, ws);
    CHECK(inf_diff(y, naive_toeplitz(c, 1.0, x)) <= 1e-12 * inf_norm(y));
  }
  CHECK_THROWS_AS(op.apply(std::vector<double>(19, 1.0)), Error);
}

TEST_CASE("BTTB FFT matches dense for sizes up to 16 x 16") {
  std::mt19937_64 rng(5);
  for (int n1 = 1; n1 <= 16; n1 += 3) {
    for (int n2 = 1; n2 <= 16; n2 += 5) {
      const auto g = random_vec(rng, static_cast<std::size_t>(n1 * n2));
      const BTTBOperator op(n1, n2, g, 0.9);
      for (int probe = 0; probe < 3; ++probe) {
        const auto x = random_vec(rng, op.size());
        const auto d = dense_matvec(op, x);
        CHECK(inf_diff(op.apply(x), d) <= 1e-12 * inf_norm(d));
      }
      const Eigen::MatrixXd M = op.dense();
      CHECK((M - M.transpose()).norm() == 0.0);
    }
  }
  const auto g = random_vec(rng, 35);
  const BTTBOperator op(5, 7, g, 1.0);
  const Eigen::MatrixXd M = op.dense();
  for (std::size_t k = 0; k < op.size(); k += 6) {
    std::vector<double> e(op.size(), 0.0);
    e[k] = 1.0;
    const auto col = op.apply(e);
    for (std::size_t i = 0; i < op.size(); ++i) CHECK(std::abs(col[i] - M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))) < 1e-12 * M.cwiseAbs().maxCoeff());
  }
  const auto x = random_vec(rng, 35), y = random_vec(rng, 35);
  CHECK(std::abs(dot(op.apply(x), y) - dot(x, op.apply(y))) < 1e-12 * std::abs(dot(op.apply(x), y)) + 1e-13);
}

TEST_CASE("BTTB with a single nonzero block column acts blockwise") {
  std::mt19937_64 rng(6);
  const int n1 = 6, n2 = 4;
  auto g = random_vec(rng, n1 * n2);
  for (int j = 1; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) g[static_cast<std::size_t>(j * n1 + i)] = 0.0;
  }
  const std::vector<double> col(g.begin(), g.begin() + n1);
  const BTTBOperator op(n1, n2, g, 2.0);
  const auto x = random_vec(rng, n1 * n2);
  const auto y = op.apply(x);
  for (int j = 0; j < n2; ++j) {
    const std::vector<double> xb(x.begin() + j * n1, x.begin() + (j + 1) * n1);
    const auto yb = naive_toeplitz(col, 2.0, xb);
    for (int i = 0; i < n1; ++i) CHECK(std::abs(y[static_cast<std::size_t>(j * n1 + i)] - yb[i]) < 1e-12 * inf_norm(yb));
  }
}

TEST_CASE("dense assembly of the scheme") {
  const auto spec = KernelSpec::power(1, 1.0);
  const auto grid = Grid::interval(-1, 1, 4);
  const auto s = assemble_coeffs_1d(spec, grid, 1);
  const Eigen::MatrixXd M = dense_assemble(s, spec, grid);
  REQUIRE(M.rows() == 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(M(i, j) == doctest::Approx(-spec.c * s.a[std::abs(i - j)]).epsilon(1e-15));
  }
  CHECK((M - M.transpose()).norm() == 0.0);

  const auto g16 = Grid::interval(-1, 1, 16);
  const Eigen::MatrixXd P = dense_assemble(assemble_coeffs_1d(spec, g16, 0), spec, g16);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  // The FFT operator and the dense matrix are the same linear map.
  const auto op = make_operator(assemble_coeffs_1d(spec, g16, 2), spec, g16);
  const Eigen::MatrixXd Q = dense_assemble(assemble_coeffs_1d(spec, g16, 2), spec, g16);
  CHECK((op.dense() - Q).cwiseAbs().maxCoeff() <= 1e-13 * Q.cwiseAbs().maxCoeff());

  const auto spec2 = KernelSpec::power(2, 0.8);
  const auto g2 = Grid::rectangle({-1, -1}, {1, 0.5}, 8);
  const auto s2 = assemble_coeffs_2d(spec2, g2, 1);
  const auto B = make_operator(s2, spec2, g2);
  const Eigen::MatrixXd D2 = dense_assemble(s2, spec2, g2);
  CHECK(B.n1() == 7);
  CHECK(B.n2() == 5);
  CHECK((B.dense() - D2).cwiseAbs().maxCoeff() <= 1e-13 * D2.cwiseAbs().maxCoeff());

  const auto big = Grid::interval(-1, 1, 5000);
  CHECK_THROWS_AS(dense_assemble(assemble_coeffs_1d(spec, big, 0), spec, big), Error);
}

TEST_CASE("dense scheme matrix is SPD for p = 0, 1") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const double alpha = 0.05 + 1.9 * U(rng);
    const double gamma = trial % 2 ? 2.0 : alpha + (2.0 - alpha) * (0.05 + 0.95 * U(rng));
    const int n = 4 + static_cast<int>(60 * U(rng));
    const auto spec = KernelSpec::power(1, alpha, gamma);
    const auto grid = Grid::interval(-1, 1, n);
    for (int p : {0, 1}) {
      const Eigen::MatrixXd M = dense_assemble(assemble_coeffs_1d(spec, grid, p), spec, grid);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
      INFO("alpha=" << alpha << " gamma=" << gamma << " n=" << n << " p=" << p);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("Toeplitz matvec cost grows like n log n") {
  // Smoke benchmark only: report timings, assert nothing beyond a loose sanity bound.
  std::mt19937_64 rng(1);
  double prev = 0.0;
  for (std::size_t n : {std::size_t{1} << 12, std::size_t{1} << 16}) {
    const ToeplitzOperator op(random_vec(rng, n), 1.0);
    const auto x = random_vec(rng, n);
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < 5; ++r) (void)op.apply(x);
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    MESSAGE("n=" << n << " matvec " << t / 5 << " s");
    if (prev > 0.0) CHECK(t < 16.0 * 16.0 * prev);  // far below the n^2 ratio of 256
    prev = t;
  }
}
