#include "fraclap/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "fraclap/error.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/weights.hpp"

namespace fraclap {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// scale * T x with x = 0 off the interior, summed as sum_k a_k (x_{i+k} + x_{i-k} - 2 x_i)
// - 2 F x_i in extended precision. The FFT product leaves a relative floor near
// eps |a_1| / lambda_min, which is above 1e-12 on fine grids for alpha near 2.
void difference_matvec_1d(const StencilCoefficients1D& s, double scale,
                          std::span<const double> x, std::span<double> y) {
  const int n = s.n;
  std::vector<double> X(static_cast<std::size_t>(3 * n + 1), 0.0);
  std::copy(x.begin(), x.end(), X.begin() + n + 1);
  parallel_for(x.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const std::size_t c = idx + 1 + static_cast<std::size_t>(n);
      const long double xi = X[c];
      long double sum = 0.0L;
      for (int k = n; k >= 1; --k) {
        const auto kk = static_cast<std::size_t>(k);
        sum += static_cast<long double>(s.a[kk]) * ((X[c + kk] - xi) + (X[c - kk] - xi));
      }
      sum -= 2.0L * s.farfield_measure * xi;
      y[idx] = static_cast<double>(scale * sum);
    }
  });
}

}  // namespace

StencilCoefficients1D assemble_coeffs_1d(const KernelSpec& spec, const Grid& grid, int p) {
  if (grid.dim() != 1 || spec.dim != 1) throw Error(ErrorCode::Mismatch, "expected a 1D problem");
  const auto w = cached_weights_1d(spec, p, grid.n(), grid.h(), kWeightTol);
  return coeffs_1d(*w, spec, grid);
}

StencilCoefficients2D assemble_coeffs_2d(const KernelSpec& spec, const Grid& grid, int p,
                                         OriginFold fold) {
  if (grid.dim() != 2 || spec.dim != 2) throw Error(ErrorCode::Mismatch, "expected a 2D problem");
  const auto w = cached_weights_2d(spec, p, grid.n(), grid.h(), kWeightTol);
  return coeffs_2d(*w, spec, grid, 1e-12, fold);
}

std::vector<double> apply_operator(const KernelSpec& spec, const Grid& grid, int p,
                                   const FieldFn& u, const FieldFn& g, OriginFold fold) {
  if (grid.dim() == 1) {
    const auto s = assemble_coeffs_1d(spec, grid, p);
    const int n = grid.cells(0);
    std::vector<double> U(static_cast<std::size_t>(3 * n + 1));
    for (int j = -n; j <= 2 * n; ++j) {
      const bool interior = j > 0 && j < n;
      const double x = grid.node(0, j);
      U[static_cast<std::size_t>(j + n)] = interior ? u(x) : g(x);
    }
    const double lambda = spec.untempered() ? 0.0 : spec.lambda;
    const double L = grid.extent();
    std::vector<double> out(static_cast<std::size_t>(n - 1));
    parallel_for(out.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t idx = lo; idx < hi; ++idx) {
        const int i = static_cast<int>(idx) + 1;
        const double ui = U[static_cast<std::size_t>(i + n)];
        double sum = 0.0;
        for (int k = n; k >= 1; --k) {
          const double d = (U[static_cast<std::size_t>(i + k + n)] - ui) +
                           (U[static_cast<std::size_t>(i - k + n)] - ui);
          sum += s.a[static_cast<std::size_t>(k)] * d;
        }
        sum -= 2.0 * s.farfield_measure * ui;
        sum += tail_integral_1d(g, grid.node(0, i), L, spec.alpha, lambda, 1e-15);
        out[idx] = -spec.c * sum;
      }
    });
    return out;
  }

  const auto s = assemble_coeffs_2d(spec, grid, p, fold);
  const auto op = make_operator(s, spec, grid);
  std::vector<double> x(grid.interior_size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = u(grid.interior_point(i));
  auto y = op.apply(x);
  const auto b = boundary_vector_2d(g, s, grid, spec);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += b.values[i];
  return y;
}

KrylovResult conjugate_gradient(const LinearMap& A, std::span<const double> rhs, double tol,
                                int max_iter) {
  const std::size_t n = rhs.size();
  KrylovResult res;
  res.x.assign(n, 0.0);
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) return res;
  std::vector<double> r(rhs.begin(), rhs.end()), d = r, q(n);
  double rr = dot(r, r);
  for (int it = 1; it <= max_iter; ++it) {
    A(d, q);
    const double curv = dot(d, q);
    if (!(curv > 0.0)) {
      res.nonpositive_curvature = true;
      res.iterations = it;
      res.residual = std::sqrt(rr) / bnorm;
      return res;
    }
    const double step = rr / curv;
    for (std::size_t i = 0; i < n; ++i) {
      res.x[i] += step * d[i];
      r[i] -= step * q[i];
    }
    const double rr_new = dot(r, r);
    res.iterations = it;
    res.residual = std::sqrt(rr_new) / bnorm;
    if (res.residual <= tol) return res;
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) d[i] = r[i] + beta * d[i];
  }
  return res;
}

KrylovResult minres(const LinearMap& A, std::span<const double> rhs, double tol, int max_iter) {
  const std::size_t n = rhs.size();
  KrylovResult res;
  res.x.assign(n, 0.0);
  const double beta1 = norm2(rhs);
  if (beta1 == 0.0) return res;
  std::vector<double> r1(rhs.begin(), rhs.end()), r2 = r1, y = r1, v(n);
  std::vector<double> w(n, 0.0), w1(n, 0.0), w2(n, 0.0);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  constexpr double tiny = std::numeric_limits<double>::min();
  for (int it = 1; it <= max_iter; ++it) {
    const double s = 1.0 / beta;
    for (std::size_t i = 0; i < n; ++i) v[i] = s * y[i];
    A(v, y);
    if (it >= 2) {
      const double f = beta / oldb;
      for (std::size_t i = 0; i < n; ++i) y[i] -= f * r1[i];
    }
    const double alfa = dot(v, y);
    const double f2 = alfa / beta;
    for (std::size_t i = 0; i < n; ++i) y[i] -= f2 * r2[i];
    std::swap(r1, r2);
    r2 = y;
    oldb = beta;
    beta = norm2(y);
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gam = std::max(std::hypot(gbar, beta), tiny);
    cs = gbar / gam;
    sn = beta / gam;
    const double phi = cs * phibar;
    phibar *= sn;
    std::swap(w1, w2);
    std::swap(w2, w);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gam;
      res.x[i] += phi * w[i];
    }
    res.iterations = it;
    res.residual = phibar / beta1;
    if (res.residual <= tol || beta == 0.0) return res;
  }
  return res;
}

SolveReport solve_poisson(const PoissonProblem& pb, double cg_tol, int max_iter) {
  if (!(cg_tol > 0.0)) throw Error(ErrorCode::Domain, "CG tolerance must be positive");
  if (pb.p < 0 || pb.p > 2) throw Error(ErrorCode::Domain, "basis degree must be 0, 1 or 2");
  pb.spec.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Grid& grid = pb.grid;
  const std::size_t n = grid.interior_size();

  std::vector<double> rhs(n);
  LinearMap A;
  LinearMap A_resid;  // used for the true residual
  if (grid.dim() == 1) {
    const auto s = assemble_coeffs_1d(pb.spec, grid, pb.p);
    auto op = std::make_shared<ToeplitzOperator>(make_operator(s, pb.spec, grid));
    auto ws = std::make_shared<ToeplitzOperator::Workspace>(*op);
    A = [op, ws](std::span<const double> x, std::span<double> y) { op->apply(x, y, *ws); };
    A_resid = [s, scale = -pb.spec.c](std::span<const double> x, std::span<double> y) {
      difference_matvec_1d(s, scale, x, y);
    };
    const auto b = boundary_vector_1d(pb.g, s, grid, pb.spec);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = pb.f(grid.interior_point(i)) - b.values[i];
  } else {
    const auto s = assemble_coeffs_2d(pb.spec, grid, pb.p, pb.fold);
    auto op = std::make_shared<BTTBOperator>(make_operator(s, pb.spec, grid));
    auto ws = std::make_shared<BTTBOperator::Workspace>(*op);
    A = [op, ws](std::span<const double> x, std::span<double> y) { op->apply(x, y, *ws); };
    const auto b = boundary_vector_2d(pb.g, s, grid, pb.spec);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = pb.f(grid.interior_point(i)) - b.values[i];
    A_resid = A;
  }

  SolveReport rep;
  KrylovResult kr = conjugate_gradient(A, rhs, cg_tol, max_iter);
  if (kr.nonpositive_curvature) {
    rep.indefiniteness_flag = true;
    const int used = kr.iterations;
    kr = minres(A, rhs, cg_tol, max_iter);
    kr.iterations += used;
  }
  // Recompute the residual; a few restarts absorb drift of the recursion.
  constexpr int kMaxRestarts = 5;
  const double rnorm = norm2(rhs);
  std::vector<double> Ax(n), r(n);
  for (int restart = 0;; ++restart) {
    A_resid(kr.x, Ax);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - Ax[i];
    rep.final_residual = rnorm == 0.0 ? 0.0 : norm2(r) / rnorm;
    if (rep.final_residual <= cg_tol || restart == kMaxRestarts) break;
    // Aim below the target; a residual just above it would otherwise ask for
    // almost no reduction.
    const double corr_tol = std::min(1e-2, 0.5 * cg_tol * rnorm / norm2(r));
    KrylovResult corr = rep.indefiniteness_flag ? minres(A, r, corr_tol, max_iter)
                                                : conjugate_gradient(A, r, corr_tol, max_iter);
    if (corr.nonpositive_curvature) {
      rep.indefiniteness_flag = true;
      corr = minres(A, r, corr_tol, max_iter);
    }
    for (std::size_t i = 0; i < n; ++i) kr.x[i] += corr.x[i];
    kr.iterations += corr.iterations;
  }
  if (rep.final_residual > cg_tol) {
    std::ostringstream os;
    os << "Krylov solve stopped at relative residual " << rep.final_residual << " after "
       << kr.iterations << " iterations (tolerance " << cg_tol << ")";
    throw Error(ErrorCode::IterationCap, os.str());
  }
  rep.u_h = std::move(kr.x);
  rep.iterations = kr.iterations;
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<double> solve_poisson_dense(const PoissonProblem& pb) {
  const Grid& grid = pb.grid;
  const std::size_t n = grid.interior_size();
  Eigen::MatrixXd M;
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  if (grid.dim() == 1) {
    const auto s = assemble_coeffs_1d(pb.spec, grid, pb.p);
    M = dense_assemble(s, pb.spec, grid);
    const auto b = boundary_vector_1d(pb.g, s, grid, pb.spec);
    for (std::size_t i = 0; i < n; ++i) rhs(static_cast<Eigen::Index>(i)) = pb.f(grid.interior_point(i)) - b.values[i];
  } else {
    const auto s = assemble_coeffs_2d(pb.spec, grid, pb.p, pb.fold);
    M = dense_assemble(s, pb.spec, grid);
    const auto b = boundary_vector_2d(pb.g, s, grid, pb.spec);
    for (std::size_t i = 0; i < n; ++i) rhs(static_cast<Eigen::Index>(i)) = pb.f(grid.interior_point(i)) - b.values[i];
  }
  const Eigen::VectorXd u = M.partialPivLu().solve(rhs);
  return {u.data(), u.data() + u.size()};
}

ErrorNorms grid_error_norms(std::span<const double> u_h, const FieldFn& u_exact,
                            const Grid& grid) {
  if (u_h.size() != grid.interior_size()) {
    throw Error(ErrorCode::Mismatch, "solution length does not match the grid");
  }
  ErrorNorms e;
  e.pointwise.resize(u_h.size());
  for (std::size_t i = 0; i < u_h.size(); ++i) {
    e.pointwise[i] = u_h[i] - u_exact(grid.interior_point(i));
    e.inf_norm = std::max(e.inf_norm, std::abs(e.pointwise[i]));
  }
  return e;
}

}  // namespace fraclap
