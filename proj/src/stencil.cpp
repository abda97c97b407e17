#include "fraclap/stencil.hpp"

#include <cmath>
#include <sstream>

#include "fraclap/error.hpp"
#include "fraclap/quadrature.hpp"

namespace fraclap {
namespace {

void check_match(int wn, double wh, const Grid& grid, int dim) {
  if (grid.dim() != dim) throw Error(ErrorCode::Mismatch, "grid dimension does not match weights");
  if (wn != grid.n() || std::abs(wh - grid.h()) > 1e-12 * grid.h()) {
    std::ostringstream os;
    os << "weight table (N=" << wn << ", h=" << wh << ") does not match grid (N=" << grid.n()
       << ", h=" << grid.h() << ")";
    throw Error(ErrorCode::Mismatch, os.str());
  }
}

}  // namespace

double farfield_measure_1d(const KernelSpec& spec, double L, double tol) {
  if (!(L > 0.0)) throw Error(ErrorCode::Domain, "far-field measure needs L > 0");
  const double a = spec.alpha;
  const double scale = std::pow(L, -a) / a;
  if (spec.untempered()) return scale;
  // xi = L t^(-1/alpha) turns xi^(-1-alpha) d xi into L^-alpha / alpha dt.
  const auto f = [&](double t) { return t == 0.0 ? 0.0 : spec.radial(L * std::pow(t, -1.0 / a)); };
  return scale * quad::adaptive(f, 0.0, 1.0, tol);
}

double farfield_measure_2d(double alpha, double L, double tol) {
  if (!(alpha > 0.0 && alpha < 2.0) || !(L > 0.0)) {
    throw Error(ErrorCode::Domain, "far-field measure needs alpha in (0, 2) and L > 0");
  }
  // Two wedges xi_2 = v xi_1 (v in [0, 1]) and the swap; the radial part
  // integrates in closed form.
  const double scale = 2.0 * std::pow(L, -alpha) / alpha;
  const auto f = [alpha](double v) { return std::pow(1.0 + v * v, -1.0 - 0.5 * alpha); };
  return scale * quad::adaptive(f, 0.0, 1.0, tol / scale);
}

double farfield_measure_2d(const KernelSpec& spec, double L, double tol) {
  if (spec.untempered()) return farfield_measure_2d(spec.alpha, L, tol);
  if (!(L > 0.0)) throw Error(ErrorCode::Domain, "far-field measure needs L > 0");
  const double a = spec.alpha;
  const double scale = 2.0 * std::pow(L, -a) / a;
  const auto f = [&](double t, double v) {
    if (t == 0.0) return 0.0;
    const double x1 = L * std::pow(t, -1.0 / a);
    const double q = 1.0 + v * v;
    return std::pow(q, -1.0 - 0.5 * a) * spec.radial(x1 * std::sqrt(q));
  };
  return scale * quad::adaptive_2d(f, 0.0, 1.0, 0.0, 1.0, tol / scale);
}

StencilCoefficients1D coeffs_1d(const WeightTable1D& w, const KernelSpec& spec, const Grid& grid,
                                double tol) {
  check_match(w.n, w.h, grid, 1);
  const int n = w.n;
  const double h = w.h;
  StencilCoefficients1D s;
  s.n = n;
  s.h = h;
  s.zeta = spec.zeta();
  s.farfield_measure = farfield_measure_1d(spec, grid.extent(), tol);
  s.a.assign(static_cast<std::size_t>(n) + 1, 0.0);
  double sum = 0.0;
  // Phi(0) is replaced by Phi(xi_1) for p <= 1 and by the even extrapolation
  // (4 Phi(xi_1) - Phi(xi_2)) / 3 for p = 2, which keeps fourth order.
  double fold1 = s.zeta, fold2 = 0.0;
  if (w.p == 2) {
    fold1 = s.zeta * 4.0 / 3.0;
    fold2 = -s.zeta / 3.0;
  }
  for (int j = 1; j <= n; ++j) {
    double om = w[j];
    if (j == 1) om += fold1 * w[0];
    if (j == 2) om += fold2 * w[0];
    s.a[static_cast<std::size_t>(j)] = om / std::pow(j * h, spec.gamma);
  }
  // Sum smallest first.
  for (int j = n; j >= 1; --j) sum += s.a[static_cast<std::size_t>(j)];
  s.a[0] = -2.0 * (sum + s.farfield_measure);
  return s;
}

StencilCoefficients2D coeffs_2d(const WeightTable2D& w, const KernelSpec& spec, const Grid& grid,
                                double tol, OriginFold fold) {
  check_match(w.n, w.h, grid, 2);
  const int n = w.n;
  const double h = w.h;
  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  StencilCoefficients2D s;
  s.n = n;
  s.h = h;
  s.zeta = spec.zeta();
  s.farfield_measure = farfield_measure_2d(spec, grid.extent(), tol);
  s.a.assign(stride * stride, 0.0);

  const double z = s.zeta;
  const double w00 = w.at(0, 0);
  const double axis_fold = fold == OriginFold::ThreePoint ? 2.0 : 1.0;
  const double diag_fold = fold == OriginFold::AxisAverage ? 0.0 : -1.0;
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; l <= n; ++l) {
      if (k == 0 && l == 0) continue;
      const double r = std::pow(std::hypot(k * h, l * h), spec.gamma);
      double v;
      if (k + l == 1) {
        v = 2.0 * w.at(k, l) + axis_fold * z * w00;
      } else if (k == 1 && l == 1) {
        v = w.at(1, 1) + diag_fold * z * w00;
      } else if (k == 0 || l == 0) {
        v = 2.0 * w.at(k, l);
      } else {
        v = w.at(k, l);
      }
      s.a[static_cast<std::size_t>(k) * stride + static_cast<std::size_t>(l)] = v / r;
    }
  }
  double axis = 0.0, inner = 0.0;
  for (int k = n; k >= 1; --k) {
    axis += s.a[static_cast<std::size_t>(k) * stride] + s.a[static_cast<std::size_t>(k)];
    for (int l = n; l >= 1; --l) inner += s.a[static_cast<std::size_t>(k) * stride + static_cast<std::size_t>(l)];
  }
  s.a[0] = -2.0 * axis - 4.0 * inner - 4.0 * s.farfield_measure;
  return s;
}

}  // namespace fraclap
