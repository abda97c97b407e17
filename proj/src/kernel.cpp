#include "fraclap/kernel.hpp"

#include <cmath>
#include <sstream>

#include "fraclap/error.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

KernelSpec KernelSpec::power(int dim, double alpha, double gamma) {
  KernelSpec s;
  s.dim = dim;
  s.alpha = alpha;
  s.gamma = gamma;
  s.family = KernelFamily::Power;
  s.validate();
  s.c = specfun::normalization_constant(dim, alpha);
  return s;
}

KernelSpec KernelSpec::tempered(int dim, double alpha, double lambda, double gamma,
                                std::optional<double> cbar) {
  KernelSpec s;
  s.dim = dim;
  s.alpha = alpha;
  s.gamma = gamma;
  s.family = KernelFamily::Tempered;
  s.lambda = lambda;
  s.validate();
  s.c = cbar ? *cbar : specfun::normalization_constant(dim, alpha);
  return s;
}

void KernelSpec::validate() const {
  std::ostringstream os;
  if (dim != 1 && dim != 2) {
    os << "dimension must be 1 or 2, got " << dim;
  } else if (!(alpha > 0.0 && alpha < 2.0)) {
    os << "alpha must lie in (0, 2), got " << alpha;
  } else if (!(gamma > alpha && gamma <= 2.0)) {
    os << "splitting parameter gamma must lie in (alpha, 2], got gamma=" << gamma
       << " with alpha=" << alpha;
  } else if (!(lambda >= 0.0)) {
    os << "tempering lambda must be >= 0, got " << lambda;
  } else {
    return;
  }
  throw Error(ErrorCode::Domain, os.str());
}

double KernelSpec::radial(double r) const {
  return untempered() ? 1.0 : std::exp(-lambda * r);
}

Grid Grid::interval(double a, double b, int cells) {
  if (!(b > a) || cells < 2) {
    throw Error(ErrorCode::Domain, "interval grid needs b > a and at least 2 cells");
  }
  Grid g;
  g.dim_ = 1;
  g.lower_ = {a, 0.0};
  g.upper_ = {b, 0.0};
  g.cells_ = {cells, 0};
  g.h_ = (b - a) / cells;
  return g;
}

Grid Grid::rectangle(Point lower, Point upper, int cells_x) {
  if (!(upper[0] > lower[0] && upper[1] > lower[1]) || cells_x < 2) {
    throw Error(ErrorCode::Domain, "rectangle grid needs a nonempty box and at least 2 cells");
  }
  Grid g;
  g.dim_ = 2;
  g.lower_ = lower;
  g.upper_ = upper;
  g.h_ = (upper[0] - lower[0]) / cells_x;
  // Smallest N_2 with a_2 + N_2 h >= b_2, robust to rounding of exact multiples.
  const double ratio = (upper[1] - lower[1]) / g.h_;
  int n2 = static_cast<int>(std::ceil(ratio - 1e-9 * ratio));
  if (n2 < 2) n2 = 2;
  g.cells_ = {cells_x, n2};
  return g;
}

std::size_t Grid::interior_size() const {
  std::size_t n = static_cast<std::size_t>(interior(0));
  if (dim_ == 2) n *= static_cast<std::size_t>(interior(1));
  return n;
}

Point Grid::interior_point(std::size_t idx) const {
  if (dim_ == 1) return {node(0, static_cast<int>(idx) + 1), 0.0};
  const auto n1 = static_cast<std::size_t>(interior(0));
  return {node(0, static_cast<int>(idx % n1) + 1), node(1, static_cast<int>(idx / n1) + 1)};
}

std::vector<Point> Grid::interior_points() const {
  std::vector<Point> pts(interior_size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = interior_point(i);
  return pts;
}

FieldFn FieldFn::of_1d(std::function<double(double)> fn, Support support) {
  return FieldFn([f = std::move(fn)](const Point& x) { return f(x[0]); }, support);
}

FieldFn FieldFn::zero() {
  FieldFn f([](const Point&) { return 0.0; }, Support::Everywhere);
  f.zero_ = true;
  return f;
}

FieldFn FieldFn::constant(double value) {
  if (value == 0.0) return zero();
  return FieldFn([value](const Point&) { return value; }, Support::Everywhere);
}

double phi(const KernelSpec& spec, const FieldFn& u, const Point& x, const Point& xi) {
  if (spec.dim == 1) {
    const double r = std::abs(xi[0]);
    const double diff = u(Point{x[0] + xi[0], 0.0}) + u(Point{x[0] - xi[0], 0.0}) - 2.0 * u(x);
    return diff / std::pow(r, spec.gamma);
  }
  double sum = -4.0 * u(x);
  for (int s1 = -1; s1 <= 1; s1 += 2) {
    for (int s2 = -1; s2 <= 1; s2 += 2) sum += u(Point{x[0] + s1 * xi[0], x[1] + s2 * xi[1]});
  }
  return sum / std::pow(std::hypot(xi[0], xi[1]), spec.gamma);
}

double mu(const KernelSpec& spec, const Point& xi) {
  const double r = spec.dim == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
  if (r == 0.0) throw Error(ErrorCode::Domain, "mu is singular at xi = 0");
  return spec.radial(r) * std::pow(r, spec.gamma - spec.dim - spec.alpha);
}

}  // namespace fraclap
