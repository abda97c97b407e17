#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

// Problem-specification types shared by every module: the kernel, the
// uniform grid, and scalar fields on R^d.

namespace fraclap {

/// Points are stored in R^2; one-dimensional code only reads component 0.
using Point = std::array<double, 2>;

enum class KernelFamily { Power, Tempered };

/// Kernel |xi|^-(d+alpha) K(|xi|) with K = 1 (Power) or exp(-lambda r)
/// (Tempered), the splitting exponent gamma in (alpha, 2] and the constant
/// multiplying the integral.
struct KernelSpec {
  int dim = 1;
  double alpha = 1.0;
  double gamma = 2.0;
  KernelFamily family = KernelFamily::Power;
  double lambda = 0.0;
  double c = 0.0;

  static KernelSpec power(int dim, double alpha, double gamma = 2.0);

  /// The tempered constant defaults to c_{d,alpha}; pass cbar to override.
  static KernelSpec tempered(int dim, double alpha, double lambda, double gamma = 2.0,
                             std::optional<double> cbar = std::nullopt);

  /// Throws ErrorCode::Domain unless dim in {1,2}, alpha < gamma <= 2, lambda >= 0.
  void validate() const;

  /// floor(gamma/2): 1 only for gamma == 2.
  int zeta() const { return gamma == 2.0 ? 1 : 0; }

  /// K(r); identically 1 for the power kernel or lambda == 0.
  double radial(double r) const;

  bool untempered() const { return family == KernelFamily::Power || lambda == 0.0; }
};

/// Uniform tensor grid on (a_1,b_1) x ... with mesh size h = (b_1 - a_1)/N_1.
///
/// In 2D, N_2 is the smallest integer with a_2 + N_2 h >= b_2. The stencil
/// extent L = n h with n = max_i N_i covers the longest side, so that every
/// xi outside [0, L]^d maps x +- xi out of the domain.
class Grid {
 public:
  static Grid interval(double a, double b, int cells);
  static Grid rectangle(Point lower, Point upper, int cells_x);

  int dim() const { return dim_; }
  double h() const { return h_; }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }
  int cells(int axis) const { return cells_[axis]; }

  /// Number of xi-intervals of the stencil, max_i N_i.
  int n() const { return std::max(cells_[0], dim_ == 2 ? cells_[1] : 0); }
  /// Stencil extent L = n h.
  double extent() const { return n() * h_; }

  /// Interior nodes per axis (N_i - 1).
  int interior(int axis) const { return cells_[axis] - 1; }
  std::size_t interior_size() const;

  double node(int axis, int i) const { return lower_[axis] + i * h_; }

  /// Coordinates of interior unknown `idx` (i fast, j slow; 1-based nodes).
  Point interior_point(std::size_t idx) const;

  std::vector<Point> interior_points() const;

 private:
  int dim_ = 1;
  Point lower_{};
  Point upper_{};
  std::array<int, 2> cells_{};
  double h_ = 0.0;
};

/// Scalar field on R^d with a flag recording where it may be evaluated.
class FieldFn {
 public:
  enum class Support { Interior, Everywhere };
  using Fn = std::function<double(const Point&)>;

  FieldFn() = default;
  FieldFn(Fn fn, Support support) : fn_(std::move(fn)), support_(support) {}

  static FieldFn of_1d(std::function<double(double)> fn, Support support = Support::Everywhere);
  static FieldFn zero();
  static FieldFn constant(double value);

  double operator()(const Point& x) const { return fn_(x); }
  double operator()(double x) const { return fn_(Point{x, 0.0}); }

  Support support() const { return support_; }
  /// True only for fields built by zero(); lets callers skip quadrature.
  bool is_zero() const { return zero_; }
  explicit operator bool() const { return static_cast<bool>(fn_); }

 private:
  Fn fn_;
  Support support_ = Support::Everywhere;
  bool zero_ = false;
};

/// Phi_{d,gamma}(x, xi) = (sum over sign patterns of u(x + s.xi) - 2^d u(x)) / |xi|^gamma.
double phi(const KernelSpec& spec, const FieldFn& u, const Point& x, const Point& xi);

/// mu(xi) = K(|xi|) |xi|^(gamma - d - alpha). Throws ErrorCode::Domain at xi = 0.
double mu(const KernelSpec& spec, const Point& xi);

}  // namespace fraclap
