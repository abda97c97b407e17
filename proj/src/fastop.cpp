#include "fraclap/fastop.hpp"

#include <fftw3.h>

#include <mutex>
#include <sstream>

#include "fraclap/error.hpp"

namespace fraclap {
namespace {

// The FFTW planner is not thread safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

void check_size(std::size_t want, std::size_t got, const char* what) {
  if (want != got) {
    std::ostringstream os;
    os << what << ": expected length " << want << ", got " << got;
    throw Error(ErrorCode::Mismatch, os.str());
  }
}

double* alloc_real(std::size_t n) {
  auto* p = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  if (!p) throw std::bad_alloc();
  return p;
}
fftw_complex* alloc_complex(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!p) throw std::bad_alloc();
  return p;
}

}  // namespace

namespace detail {

struct FftPlan1D {
  std::size_t m = 0;  // embedding length 2n
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit FftPlan1D(std::size_t n) : m(2 * n) {
    double* r = alloc_real(m);
    fftw_complex* c = alloc_complex(m / 2 + 1);
    {
      std::lock_guard lock(planner_mutex());
      fwd = fftw_plan_dft_r2c_1d(static_cast<int>(m), r, c, FFTW_ESTIMATE);
      bwd = fftw_plan_dft_c2r_1d(static_cast<int>(m), c, r, FFTW_ESTIMATE);
    }
    fftw_free(r);
    fftw_free(c);
  }
  ~FftPlan1D() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
};

struct FftPlan2D {
  std::size_t r1 = 0, r2 = 0;  // 2 n1 (fast), 2 n2 (slow)
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  FftPlan2D(std::size_t n1, std::size_t n2) : r1(2 * n1), r2(2 * n2) {
    double* r = alloc_real(r1 * r2);
    fftw_complex* c = alloc_complex(r2 * (r1 / 2 + 1));
    {
      std::lock_guard lock(planner_mutex());
      fwd = fftw_plan_dft_r2c_2d(static_cast<int>(r2), static_cast<int>(r1), r, c, FFTW_ESTIMATE);
      bwd = fftw_plan_dft_c2r_2d(static_cast<int>(r2), static_cast<int>(r1), c, r, FFTW_ESTIMATE);
    }
    fftw_free(r);
    fftw_free(c);
  }
  ~FftPlan2D() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
};

}  // namespace detail

// ---- Toeplitz ---------------------------------------------------------------

ToeplitzOperator::Workspace::Workspace(const ToeplitzOperator& op) {
  const std::size_t m = 2 * op.size();
  real_ = alloc_real(m);
  spec_ = alloc_complex(m / 2 + 1);
}

ToeplitzOperator::Workspace::~Workspace() {
  fftw_free(real_);
  fftw_free(spec_);
}

ToeplitzOperator::ToeplitzOperator(std::vector<double> first_col, double scale)
    : col_(std::move(first_col)), scale_(scale) {
  if (col_.empty()) throw Error(ErrorCode::Domain, "Toeplitz operator needs n >= 1");
  const std::size_t n = col_.size();
  plan_ = std::make_unique<detail::FftPlan1D>(n);
  Workspace ws(*this);
  const std::size_t m = 2 * n;
  ws.real_[0] = col_[0];
  for (std::size_t k = 1; k < n; ++k) {
    ws.real_[k] = col_[k];
    ws.real_[m - k] = col_[k];
  }
  ws.real_[n] = 0.0;
  auto* c = static_cast<fftw_complex*>(ws.spec_);
  fftw_execute_dft_r2c(plan_->fwd, ws.real_, c);
  symbol_.resize(n + 1);
  // The embedding is symmetric, so its spectrum is real.
  for (std::size_t k = 0; k <= n; ++k) symbol_[k] = c[k][0];
}

ToeplitzOperator::~ToeplitzOperator() = default;
ToeplitzOperator::ToeplitzOperator(ToeplitzOperator&&) noexcept = default;
ToeplitzOperator& ToeplitzOperator::operator=(ToeplitzOperator&&) noexcept = default;

void ToeplitzOperator::apply(std::span<const double> x, std::span<double> y,
                             Workspace& ws) const {
  const std::size_t n = size();
  check_size(n, x.size(), "Toeplitz matvec input");
  check_size(n, y.size(), "Toeplitz matvec output");
  const std::size_t m = 2 * n;
  std::copy(x.begin(), x.end(), ws.real_);
  std::fill(ws.real_ + n, ws.real_ + m, 0.0);
  auto* c = static_cast<fftw_complex*>(ws.spec_);
  fftw_execute_dft_r2c(plan_->fwd, ws.real_, c);
  for (std::size_t k = 0; k <= n; ++k) {
    c[k][0] *= symbol_[k];
    c[k][1] *= symbol_[k];
  }
  fftw_execute_dft_c2r(plan_->bwd, c, ws.real_);
  const double f = scale_ / static_cast<double>(m);
  for (std::size_t i = 0; i < n; ++i) y[i] = f * ws.real_[i];
}

std::vector<double> ToeplitzOperator::apply(std::span<const double> x) const {
  Workspace ws(*this);
  std::vector<double> y(size());
  apply(x, y, ws);
  return y;
}

Eigen::MatrixXd ToeplitzOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = scale_ * col_[static_cast<std::size_t>(std::abs(i - j))];
  }
  return M;
}

// ---- BTTB -------------------------------------------------------------------

BTTBOperator::Workspace::Workspace(const BTTBOperator& op) {
  const std::size_t r1 = 2 * static_cast<std::size_t>(op.n1_);
  const std::size_t r2 = 2 * static_cast<std::size_t>(op.n2_);
  real_ = alloc_real(r1 * r2);
  spec_ = alloc_complex(r2 * (r1 / 2 + 1));
}

BTTBOperator::Workspace::~Workspace() {
  fftw_free(real_);
  fftw_free(spec_);
}

BTTBOperator::BTTBOperator(int n1, int n2, std::vector<double> generator, double scale)
    : n1_(n1), n2_(n2), gen_(std::move(generator)), scale_(scale) {
  if (n1 < 1 || n2 < 1) throw Error(ErrorCode::Domain, "BTTB operator needs n1, n2 >= 1");
  check_size(static_cast<std::size_t>(n1) * n2, gen_.size(), "BTTB generator");
  plan_ = std::make_unique<detail::FftPlan2D>(n1, n2);
  Workspace ws(*this);
  const std::size_t r1 = plan_->r1, r2 = plan_->r2;
  // Wrapped offset of embedding index q in a circulant of length r with
  // half-width n; q == n is the zero pad.
  const auto offset = [](std::size_t q, std::size_t n, std::size_t r) -> long {
    if (q < n) return static_cast<long>(q);
    if (q == n) return -1;
    return static_cast<long>(r - q);
  };
  for (std::size_t jj = 0; jj < r2; ++jj) {
    const long dj = offset(jj, static_cast<std::size_t>(n2), r2);
    for (std::size_t ii = 0; ii < r1; ++ii) {
      const long di = offset(ii, static_cast<std::size_t>(n1), r1);
      ws.real_[jj * r1 + ii] =
          (di < 0 || dj < 0) ? 0.0 : gen(static_cast<int>(di), static_cast<int>(dj));
    }
  }
  auto* c = static_cast<fftw_complex*>(ws.spec_);
  fftw_execute_dft_r2c(plan_->fwd, ws.real_, c);
  const std::size_t half = r1 / 2 + 1;
  symbol_.resize(r2 * half);
  for (std::size_t k = 0; k < symbol_.size(); ++k) symbol_[k] = c[k][0];
}

BTTBOperator::~BTTBOperator() = default;
BTTBOperator::BTTBOperator(BTTBOperator&&) noexcept = default;
BTTBOperator& BTTBOperator::operator=(BTTBOperator&&) noexcept = default;

void BTTBOperator::apply(std::span<const double> x, std::span<double> y, Workspace& ws) const {
  check_size(size(), x.size(), "BTTB matvec input");
  check_size(size(), y.size(), "BTTB matvec output");
  const std::size_t r1 = plan_->r1, r2 = plan_->r2;
  const auto n1 = static_cast<std::size_t>(n1_), n2 = static_cast<std::size_t>(n2_);
  std::fill(ws.real_, ws.real_ + r1 * r2, 0.0);
  for (std::size_t j = 0; j < n2; ++j) {
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(j * n1),
              x.begin() + static_cast<std::ptrdiff_t>((j + 1) * n1), ws.real_ + j * r1);
  }
  auto* c = static_cast<fftw_complex*>(ws.spec_);
  fftw_execute_dft_r2c(plan_->fwd, ws.real_, c);
  for (std::size_t k = 0; k < symbol_.size(); ++k) {
    c[k][0] *= symbol_[k];
    c[k][1] *= symbol_[k];
  }
  fftw_execute_dft_c2r(plan_->bwd, c, ws.real_);
  const double f = scale_ / static_cast<double>(r1 * r2);
  for (std::size_t j = 0; j < n2; ++j) {
    for (std::size_t i = 0; i < n1; ++i) y[j * n1 + i] = f * ws.real_[j * r1 + i];
  }
}

std::vector<double> BTTBOperator::apply(std::span<const double> x) const {
  Workspace ws(*this);
  std::vector<double> y(size());
  apply(x, y, ws);
  return y;
}

Eigen::MatrixXd BTTBOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const int ir = static_cast<int>(r % n1_), jr = static_cast<int>(r / n1_);
    for (Eigen::Index c = 0; c < n; ++c) {
      const int ic = static_cast<int>(c % n1_), jc = static_cast<int>(c / n1_);
      M(r, c) = scale_ * gen(std::abs(ir - ic), std::abs(jr - jc));
    }
  }
  return M;
}

// ---- construction from coefficients ----------------------------------------

ToeplitzOperator make_operator(const StencilCoefficients1D& s, const KernelSpec& spec,
                               const Grid& grid) {
  if (grid.dim() != 1 || s.n != grid.cells(0)) {
    throw Error(ErrorCode::Mismatch, "1D coefficients do not match the grid");
  }
  const auto n = static_cast<std::size_t>(grid.interior(0));
  return ToeplitzOperator(std::vector<double>(s.a.begin(), s.a.begin() + static_cast<std::ptrdiff_t>(n)),
                          -spec.c);
}

BTTBOperator make_operator(const StencilCoefficients2D& s, const KernelSpec& spec,
                           const Grid& grid) {
  if (grid.dim() != 2 || s.n != grid.n()) {
    throw Error(ErrorCode::Mismatch, "2D coefficients do not match the grid");
  }
  const int n1 = grid.interior(0), n2 = grid.interior(1);
  std::vector<double> gen(static_cast<std::size_t>(n1) * n2);
  for (int dj = 0; dj < n2; ++dj) {
    for (int di = 0; di < n1; ++di) gen[static_cast<std::size_t>(dj) * n1 + di] = s.at(di, dj);
  }
  return BTTBOperator(n1, n2, std::move(gen), -spec.c);
}

std::vector<double> dense_matvec(const ToeplitzOperator& op, std::span<const double> x) {
  const std::size_t n = op.size();
  check_size(n, x.size(), "dense Toeplitz matvec");
  std::vector<double> y(n, 0.0);
  const auto& col = op.first_col();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += col[i > j ? i - j : j - i] * x[j];
    y[i] = op.scale() * s;
  }
  return y;
}

std::vector<double> dense_matvec(const BTTBOperator& op, std::span<const double> x) {
  check_size(op.size(), x.size(), "dense BTTB matvec");
  const int n1 = op.n1(), n2 = op.n2();
  std::vector<double> y(op.size(), 0.0);
  for (int jr = 0; jr < n2; ++jr) {
    for (int ir = 0; ir < n1; ++ir) {
      double s = 0.0;
      for (int jc = 0; jc < n2; ++jc) {
        for (int ic = 0; ic < n1; ++ic) {
          s += op.gen(std::abs(ir - ic), std::abs(jr - jc)) * x[static_cast<std::size_t>(jc) * n1 + ic];
        }
      }
      y[static_cast<std::size_t>(jr) * n1 + ir] = op.scale() * s;
    }
  }
  return y;
}

Eigen::MatrixXd dense_assemble(const StencilCoefficients1D& s, const KernelSpec& spec,
                               const Grid& grid) {
  if (grid.interior_size() > kDenseCap) {
    throw Error(ErrorCode::SizeCap, "dense assembly is limited to 4096 unknowns");
  }
  const auto n = static_cast<Eigen::Index>(grid.interior(0));
  if (grid.dim() != 1 || s.n != grid.cells(0)) {
    throw Error(ErrorCode::Mismatch, "1D coefficients do not match the grid");
  }
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = -spec.c * s.a[static_cast<std::size_t>(std::abs(i - j))];
  }
  return M;
}

Eigen::MatrixXd dense_assemble(const StencilCoefficients2D& s, const KernelSpec& spec,
                               const Grid& grid) {
  if (grid.interior_size() > kDenseCap) {
    throw Error(ErrorCode::SizeCap, "dense assembly is limited to 4096 unknowns");
  }
  if (grid.dim() != 2 || s.n != grid.n()) {
    throw Error(ErrorCode::Mismatch, "2D coefficients do not match the grid");
  }
  const int n1 = grid.interior(0);
  const auto n = static_cast<Eigen::Index>(grid.interior_size());
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const int ir = static_cast<int>(r % n1), jr = static_cast<int>(r / n1);
    for (Eigen::Index c = 0; c < n; ++c) {
      const int ic = static_cast<int>(c % n1), jc = static_cast<int>(c / n1);
      M(r, c) = -spec.c * s.at(std::abs(ir - ic), std::abs(jr - jc));
    }
  }
  return M;
}

}  // namespace fraclap
