#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "fraclap/kernel.hpp"
#include "fraclap/stencil.hpp"

// Symmetric Toeplitz / BTTB operators applied through FFT circulant
// embedding, plus dense assembly for validation.

namespace fraclap {

namespace detail {
struct FftPlan1D;
struct FftPlan2D;
}  // namespace detail

class ToeplitzOperator {
 public:
  /// Scratch buffers for one matvec at a time. Create one per thread.
  class Workspace {
   public:
    explicit Workspace(const ToeplitzOperator& op);
    ~Workspace();
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

   private:
    friend class ToeplitzOperator;
    double* real_ = nullptr;
    void* spec_ = nullptr;
  };

  ToeplitzOperator(std::vector<double> first_col, double scale);
  ~ToeplitzOperator();
  ToeplitzOperator(ToeplitzOperator&&) noexcept;
  ToeplitzOperator& operator=(ToeplitzOperator&&) noexcept;

  std::size_t size() const { return col_.size(); }
  double scale() const { return scale_; }
  const std::vector<double>& first_col() const { return col_; }
  /// Real circulant eigenvalues, half spectrum (n + 1 entries).
  const std::vector<double>& symbol() const { return symbol_; }

  void apply(std::span<const double> x, std::span<double> y, Workspace& ws) const;
  std::vector<double> apply(std::span<const double> x) const;

  Eigen::MatrixXd dense() const;

 private:
  std::vector<double> col_;
  std::vector<double> symbol_;
  double scale_ = 1.0;
  std::unique_ptr<detail::FftPlan1D> plan_;
};

class BTTBOperator {
 public:
  class Workspace {
   public:
    explicit Workspace(const BTTBOperator& op);
    ~Workspace();
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

   private:
    friend class BTTBOperator;
    double* real_ = nullptr;
    void* spec_ = nullptr;
  };

  /// gen(di, dj) for 0 <= di < n1, 0 <= dj < n2, stored with di fast.
  BTTBOperator(int n1, int n2, std::vector<double> gen, double scale);
  ~BTTBOperator();
  BTTBOperator(BTTBOperator&&) noexcept;
  BTTBOperator& operator=(BTTBOperator&&) noexcept;

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  std::size_t size() const { return static_cast<std::size_t>(n1_) * n2_; }
  double scale() const { return scale_; }
  double gen(int di, int dj) const {
    return gen_[static_cast<std::size_t>(dj) * n1_ + static_cast<std::size_t>(di)];
  }

  /// x, y indexed i + n1 * j.
  void apply(std::span<const double> x, std::span<double> y, Workspace& ws) const;
  std::vector<double> apply(std::span<const double> x) const;

  Eigen::MatrixXd dense() const;

 private:
  int n1_ = 0, n2_ = 0;
  std::vector<double> gen_;
  std::vector<double> symbol_;  // (2 n2) x (n1 + 1)
  double scale_ = 1.0;
  std::unique_ptr<detail::FftPlan2D> plan_;
};

/// -c Toeplitz(a_0 .. a_{N-2}) on the interior unknowns.
ToeplitzOperator make_operator(const StencilCoefficients1D& s, const KernelSpec& spec,
                               const Grid& grid);
/// -c BTTB with blocks from a_{|di| |dj|}.
BTTBOperator make_operator(const StencilCoefficients2D& s, const KernelSpec& spec,
                           const Grid& grid);

/// Reference triple-loop matvecs.
std::vector<double> dense_matvec(const ToeplitzOperator& op, std::span<const double> x);
std::vector<double> dense_matvec(const BTTBOperator& op, std::span<const double> x);

/// Explicit matrix with the scale folded in. Throws ErrorCode::SizeCap above
/// 4096 unknowns.
Eigen::MatrixXd dense_assemble(const StencilCoefficients1D& s, const KernelSpec& spec,
                               const Grid& grid);
Eigen::MatrixXd dense_assemble(const StencilCoefficients2D& s, const KernelSpec& spec,
                               const Grid& grid);

constexpr std::size_t kDenseCap = 4096;

}  // namespace fraclap
