#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "fraclap/kernel.hpp"

// Weight integrals omega_k^p (1D) and omega_kl^p (2D) of the degree-p
// Lagrange basis against K(|xi|) |xi|^(gamma - d - alpha) on [0, L]^d.

namespace fraclap {

enum class WeightProvenance { Analytic, Quadrature };

struct WeightTable1D {
  int p = 0;
  int n = 0;  // number of xi-intervals; values has n + 1 entries
  double h = 0.0;
  std::vector<double> values;
  double sigma0 = 0.0, sigma1 = 0.0, sigma2 = 0.0;
  WeightProvenance provenance = WeightProvenance::Analytic;
  double tol = 0.0;  // only meaningful for Quadrature

  double operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
};

struct WeightTable2D {
  int p = 0;
  int n = 0;
  double h = 0.0;
  double tol = 0.0;
  std::vector<double> values;  // row-major (n + 1) x (n + 1)

  double at(int k, int l) const {
    return values[static_cast<std::size_t>(k) * (n + 1) + static_cast<std::size_t>(l)];
  }
};

/// Closed-form 1D weights for the power kernel. Evaluated in 113-bit
/// arithmetic: the differences of powers lose up to n^3 ulps in double.
/// p = 2 requires even n >= 4.
WeightTable1D weights_1d_analytic(int p, double alpha, double gamma, int n, double h);

/// Element-wise Gauss-Legendre (order 16) for any radial kernel. The element
/// touching xi = 0 is integrated by its exact moment series instead.
WeightTable1D weights_1d_quadrature(const KernelSpec& spec, int p, int n, double h, double tol);

/// Tensor Gauss-Legendre on every element except the one at the origin, which
/// uses polar moments. Result is symmetrized.
WeightTable2D weights_2d_quadrature(const KernelSpec& spec, int p, int n, double h, double tol);

/// Process-wide memoization keyed by (spec, p, n, h, tol). 1D power kernels
/// use the closed form, everything else quadrature.
std::shared_ptr<const WeightTable1D> cached_weights_1d(const KernelSpec& spec, int p, int n,
                                                       double h, double tol = 1e-13);
std::shared_ptr<const WeightTable2D> cached_weights_2d(const KernelSpec& spec, int p, int n,
                                                       double h, double tol = 1e-13);
void clear_weight_cache();

// Binary cache file: little-endian header d, p (u64), alpha, gamma, lambda
// (f64), n (u64), h (f64), then the raw f64 values.
struct WeightFileHeader {
  std::uint64_t d = 1;
  std::uint64_t p = 0;
  double alpha = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  std::uint64_t n = 0;
  double h = 0.0;
};

void write_weight_file(const std::filesystem::path& path, const WeightFileHeader& header,
                       const std::vector<double>& values);
/// Throws ErrorCode::Io on short reads or a value count that disagrees with d and n.
std::vector<double> read_weight_file(const std::filesystem::path& path, WeightFileHeader& header);

void save_weights(const std::filesystem::path& path, const KernelSpec& spec,
                  const WeightTable1D& w);
void save_weights(const std::filesystem::path& path, const KernelSpec& spec,
                  const WeightTable2D& w);

}  // namespace fraclap
