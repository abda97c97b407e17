#pragma once

// Special functions needed by the normalization constant and by the exact
// solutions / manufactured right-hand sides of the benchmark catalog.

namespace fraclap::specfun {

struct SpecFunResult {
  double value = 0.0;
  double est_error = 0.0;  // absolute error estimate
};

/// Maximum number of series terms before a Divergence error is raised.
inline constexpr int kSeriesTermCap = 10000;

/// Gamma function. Throws ErrorCode::Pole at 0, -1, -2, ...
double gamma(double x);

/// 1/Gamma(x); zero at the poles of Gamma.
double rgamma(double x);

/// Digamma function psi(x) = Gamma'(x)/Gamma(x). Throws at the poles.
double digamma(double x);

/// Gauss hypergeometric function 2F1(a, b; c; z) for real z in [-1, 1).
///
/// Power series for |z| <= 1/2, Pfaff transformation for z < -1/2 and the
/// (1 - z) connection formulas for z > 1/2, including the logarithmic case
/// when c - a - b is an integer.
SpecFunResult gauss_2f1(double a, double b, double c, double z);

/// Confluent hypergeometric function 1F1(a; b; z). Negative arguments are
/// evaluated through Kummer's transformation 1F1(a;b;z) = e^z 1F1(b-a;b;-z).
SpecFunResult kummer_1f1(double a, double b, double z);

/// c_{d,alpha} = 2^(alpha-1) alpha Gamma((d+alpha)/2) / (pi^(d/2) Gamma(1-alpha/2)).
double normalization_constant(int d, double alpha);

}  // namespace fraclap::specfun
