#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fraclap/error.hpp"

// Gauss-Legendre building blocks shared by the weight, boundary and bench
// modules.

namespace fraclap::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order (1..128), computed once and cached.
const Rule& gauss_legendre(int order);

template <class F>
double gl(const F& f, double a, double b, const Rule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * s;
}

template <class F>
double gl2(const F& f, double ax, double bx, double ay, double by, const Rule& rule) {
  const double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
  const double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
  const std::size_t n = rule.nodes.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = mx + hx * rule.nodes[i];
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += rule.weights[j] * f(x, my + hy * rule.nodes[j]);
    s += rule.weights[i] * row;
  }
  return hx * hy * s;
}

namespace detail {

template <class F>
double adaptive_step(const F& f, double a, double b, double whole, double tol, int depth,
                     const Rule& rule) {
  const double m = 0.5 * (a + b);
  const double left = gl(f, a, m, rule);
  const double right = gl(f, m, b, rule);
  const double refined = left + right;
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(refined);
  if (std::abs(refined - whole) <= std::max(tol, floor)) return refined;
  if (depth == 0) {
    throw Error(ErrorCode::ToleranceNotMet, "adaptive Gauss-Legendre refinement cap reached");
  }
  return adaptive_step(f, a, m, left, 0.5 * tol, depth - 1, rule) +
         adaptive_step(f, m, b, right, 0.5 * tol, depth - 1, rule);
}

template <class F>
double adaptive2_step(const F& f, double ax, double bx, double ay, double by, double whole,
                      double tol, int depth, const Rule& rule) {
  const double mx = 0.5 * (ax + bx), my = 0.5 * (ay + by);
  const double q[4] = {gl2(f, ax, mx, ay, my, rule), gl2(f, mx, bx, ay, my, rule),
                       gl2(f, ax, mx, my, by, rule), gl2(f, mx, bx, my, by, rule)};
  const double refined = q[0] + q[1] + q[2] + q[3];
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(refined);
  if (std::abs(refined - whole) <= std::max(tol, floor)) return refined;
  if (depth == 0) {
    throw Error(ErrorCode::ToleranceNotMet, "adaptive tensor Gauss-Legendre refinement cap reached");
  }
  const double t = 0.25 * tol;
  return adaptive2_step(f, ax, mx, ay, my, q[0], t, depth - 1, rule) +
         adaptive2_step(f, mx, bx, ay, my, q[1], t, depth - 1, rule) +
         adaptive2_step(f, ax, mx, my, by, q[2], t, depth - 1, rule) +
         adaptive2_step(f, mx, bx, my, by, q[3], t, depth - 1, rule);
}

}  // namespace detail

/// Globally adaptive bisection with a fixed-order rule on each panel. The
/// absolute tolerance is split between children; the refinement cap is
/// max_depth bisection levels.
template <class F>
double adaptive(const F& f, double a, double b, double tol, int order = 16, int max_depth = 60) {
  const Rule& rule = gauss_legendre(order);
  return detail::adaptive_step(f, a, b, gl(f, a, b, rule), tol, max_depth, rule);
}

/// Quadtree-adaptive tensor rule on a rectangle.
template <class F>
double adaptive_2d(const F& f, double ax, double bx, double ay, double by, double tol,
                   int order = 8, int max_depth = 30) {
  const Rule& rule = gauss_legendre(order);
  return detail::adaptive2_step(f, ax, bx, ay, by, gl2(f, ax, bx, ay, by, rule), tol, max_depth,
                                rule);
}

}  // namespace fraclap::quad
