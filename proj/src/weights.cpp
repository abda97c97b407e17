#include "fraclap/weights.hpp"

#include <quadmath.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "fraclap/error.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {
namespace {

using q128 = __float128;

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_degree(int p, int n) {
  if (p < 0 || p > 2) throw Error(ErrorCode::Domain, "basis degree must be 0, 1 or 2");
  if (n < 2) throw Error(ErrorCode::Domain, "weight tables need at least 2 intervals");
  if (p == 2 && (n < 4 || n % 2 != 0)) {
    throw Error(ErrorCode::Domain, "quadratic basis needs an even number of intervals >= 4");
  }
}

// Local Lagrange shapes on tau in [0, 1] as monomial coefficients.
struct ShapeSet {
  int count;
  double c[3][3];  // c[shape][power]
};

const ShapeSet& shapes(int p) {
  static const ShapeSet s0{1, {{1, 0, 0}}};
  static const ShapeSet s1{2, {{1, -1, 0}, {0, 1, 0}}};
  static const ShapeSet s2{3, {{1, -3, 2}, {0, 4, -4}, {0, -1, 2}}};
  return p == 0 ? s0 : (p == 1 ? s1 : s2);
}

double eval_shape(const ShapeSet& s, int i, double t) {
  return s.c[i][0] + t * (s.c[i][1] + t * s.c[i][2]);
}

struct Element {
  double a, b;
  int first;  // global index of local shape 0
};

std::vector<Element> elements(int p, int n, double h) {
  std::vector<Element> e;
  if (p == 0) {
    e.push_back({0.0, 0.5 * h, 0});
    for (int k = 1; k < n; ++k) e.push_back({(k - 0.5) * h, (k + 0.5) * h, k});
    e.push_back({(n - 0.5) * h, n * h, n});
  } else if (p == 1) {
    for (int m = 0; m < n; ++m) e.push_back({m * h, (m + 1) * h, m});
  } else {
    for (int m = 0; m < n; m += 2) e.push_back({m * h, (m + 2) * h, m});
  }
  return e;
}

// int_0^R r^q exp(-mu r) dr for q > -1.
double radial_moment(double q, double r_max, double mu, double tol) {
  if (mu == 0.0) return std::pow(r_max, q + 1.0) / (q + 1.0);
  // The alternating series loses about exp(mu R) to cancellation; cap mu R.
  const double r0 = std::min(r_max, 1.0 / mu);
  double sum = 0.0;
  double coef = 1.0;  // (-mu)^i / i!
  int i = 0;
  for (; i < specfun::kSeriesTermCap; ++i) {
    const double term = coef * std::pow(r0, q + 1.0 + i) / (q + 1.0 + i);
    sum += term;
    if (std::abs(term) <= 0.25 * kEps * std::abs(sum)) break;
    coef *= -mu / (i + 1.0);
  }
  if (i == specfun::kSeriesTermCap) {
    throw Error(ErrorCode::Divergence, "radial moment series did not converge");
  }
  if (r0 < r_max) {
    const auto f = [q, mu](double r) { return std::pow(r, q) * std::exp(-mu * r); };
    sum += quad::adaptive(f, r0, r_max, tol * std::max(1.0, std::abs(sum)));
  }
  return sum;
}

// ---- 1D -------------------------------------------------------------------

q128 qpow(q128 x, q128 s) { return x == 0 ? q128(0) : powq(x, s); }

}  // namespace

WeightTable1D weights_1d_analytic(int p, double alpha, double gamma, int n, double h) {
  if (!(gamma > alpha)) {
    throw Error(ErrorCode::Domain, "closed-form weights need gamma > alpha");
  }
  if (!(h > 0.0)) throw Error(ErrorCode::Domain, "mesh size must be positive");
  check_degree(p, n);

  WeightTable1D w;
  w.p = p;
  w.n = n;
  w.h = h;
  w.sigma0 = gamma - alpha;
  w.sigma1 = w.sigma0 + 1.0;
  w.sigma2 = w.sigma0 + 2.0;
  w.provenance = WeightProvenance::Analytic;
  w.values.resize(static_cast<std::size_t>(n) + 1);

  const q128 hq = h;
  const q128 s0 = q128(gamma) - q128(alpha);
  const q128 s1 = s0 + 1;
  const q128 s2 = s0 + 2;
  const auto x = [&](q128 j) { return j * hq; };  // xi_j
  const auto P = [&](q128 j, q128 s) { return qpow(x(j), s); };

  for (int k = 0; k <= n; ++k) {
    const q128 K = k;
    const q128 N = n;
    q128 v = 0;
    if (p == 0) {
      if (k == 0) {
        v = P(q128(0.5), s0);
      } else if (k == n) {
        v = P(N, s0) - P(N - q128(0.5), s0);
      } else {
        v = P(K + q128(0.5), s0) - P(K - q128(0.5), s0);
      }
      v /= s0;
    } else if (p == 1) {
      if (k == 0) {
        v = qpow(hq, s1);
      } else if (k == n) {
        v = P(N - 1, s1) - P(N, s1) + s1 * hq * P(N, s0);
      } else {
        v = P(K + 1, s1) + P(K - 1, s1) - 2 * P(K, s1);
      }
      v /= hq * s1 * s0;
    } else {
      if (k == 0) {
        v = P(2, s2) / s2 - x(3) * P(2, s1) / s1 + 2 * hq * hq * P(2, s0) / s0;
      } else if (k == n) {
        v = (P(N, s2) - P(N - 2, s2)) / s2 -
            2 * x(N - q128(1.5)) * (P(N, s1) - P(N - 2, s1)) / s1 +
            x(N - 1) * x(N - 2) * (P(N, s0) - P(N - 2, s0)) / s0;
      } else if (k % 2 == 1) {
        v = -2 * (P(K + 1, s2) - P(K - 1, s2)) / s2 +
            4 * x(K) * (P(K + 1, s1) - P(K - 1, s1)) / s1 -
            2 * x(K + 1) * x(K - 1) * (P(K + 1, s0) - P(K - 1, s0)) / s0;
      } else {
        // Left element [xi_{k-2}, xi_k] and right element [xi_k, xi_{k+2}];
        // the linear coefficients are the node sums 2 xi_{k-3/2} and 2 xi_{k+3/2}.
        v = (P(K + 2, s2) - P(K - 2, s2)) / s2 -
            2 / s1 * (x(K - q128(1.5)) * (P(K, s1) - P(K - 2, s1)) +
                      x(K + q128(1.5)) * (P(K + 2, s1) - P(K, s1))) +
            1 / s0 * (x(K - 2) * x(K - 1) * (P(K, s0) - P(K - 2, s0)) +
                      x(K + 2) * x(K + 1) * (P(K + 2, s0) - P(K, s0)));
      }
      v /= 2 * hq * hq;
    }
    w.values[static_cast<std::size_t>(k)] = static_cast<double>(v);
  }
  return w;
}

WeightTable1D weights_1d_quadrature(const KernelSpec& spec, int p, int n, double h, double tol) {
  spec.validate();
  if (spec.dim != 1) throw Error(ErrorCode::Domain, "1D weights need a 1D kernel");
  if (!(h > 0.0) || !(tol > 0.0)) {
    throw Error(ErrorCode::Domain, "mesh size and tolerance must be positive");
  }
  check_degree(p, n);

  WeightTable1D w;
  w.p = p;
  w.n = n;
  w.h = h;
  w.sigma0 = spec.gamma - spec.alpha;
  w.sigma1 = w.sigma0 + 1.0;
  w.sigma2 = w.sigma0 + 2.0;
  w.provenance = WeightProvenance::Quadrature;
  w.tol = tol;
  w.values.assign(static_cast<std::size_t>(n) + 1, 0.0);

  const double e = w.sigma0 - 1.0;
  const double lambda = spec.untempered() ? 0.0 : spec.lambda;
  const ShapeSet& sh = shapes(p);
  const auto elems = elements(p, n, h);
  const quad::Rule& g16 = quad::gauss_legendre(16);
  const quad::Rule& g24 = quad::gauss_legendre(24);

  std::vector<std::array<double, 3>> local(elems.size());
  parallel_for(elems.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t ei = lo; ei < hi; ++ei) {
      const Element& el = elems[ei];
      const double len = el.b - el.a;
      for (int s = 0; s < sh.count; ++s) {
        double v = 0.0;
        if (el.a == 0.0) {
          // xi = len * tau: len^sigma0 sum_j c_j int_0^1 tau^(sigma0-1+j) e^(-lambda len tau)
          for (int j = 0; j < 3; ++j) {
            if (sh.c[s][j] != 0.0) v += sh.c[s][j] * radial_moment(e + j, 1.0, lambda * len, tol);
          }
          v *= std::pow(len, w.sigma0);
        } else {
          const auto f = [&](double xi) {
            return eval_shape(sh, s, (xi - el.a) / len) * spec.radial(xi) * std::pow(xi, e);
          };
          v = quad::gl(f, el.a, el.b, g16);
          // Only elements within a few widths of the singular point can be under-resolved.
          if (el.a < 8.0 * len) {
            const double check = quad::gl(f, el.a, el.b, g24);
            if (std::abs(check - v) > tol * std::max(1.0, std::abs(v))) {
              throw Error(ErrorCode::ToleranceNotMet, "1D weight element quadrature");
            }
          }
        }
        local[ei][static_cast<std::size_t>(s)] = v;
      }
    }
  });
  for (std::size_t ei = 0; ei < elems.size(); ++ei) {
    for (int s = 0; s < sh.count; ++s) {
      w.values[static_cast<std::size_t>(elems[ei].first + s)] += local[ei][static_cast<std::size_t>(s)];
    }
  }
  return w;
}

namespace {

// M[m][n] = int_{[0,1]^2} t1^m t2^n |t|^beta exp(-mu |t|) dt, m, n <= 2.
std::array<std::array<double, 3>, 3> origin_moments(double beta, double mu, double tol) {
  std::array<std::array<double, 3>, 3> M{};
  for (int m = 0; m < 3; ++m) {
    for (int nn = m; nn < 3; ++nn) {
      const double q = m + nn + beta + 1.0;
      // Below the diagonal the ray leaves through t1 = 1, above it through t2 = 1.
      const auto lower = [&](double th) {
        return std::pow(std::cos(th), m) * std::pow(std::sin(th), nn) *
               radial_moment(q, 1.0 / std::cos(th), mu, tol);
      };
      const auto upper = [&](double th) {
        return std::pow(std::cos(th), m) * std::pow(std::sin(th), nn) *
               radial_moment(q, 1.0 / std::sin(th), mu, tol);
      };
      const double quarter = 0.25 * std::numbers::pi;
      const double v = quad::adaptive(lower, 0.0, quarter, 1e-3 * tol) +
                       quad::adaptive(upper, quarter, 2.0 * quarter, 1e-3 * tol);
      M[static_cast<std::size_t>(m)][static_cast<std::size_t>(nn)] = v;
      M[static_cast<std::size_t>(nn)][static_cast<std::size_t>(m)] = v;
    }
  }
  return M;
}

}  // namespace

WeightTable2D weights_2d_quadrature(const KernelSpec& spec, int p, int n, double h, double tol) {
  spec.validate();
  if (spec.dim != 2) throw Error(ErrorCode::Domain, "2D weights need a 2D kernel");
  if (!(h > 0.0) || !(tol > 0.0)) {
    throw Error(ErrorCode::Domain, "mesh size and tolerance must be positive");
  }
  check_degree(p, n);

  WeightTable2D w;
  w.p = p;
  w.n = n;
  w.h = h;
  w.tol = tol;
  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  w.values.assign(stride * stride, 0.0);

  const double beta = spec.gamma - 2.0 - spec.alpha;
  const double lambda = spec.untempered() ? 0.0 : spec.lambda;
  const ShapeSet& sh = shapes(p);
  const auto elems = elements(p, n, h);
  const std::size_t ne = elems.size();
  const quad::Rule& g16 = quad::gauss_legendre(16);
  const std::size_t nq = g16.nodes.size();

  // Shape values at the quadrature nodes are the same on every element.
  std::vector<double> shape_at(3 * nq);
  for (int s = 0; s < sh.count; ++s) {
    for (std::size_t q = 0; q < nq; ++q) {
      shape_at[static_cast<std::size_t>(s) * nq + q] = eval_shape(sh, s, 0.5 * (g16.nodes[q] + 1.0));
    }
  }

  // local[(e1 * ne + e2) * 9 + 3 * s1 + s2]
  std::vector<double> local(ne * ne * 9, 0.0);
  parallel_for(ne, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> xs(nq), ys(nq), wx(nq), wy(nq), kern(nq * nq);
    for (std::size_t e1 = lo; e1 < hi; ++e1) {
      const Element& a = elems[e1];
      const double hx = 0.5 * (a.b - a.a);
      for (std::size_t q = 0; q < nq; ++q) {
        xs[q] = a.a + hx * (g16.nodes[q] + 1.0);
        wx[q] = hx * g16.weights[q];
      }
      for (std::size_t e2 = 0; e2 < ne; ++e2) {
        const Element& b = elems[e2];
        double* out = &local[(e1 * ne + e2) * 9];
        if (a.a == 0.0 && b.a == 0.0) continue;  // origin element, below
        const double hy = 0.5 * (b.b - b.a);
        for (std::size_t q = 0; q < nq; ++q) {
          ys[q] = b.a + hy * (g16.nodes[q] + 1.0);
          wy[q] = hy * g16.weights[q];
        }
        for (std::size_t i = 0; i < nq; ++i) {
          for (std::size_t j = 0; j < nq; ++j) {
            const double r = std::hypot(xs[i], ys[j]);
            kern[i * nq + j] = wx[i] * wy[j] * std::pow(r, beta) * spec.radial(r);
          }
        }
        for (int s1 = 0; s1 < sh.count; ++s1) {
          for (int s2 = 0; s2 < sh.count; ++s2) {
            double acc = 0.0;
            for (std::size_t i = 0; i < nq; ++i) {
              double row = 0.0;
              for (std::size_t j = 0; j < nq; ++j) {
                row += kern[i * nq + j] * shape_at[static_cast<std::size_t>(s2) * nq + j];
              }
              acc += row * shape_at[static_cast<std::size_t>(s1) * nq + i];
            }
            out[3 * s1 + s2] = acc;
          }
        }
      }
    }
  });

  {
    const double c = elems[0].b;  // origin element is [0, c]^2
    const auto M = origin_moments(beta, lambda * c, tol);
    const double scale = std::pow(c, beta + 2.0);
    double* out = &local[0];
    for (int s1 = 0; s1 < sh.count; ++s1) {
      for (int s2 = 0; s2 < sh.count; ++s2) {
        double v = 0.0;
        for (int j = 0; j < 3; ++j) {
          for (int k = 0; k < 3; ++k) v += sh.c[s1][j] * sh.c[s2][k] * M[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        }
        out[3 * s1 + s2] = scale * v;
      }
    }
  }

  for (std::size_t e1 = 0; e1 < ne; ++e1) {
    for (std::size_t e2 = 0; e2 < ne; ++e2) {
      const double* in = &local[(e1 * ne + e2) * 9];
      for (int s1 = 0; s1 < sh.count; ++s1) {
        for (int s2 = 0; s2 < sh.count; ++s2) {
          const auto k = static_cast<std::size_t>(elems[e1].first + s1);
          const auto l = static_cast<std::size_t>(elems[e2].first + s2);
          w.values[k * stride + l] += in[3 * s1 + s2];
        }
      }
    }
  }
  for (std::size_t k = 0; k < stride; ++k) {
    for (std::size_t l = k + 1; l < stride; ++l) {
      const double avg = 0.5 * (w.values[k * stride + l] + w.values[l * stride + k]);
      w.values[k * stride + l] = avg;
      w.values[l * stride + k] = avg;
    }
  }
  return w;
}

// ---- cache ------------------------------------------------------------------

namespace {

using CacheKey = std::tuple<int, int, double, double, double, int, int, double, double>;

CacheKey make_key(const KernelSpec& s, int p, int n, double h, double tol) {
  const double lambda = s.untempered() ? 0.0 : s.lambda;
  return {s.dim, s.untempered() ? 0 : 1, s.alpha, s.gamma, lambda, p, n, h, tol};
}

template <class Table>
struct Cache {
  std::mutex mu;
  std::map<CacheKey, std::shared_future<std::shared_ptr<const Table>>> entries;

  template <class Make>
  std::shared_ptr<const Table> get(const CacheKey& key, Make make) {
    std::promise<std::shared_ptr<const Table>> promise;
    std::shared_future<std::shared_ptr<const Table>> fut;
    bool owner = false;
    {
      std::lock_guard lock(mu);
      auto it = entries.find(key);
      if (it != entries.end()) {
        fut = it->second;
      } else {
        fut = promise.get_future().share();
        entries.emplace(key, fut);
        owner = true;
      }
    }
    if (!owner) return fut.get();
    try {
      promise.set_value(std::make_shared<const Table>(make()));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard lock(mu);
      entries.erase(key);
    }
    return fut.get();
  }

  void clear() {
    std::lock_guard lock(mu);
    entries.clear();
  }
};

Cache<WeightTable1D>& cache1() {
  static Cache<WeightTable1D> c;
  return c;
}
Cache<WeightTable2D>& cache2() {
  static Cache<WeightTable2D> c;
  return c;
}

}  // namespace

std::shared_ptr<const WeightTable1D> cached_weights_1d(const KernelSpec& spec, int p, int n,
                                                       double h, double tol) {
  return cache1().get(make_key(spec, p, n, h, tol), [&] {
    if (spec.untempered()) return weights_1d_analytic(p, spec.alpha, spec.gamma, n, h);
    return weights_1d_quadrature(spec, p, n, h, tol);
  });
}

std::shared_ptr<const WeightTable2D> cached_weights_2d(const KernelSpec& spec, int p, int n,
                                                       double h, double tol) {
  return cache2().get(make_key(spec, p, n, h, tol),
                      [&] { return weights_2d_quadrature(spec, p, n, h, tol); });
}

void clear_weight_cache() {
  cache1().clear();
  cache2().clear();
}

// ---- binary file ------------------------------------------------------------

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

void put_u64(std::ostream& os, std::uint64_t v) {
  v = to_le(v);
  char buf[8];
  std::memcpy(buf, &v, 8);
  os.write(buf, 8);
}
void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& is) {
  char buf[8];
  if (!is.read(buf, 8)) throw Error(ErrorCode::Io, "truncated weight file");
  std::uint64_t v;
  std::memcpy(&v, buf, 8);
  return to_le(v);
}
double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

std::size_t expected_count(std::uint64_t d, std::uint64_t n) {
  return d == 1 ? static_cast<std::size_t>(n + 1) : static_cast<std::size_t>((n + 1) * (n + 1));
}

}  // namespace

void write_weight_file(const std::filesystem::path& path, const WeightFileHeader& hd,
                       const std::vector<double>& values) {
  if ((hd.d != 1 && hd.d != 2) || values.size() != expected_count(hd.d, hd.n)) {
    throw Error(ErrorCode::Io, "weight file header disagrees with the value count");
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  put_u64(os, hd.d);
  put_u64(os, hd.p);
  put_f64(os, hd.alpha);
  put_f64(os, hd.gamma);
  put_f64(os, hd.lambda);
  put_u64(os, hd.n);
  put_f64(os, hd.h);
  for (double v : values) put_f64(os, v);
  if (!os) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::vector<double> read_weight_file(const std::filesystem::path& path, WeightFileHeader& hd) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
  hd.d = get_u64(is);
  hd.p = get_u64(is);
  hd.alpha = get_f64(is);
  hd.gamma = get_f64(is);
  hd.lambda = get_f64(is);
  hd.n = get_u64(is);
  hd.h = get_f64(is);
  if ((hd.d != 1 && hd.d != 2) || hd.n > (1u << 20)) {
    throw Error(ErrorCode::Io, "malformed weight file header in " + path.string());
  }
  std::vector<double> values(expected_count(hd.d, hd.n));
  for (double& v : values) v = get_f64(is);
  if (is.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::Io, "trailing bytes in " + path.string());
  }
  return values;
}

void save_weights(const std::filesystem::path& path, const KernelSpec& spec,
                  const WeightTable1D& w) {
  write_weight_file(path,
                    {1, static_cast<std::uint64_t>(w.p), spec.alpha, spec.gamma,
                     spec.untempered() ? 0.0 : spec.lambda, static_cast<std::uint64_t>(w.n), w.h},
                    w.values);
}

void save_weights(const std::filesystem::path& path, const KernelSpec& spec,
                  const WeightTable2D& w) {
  write_weight_file(path,
                    {2, static_cast<std::uint64_t>(w.p), spec.alpha, spec.gamma,
                     spec.untempered() ? 0.0 : spec.lambda, static_cast<std::uint64_t>(w.n), w.h},
                    w.values);
}

}  // namespace fraclap
