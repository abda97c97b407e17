#include "fraclap/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fraclap/error.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap::bench {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double compact_u(double s, double x) {
  const double q = 1.0 - x * x;
  return q > 0.0 ? std::pow(q, s) : 0.0;
}

// Index of the interior node at x, or -1.
long probe_index(const Grid& grid, const Point& x) {
  long idx = 0;
  long stride = 1;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const double t = (x[axis] - grid.lower()[axis]) / grid.h();
    const long i = std::lround(t);
    if (std::abs(t - static_cast<double>(i)) > 1e-9 || i < 1 || i > grid.interior(axis)) return -1;
    idx += (i - 1) * stride;
    stride *= grid.interior(axis);
  }
  return idx;
}

std::vector<double> probe_errors(const Grid& grid, std::span<const double> pointwise,
                                 const std::vector<Point>& probes) {
  std::vector<double> out;
  out.reserve(probes.size());
  for (const auto& x : probes) {
    const long idx = probe_index(grid, x);
    out.push_back(idx < 0 ? std::numeric_limits<double>::quiet_NaN()
                          : std::abs(pointwise[static_cast<std::size_t>(idx)]));
  }
  return out;
}

// int_0^m y^(e-1) exp(-lambda y) dy for lambda m <= 1.
double lower_moment(double e, double lambda, double m) {
  double term = std::pow(m, e);  // (-lambda m)^j / j! * m^e
  double sum = term / e;
  for (int j = 1; j < specfun::kSeriesTermCap; ++j) {
    term *= -lambda * m / j;
    const double add = term / (e + j);
    sum += add;
    if (std::abs(add) <= 1e-17 * std::abs(sum)) return sum;
  }
  throw Error(ErrorCode::Divergence, "tempered moment series did not converge");
}

template <class Fn>
std::vector<ConvergenceRow> sweep(const std::vector<double>& h_list, Fn&& job) {
  std::vector<ConvergenceRow> rows(h_list.size());
  parallel_for(h_list.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) rows[k] = job(h_list[k]);
  });
  fill_rates(rows);
  return rows;
}

}  // namespace

KernelSpec TestCase::spec(double gamma) const {
  if (name == "tempered") return KernelSpec::tempered(dim, alpha, lambda, gamma);
  return KernelSpec::power(dim, alpha, gamma);
}

Grid TestCase::grid(double h) const {
  const double side = upper[0] - lower[0];
  if (!(h > 0.0)) throw Error(ErrorCode::Domain, "mesh size must be positive");
  const long cells = std::lround(side / h);
  if (cells < 2 || std::abs(static_cast<double>(cells) * h - side) > 1e-9 * side) {
    std::ostringstream os;
    os << "h = " << h << " does not divide the domain side " << side;
    throw Error(ErrorCode::Domain, os.str());
  }
  if (dim == 1) return Grid::interval(lower[0], upper[0], static_cast<int>(cells));
  return Grid::rectangle(lower, upper, static_cast<int>(cells));
}

double runge_operator(double alpha, double x) {
  return std::tgamma(1.0 + alpha) * std::cos((1.0 + alpha) * std::atan(x)) /
         std::pow(1.0 + x * x, 0.5 * (1.0 + alpha));
}

double compact_operator(double alpha, double s, double x) {
  if (!(std::abs(x) < 1.0)) throw Error(ErrorCode::Domain, "compact case is evaluated on |x| < 1");
  if (!(s > 0.0)) throw Error(ErrorCode::Domain, "compact case needs s > 0");
  const double c = std::pow(2.0, alpha) * specfun::gamma(0.5 * (alpha + 1.0)) *
                   specfun::gamma(s + 1.0) * specfun::rgamma(s + 1.0 - 0.5 * alpha) /
                   std::sqrt(std::numbers::pi);
  return c * specfun::gauss_2f1(0.5 * (alpha + 1.0), -s + 0.5 * alpha, 0.5, x * x).value;
}

double tempered_operator(double alpha, double lambda, double c, double x, double tol) {
  if (!(std::abs(x) < 1.0)) throw Error(ErrorCode::Domain, "tempered case is evaluated on |x| < 1");
  if (!(alpha > 0.0 && alpha < 2.0) || !(lambda >= 0.0)) {
    throw Error(ErrorCode::Domain, "tempered oracle needs alpha in (0, 2) and lambda >= 0");
  }
  const auto u = [](double t) { return compact_u(2.0, t); };
  const double ax = std::abs(x);
  const double ux = u(ax);
  const double r1 = 1.0 - ax, r2 = 1.0 + ax;
  const auto weight = [&](double y) { return std::exp(-lambda * y) * std::pow(y, -1.0 - alpha); };

  // Both x +- y inside: the second difference is (12x^2 - 4) y^2 + 2 y^4.
  const double A = 12.0 * x * x - 4.0;
  const double m = lambda > 0.0 ? std::min(r1, 1.0 / lambda) : r1;
  const double near = A * lower_moment(2.0 - alpha, lambda, m) + 2.0 * lower_moment(4.0 - alpha, lambda, m);
  double tail = std::pow(r2, -alpha) / alpha;
  if (lambda > 0.0) {
    const auto f = [&](double t) {
      return t == 0.0 ? 0.0 : std::exp(-lambda * r2 * std::pow(t, -1.0 / alpha));
    };
    tail *= quad::adaptive(f, 0.0, 1.0, tol);
  }
  tail *= -2.0 * ux;
  const double abs_tol = tol * std::max({1.0, std::abs(near), std::abs(tail)});

  double mid = 0.0;
  if (m < r1) {
    const auto f = [&](double y) { return (A * y * y + 2.0 * y * y * y * y) * weight(y); };
    mid += quad::adaptive(f, m, r1, abs_tol);
  }
  if (r1 < r2) {
    const auto f = [&](double y) { return (u(ax - y) - 2.0 * ux) * weight(y); };
    mid += quad::adaptive(f, r1, r2, abs_tol);
  }
  return -c * (near + mid + tail);
}

TestCase runge(double alpha) {
  TestCase tc;
  tc.name = "runge";
  tc.alpha = alpha;
  tc.u_exact = FieldFn::of_1d([](double x) { return 1.0 / (1.0 + x * x); });
  tc.g = tc.u_exact;
  tc.exact_operator = FieldFn::of_1d([alpha](double x) { return runge_operator(alpha, x); },
                                     FieldFn::Support::Everywhere);
  tc.f = tc.exact_operator;
  tc.notes = "u = 1/(1+x^2) on R; operator Gamma(1+a) cos((1+a) atan x) / (1+x^2)^((1+a)/2)";
  return tc;
}

TestCase compact(double alpha, double s) {
  TestCase tc;
  tc.name = "compact";
  tc.alpha = alpha;
  tc.u_exact = FieldFn::of_1d([s](double x) { return compact_u(s, x); });
  tc.g = FieldFn::zero();
  tc.exact_operator = FieldFn::of_1d([alpha, s](double x) { return compact_operator(alpha, s, x); },
                                     FieldFn::Support::Interior);
  tc.f = tc.exact_operator;
  std::ostringstream os;
  os << "u = (1-x^2)_+^" << s << "; operator via 2F1";
  tc.notes = os.str();
  return tc;
}

TestCase benchmark(double alpha) {
  TestCase tc;
  tc.name = "benchmark";
  tc.alpha = alpha;
  const double scale = 1.0 / specfun::gamma(1.0 + alpha);
  tc.u_exact = FieldFn::of_1d([alpha, scale](double x) { return scale * compact_u(0.5 * alpha, x); });
  tc.g = FieldFn::zero();
  tc.f = FieldFn::constant(1.0);
  tc.exact_operator = tc.f;
  tc.notes = "f = 1, g = 0; u = (1-x^2)_+^(a/2) / Gamma(1+a), positive";
  return tc;
}

TestCase gaussian_2d(double alpha) {
  TestCase tc;
  tc.name = "gauss2d";
  tc.dim = 2;
  tc.alpha = alpha;
  tc.u_exact = FieldFn([](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); },
                       FieldFn::Support::Everywhere);
  tc.g = tc.u_exact;
  const double c = std::pow(2.0, alpha) * specfun::gamma(1.0 + 0.5 * alpha);
  tc.exact_operator = FieldFn(
      [alpha, c](const Point& x) {
        return c * specfun::kummer_1f1(1.0 + 0.5 * alpha, 1.0, -(x[0] * x[0] + x[1] * x[1])).value;
      },
      FieldFn::Support::Everywhere);
  tc.f = tc.exact_operator;
  tc.notes = "u = exp(-|x|^2); operator 2^a Gamma(1+a/2) 1F1(1+a/2; 1; -|x|^2)";
  return tc;
}

TestCase tempered(double alpha, double lambda) {
  TestCase tc;
  tc.name = "tempered";
  tc.alpha = alpha;
  tc.lambda = lambda;
  tc.u_exact = FieldFn::of_1d([](double x) { return compact_u(2.0, x); });
  tc.g = FieldFn::zero();
  const double c = tc.spec().c;
  tc.exact_operator = FieldFn::of_1d(
      [alpha, lambda, c](double x) { return tempered_operator(alpha, lambda, c, x); },
      FieldFn::Support::Interior);
  tc.f = tc.exact_operator;
  tc.notes = "u = (1-x^2)_+^2, kernel exp(-lambda r); f by quadrature";
  return tc;
}

TestCase make_case(const std::string& name, double alpha, double s, double lambda) {
  if (name == "runge") return runge(alpha);
  if (name == "compact") return compact(alpha, s);
  if (name == "benchmark") return benchmark(alpha);
  if (name == "gauss2d") return gaussian_2d(alpha);
  if (name == "tempered") return tempered(alpha, lambda);
  throw Error(ErrorCode::Domain, "unknown case '" + name +
                                     "' (runge, compact, benchmark, gauss2d, tempered)");
}

double convergence_rate(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

void fill_rates(std::vector<ConvergenceRow>& rows) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].rate = k == 0 ? std::numeric_limits<double>::quiet_NaN()
                          : convergence_rate(rows[k - 1].error_inf, rows[k].error_inf);
  }
}

std::vector<ConvergenceRow> operator_error_study(const TestCase& tc, int p, double gamma,
                                                 const std::vector<double>& h_list,
                                                 const std::vector<Point>& probes,
                                                 OriginFold fold) {
  if (!tc.exact_operator) throw Error(ErrorCode::Domain, "case '" + tc.name + "' has no exact operator");
  if (!tc.u_exact) throw Error(ErrorCode::Domain, "case '" + tc.name + "' has no exact solution");
  const KernelSpec spec = tc.spec(gamma);
  spec.validate();
  return sweep(h_list, [&](double h) {
    const auto t0 = Clock::now();
    const Grid grid = tc.grid(h);
    const auto v = apply_operator(spec, grid, p, tc.u_exact, tc.g, fold);
    std::vector<double> e(v.size());
    parallel_for(v.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) e[i] = v[i] - tc.exact_operator(grid.interior_point(i));
    });
    ConvergenceRow row;
    row.h = h;
    for (double x : e) row.error_inf = std::max(row.error_inf, std::abs(x));
    row.probe_errors = probe_errors(grid, e, probes);
    row.runtime_s = seconds_since(t0);
    return row;
  });
}

PoissonRun solve_case(const TestCase& tc, int p, double gamma, double h, double cg_tol,
                      OriginFold fold) {
  if (!tc.u_exact) throw Error(ErrorCode::Domain, "case '" + tc.name + "' has no exact solution");
  PoissonProblem pb;
  pb.spec = tc.spec(gamma);
  pb.grid = tc.grid(h);
  pb.f = tc.f;
  pb.g = tc.g;
  pb.p = p;
  pb.fold = fold;
  PoissonRun run{pb.grid, solve_poisson(pb, cg_tol), {}};
  run.errors = grid_error_norms(run.report.u_h, tc.u_exact, run.grid);
  return run;
}

std::vector<ConvergenceRow> poisson_convergence_study(const TestCase& tc, int p, double gamma,
                                                      const std::vector<double>& h_list,
                                                      const std::vector<Point>& probes,
                                                      double cg_tol, OriginFold fold) {
  tc.spec(gamma).validate();
  return sweep(h_list, [&](double h) {
    const auto t0 = Clock::now();
    const auto run = solve_case(tc, p, gamma, h, cg_tol, fold);
    ConvergenceRow row;
    row.h = h;
    row.error_inf = run.errors.inf_norm;
    row.probe_errors = probe_errors(run.grid, run.errors.pointwise, probes);
    row.runtime_s = seconds_since(t0);
    return row;
  });
}

std::vector<double> default_gamma_list(double alpha) {
  std::vector<double> out;
  for (double g : {2.0, 1.0, 1.0 + 0.5 * alpha, alpha + 0.1}) {
    if (g > alpha && g <= 2.0 && std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  }
  return out;
}

std::vector<GammaBlock> gamma_sensitivity_study(const TestCase& tc, int p,
                                                const std::vector<double>& gamma_list,
                                                const std::vector<double>& h_list) {
  for (double g : gamma_list) {
    if (!(g > tc.alpha && g <= 2.0)) {
      std::ostringstream os;
      os << "gamma = " << g << " is outside (alpha, 2] for alpha = " << tc.alpha;
      throw Error(ErrorCode::Domain, os.str());
    }
  }
  std::vector<GammaBlock> out;
  for (double g : gamma_list) out.push_back({g, operator_error_study(tc, p, g, h_list)});
  return out;
}

std::vector<LambdaBlock> tempered_study(double alpha, const std::vector<double>& lambda_list,
                                        int p, const std::vector<double>& h_list) {
  std::vector<LambdaBlock> out;
  for (double lam : lambda_list) {
    out.push_back({lam, poisson_convergence_study(tempered(alpha, lam), p, 2.0, h_list)});
  }
  return out;
}

std::vector<double> table_h_list(int table) {
  switch (table) {
    case 1: case 2: case 4: return parse_h_list("1/16..1/512");
    case 3: return parse_h_list("1/16..1/256");
    case 5: return parse_h_list("1/4..1/64");
    default: throw Error(ErrorCode::Domain, "tables are numbered 1 to 5");
  }
}

std::vector<double> table_alphas(int table) {
  switch (table) {
    case 1: case 2: case 3: return {0.5, 1.0, 1.7};
    case 4: return {0.6, 1.0, 1.5};
    case 5: return {0.2, 0.7, 1.0, 1.4, 1.9};
    default: throw Error(ErrorCode::Domain, "tables are numbered 1 to 5");
  }
}

std::vector<int> table_degrees(int table) {
  if (table == 5) return {1};
  if (table < 1 || table > 5) throw Error(ErrorCode::Domain, "tables are numbered 1 to 5");
  return {0, 1, 2};
}

std::vector<TableBlock> reproduce_table(int table) {
  const auto hs = table_h_list(table);
  std::vector<TableBlock> out;
  for (double a : table_alphas(table)) {
    for (int p : table_degrees(table)) {
      TableBlock b{a, p, {}};
      switch (table) {
        case 1: b.rows = operator_error_study(compact(a, 1.0 + std::floor(a)), p, 2.0, hs); break;
        case 2: b.rows = operator_error_study(compact(a, 2.1 + a), p, 2.0, hs); break;
        case 3: b.rows = operator_error_study(runge(a), p, 2.0, hs); break;
        case 4: b.rows = poisson_convergence_study(benchmark(a), p, 2.0, hs, {{0.0, 0.0}}); break;
        default: b.rows = poisson_convergence_study(gaussian_2d(a), p, 2.0, hs); break;
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

namespace {

double parse_one(std::string_view s) {
  const auto trim = [](std::string_view v) {
    while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
    while (!v.empty() && v.back() == ' ') v.remove_suffix(1);
    return v;
  };
  s = trim(s);
  const auto number = [&](std::string_view v) {
    v = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      throw Error(ErrorCode::Domain, "cannot parse mesh size '" + std::string(v) + "'");
    }
    return out;
  };
  const auto slash = s.find('/');
  const double v = slash == std::string_view::npos
                       ? number(s)
                       : number(s.substr(0, slash)) / number(s.substr(slash + 1));
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::Domain, "mesh sizes must be positive");
  return v;
}

}  // namespace

std::vector<double> parse_h_list(const std::string& text) {
  std::vector<double> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const double coarse = parse_one(std::string_view(text).substr(0, dots));
    const double fine = parse_one(std::string_view(text).substr(dots + 2));
    if (fine > coarse) throw Error(ErrorCode::Domain, "h range must go from coarse to fine");
    const double steps = std::log2(coarse / fine);
    if (std::abs(steps - std::round(steps)) > 1e-9) {
      throw Error(ErrorCode::Domain, "h range endpoints must differ by a power of two");
    }
    for (long k = 0; k <= std::lround(steps); ++k) out.push_back(std::ldexp(coarse, static_cast<int>(-k)));
    return out;
  }
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    out.push_back(parse_one(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (out.empty()) throw Error(ErrorCode::Domain, "empty mesh size list");
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string{};
}

void write_convergence_csv(std::ostream& os, std::span<const ConvergenceRow> rows, bool timing) {
  os << "h,error_inf,rate,runtime_s\n";
  for (const auto& r : rows) {
    os << format_number(r.h) << ',' << format_number(r.error_inf) << ',' << format_number(r.rate)
       << ',' << (timing ? format_number(r.runtime_s) : std::string{}) << '\n';
  }
}

void write_gamma_csv(std::ostream& os, std::span<const GammaBlock> blocks) {
  os << "gamma,h,error_inf,rate\n";
  for (const auto& b : blocks) {
    for (const auto& r : b.rows) {
      os << format_number(b.gamma) << ',' << format_number(r.h) << ','
         << format_number(r.error_inf) << ',' << format_number(r.rate) << '\n';
    }
  }
}

void write_lambda_csv(std::ostream& os, std::span<const LambdaBlock> blocks, bool timing) {
  os << "lambda,h,error_inf,rate,runtime_s\n";
  for (const auto& b : blocks) {
    for (const auto& r : b.rows) {
      os << format_number(b.lambda) << ',' << format_number(r.h) << ','
         << format_number(r.error_inf) << ',' << format_number(r.rate) << ','
         << (timing ? format_number(r.runtime_s) : std::string{}) << '\n';
    }
  }
}

void write_table_csv(std::ostream& os, std::span<const TableBlock> blocks, bool timing) {
  os << "alpha,p,h,error_inf,rate,runtime_s\n";
  for (const auto& b : blocks) {
    for (const auto& r : b.rows) {
      os << format_number(b.alpha) << ',' << b.p << ',' << format_number(r.h) << ','
         << format_number(r.error_inf) << ',' << format_number(r.rate) << ','
         << (timing ? format_number(r.runtime_s) : std::string{}) << '\n';
    }
  }
}

void write_error_field(std::ostream& os, std::span<const double> pointwise, const Grid& grid) {
  if (pointwise.size() != grid.interior_size()) {
    throw Error(ErrorCode::Mismatch, "error field size does not match the grid");
  }
  os << "x,y,e\n";
  for (std::size_t i = 0; i < pointwise.size(); ++i) {
    const Point x = grid.interior_point(i);
    os << format_number(x[0]) << ',' << format_number(grid.dim() == 2 ? x[1] : 0.0) << ','
       << format_number(pointwise[i]) << '\n';
  }
}

namespace {

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& w) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  w(out);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write to " + path.string() + " failed");
}

}  // namespace

void emit_csv(std::span<const ConvergenceRow> rows, const std::filesystem::path& path, bool timing) {
  write_file(path, [&](std::ostream& os) { write_convergence_csv(os, rows, timing); });
}

void emit_error_field(std::span<const double> pointwise, const Grid& grid,
                      const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& os) { write_error_field(os, pointwise, grid); });
}

}  // namespace fraclap::bench
