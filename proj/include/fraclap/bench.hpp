#pragma once

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fraclap/kernel.hpp"
#include "fraclap/solver.hpp"
#include "fraclap/stencil.hpp"

namespace fraclap::bench {

/// An exactly solvable configuration on a box domain.
struct TestCase {
  std::string name;
  int dim = 1;
  double alpha = 1.0;
  double lambda = 0.0;  // tempering; 0 for the power kernel
  Point lower{-1.0, -1.0};
  Point upper{1.0, 1.0};
  FieldFn u_exact;         // empty if unknown
  FieldFn f;               // right-hand side on the interior
  FieldFn g;               // data on the complement
  FieldFn exact_operator;  // (-Delta)^(alpha/2) u on the interior; empty if unknown
  std::string notes;

  KernelSpec spec(double gamma = 2.0) const;
  /// Grid with mesh size h; throws Domain unless h divides the first side.
  Grid grid(double h) const;
};

/// (-Delta)^(alpha/2) of 1/(1+x^2).
double runge_operator(double alpha, double x);
/// (-Delta)^(alpha/2) of (1-x^2)_+^s for |x| < 1.
double compact_operator(double alpha, double s, double x);
/// -c int_0^inf (u(x+y) + u(x-y) - 2u(x)) e^(-lambda y) y^(-1-alpha) dy for
/// u = (1-x^2)_+^2, |x| < 1, to relative tolerance tol.
double tempered_operator(double alpha, double lambda, double c, double x, double tol = 1e-12);

TestCase runge(double alpha);
TestCase compact(double alpha, double s);
/// f = 1, g = 0; u = (1-x^2)_+^(alpha/2) / Gamma(1+alpha).
TestCase benchmark(double alpha);
/// 2D: u = g = exp(-|x|^2) on (-1,1)^2.
TestCase gaussian_2d(double alpha);
/// Tempered kernel, u = (1-x^2)_+^2; f is evaluated node by node by quadrature.
TestCase tempered(double alpha, double lambda);

/// Lookup by name: runge, compact (needs s), benchmark, gauss2d, tempered.
TestCase make_case(const std::string& name, double alpha, double s = 2.0, double lambda = 0.0);

struct ConvergenceRow {
  double h = 0.0;
  double error_inf = 0.0;
  double rate = std::numeric_limits<double>::quiet_NaN();  // NaN on the first row
  double runtime_s = 0.0;
  std::vector<double> probe_errors;  // |e| at the requested probes, NaN off-grid
};

/// log2(e_coarse / e_fine).
double convergence_rate(double e_coarse, double e_fine);
/// Fills rate from consecutive rows.
void fill_rates(std::vector<ConvergenceRow>& rows);

/// Errors of the discrete operator against case.exact_operator.
std::vector<ConvergenceRow> operator_error_study(const TestCase& tc, int p, double gamma,
                                                 const std::vector<double>& h_list,
                                                 const std::vector<Point>& probes = {},
                                                 OriginFold fold = OriginFold::AxisAverage);

/// Poisson solve errors against case.u_exact.
std::vector<ConvergenceRow> poisson_convergence_study(const TestCase& tc, int p, double gamma,
                                                      const std::vector<double>& h_list,
                                                      const std::vector<Point>& probes = {},
                                                      double cg_tol = 1e-12,
                                                      OriginFold fold = OriginFold::AxisAverage);

struct PoissonRun {
  Grid grid;
  SolveReport report;
  ErrorNorms errors;
};
PoissonRun solve_case(const TestCase& tc, int p, double gamma, double h, double cg_tol = 1e-12,
                      OriginFold fold = OriginFold::AxisAverage);

struct GammaBlock {
  double gamma = 2.0;
  std::vector<ConvergenceRow> rows;
};
/// {2, 1, 1 + alpha/2, alpha + 0.1}, dropping entries outside (alpha, 2] and duplicates.
std::vector<double> default_gamma_list(double alpha);
/// Operator studies per gamma. Throws Domain if some gamma <= alpha.
std::vector<GammaBlock> gamma_sensitivity_study(const TestCase& tc, int p,
                                                const std::vector<double>& gamma_list,
                                                const std::vector<double>& h_list);

struct LambdaBlock {
  double lambda = 0.0;
  std::vector<ConvergenceRow> rows;
};
std::vector<LambdaBlock> tempered_study(double alpha, const std::vector<double>& lambda_list,
                                        int p, const std::vector<double>& h_list);

struct TableBlock {
  double alpha = 1.0;
  int p = 1;
  std::vector<ConvergenceRow> rows;
};
/// h values covered by the one-shot table runs.
std::vector<double> table_h_list(int table);
std::vector<double> table_alphas(int table);
std::vector<int> table_degrees(int table);
/// Tables 1-3 are operator studies, 4 and 5 Poisson studies.
std::vector<TableBlock> reproduce_table(int table);

/// "1/16..1/256" (dyadic range), or a comma list of decimals or fractions.
std::vector<double> parse_h_list(const std::string& text);

/// Shortest round-trip decimal; empty for NaN.
std::string format_number(double v);

void write_convergence_csv(std::ostream& os, std::span<const ConvergenceRow> rows,
                           bool timing = false);
void write_gamma_csv(std::ostream& os, std::span<const GammaBlock> blocks);
void write_lambda_csv(std::ostream& os, std::span<const LambdaBlock> blocks, bool timing = false);
void write_table_csv(std::ostream& os, std::span<const TableBlock> blocks, bool timing = false);
void write_error_field(std::ostream& os, std::span<const double> pointwise, const Grid& grid);

/// File variants; throw ErrorCode::Io on failure.
void emit_csv(std::span<const ConvergenceRow> rows, const std::filesystem::path& path,
              bool timing = false);
void emit_error_field(std::span<const double> pointwise, const Grid& grid,
                      const std::filesystem::path& path);

}  // namespace fraclap::bench
