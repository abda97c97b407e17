// fraclap: convergence studies for the operator-factorization scheme.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "fraclap/bench.hpp"
#include "fraclap/error.hpp"

namespace fb = fraclap::bench;

namespace {

struct Common {
  double alpha = 1.0;
  int p = 1;
  double gamma = 2.0;
  std::string case_name = "runge";
  double s = 2.0;
  double lambda = 0.0;
  std::string h = "1/16..1/256";
  std::string out;
  bool timing = false;
  std::vector<double> probes;
  std::string fold = "axis-average";
};

void add_common(CLI::App* app, Common& c, bool with_gamma = true) {
  app->add_option("--alpha", c.alpha, "Fractional power in (0, 2)")->capture_default_str();
  app->add_option("--p", c.p, "Basis degree 0, 1 or 2")->check(CLI::Range(0, 2))->capture_default_str();
  if (with_gamma) app->add_option("--gamma", c.gamma, "Splitting parameter in (alpha, 2]")->capture_default_str();
  app->add_option("--case", c.case_name, "runge, compact, benchmark, gauss2d or tempered")
      ->capture_default_str();
  app->add_option("--s", c.s, "Exponent of the compact case (1-x^2)_+^s")->capture_default_str();
  app->add_option("--lambda", c.lambda, "Tempering parameter")->capture_default_str();
  app->add_option("--h", c.h, "Mesh sizes: 1/16..1/256 or a comma list")->capture_default_str();
  app->add_option("--out", c.out, "CSV output path (default: stdout)");
  app->add_flag("--timing", c.timing, "Fill the runtime_s column");
  app->add_option("--probe", c.probes, "Also report |e| at these x")->delimiter(',');
  app->add_option("--fold", c.fold, "2D origin treatment: axis-average, three-point, literal")
      ->check(CLI::IsMember({"axis-average", "three-point", "literal"}))
      ->capture_default_str();
}

fraclap::OriginFold parse_fold(const std::string& s) {
  if (s == "three-point") return fraclap::OriginFold::ThreePoint;
  if (s == "literal") return fraclap::OriginFold::Literal;
  return fraclap::OriginFold::AxisAverage;
}

std::vector<fraclap::Point> probe_points(const Common& c) {
  std::vector<fraclap::Point> out;
  for (double x : c.probes) out.push_back({x, 0.0});
  return out;
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw fraclap::Error(fraclap::ErrorCode::Io, "cannot open " + path);
  write(f);
  if (!f) throw fraclap::Error(fraclap::ErrorCode::Io, "write to " + path + " failed");
}

void report_probes(const std::vector<fb::ConvergenceRow>& rows, const Common& c) {
  if (c.probes.empty()) return;
  for (const auto& r : rows) {
    std::cerr << "h=" << fb::format_number(r.h);
    for (std::size_t k = 0; k < c.probes.size(); ++k) {
      std::cerr << "  |e(" << c.probes[k] << ")|=" << fb::format_number(r.probe_errors[k]);
    }
    std::cerr << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference-quadrature scheme for the fractional Laplacian"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_config("--config", "", "TOML file with option values; command-line flags win");
  app.require_subcommand(1);

  Common apply_opts, solve_opts, gamma_opts, temp_opts;
  double cg_tol = 1e-12;
  std::string field_out;
  std::vector<double> gammas, lambdas{0.5, 1.0};
  int table = 0;
  bool table_timing = false;
  std::string table_out;

  auto* apply = app.add_subcommand("apply", "Operator error study against a closed form");
  add_common(apply, apply_opts);

  auto* solve = app.add_subcommand("solve", "Poisson convergence study");
  solve_opts.case_name = "benchmark";
  add_common(solve, solve_opts);
  solve->add_option("--cg-tol", cg_tol, "Relative residual tolerance")->capture_default_str();
  solve->add_option("--field", field_out, "Write the pointwise error at the finest h (x,y,e)");

  auto* gamma = app.add_subcommand("gamma", "Splitting-parameter sensitivity study");
  add_common(gamma, gamma_opts, false);
  gamma->add_option("--gammas", gammas, "Values of gamma (default 2, 1, 1+alpha/2, alpha+0.1)")
      ->delimiter(',');

  auto* temp = app.add_subcommand("tempered", "Tempered Poisson study, u = (1-x^2)_+^2");
  add_common(temp, temp_opts, false);
  temp->add_option("--lambdas", lambdas, "Tempering parameters")->delimiter(',')->capture_default_str();

  auto* tab = app.add_subcommand("table", "Reproduce one of the published error tables");
  tab->add_option("which", table, "Table number 1-5")->required()->check(CLI::Range(1, 5));
  tab->add_flag("--timing", table_timing, "Fill the runtime_s column");
  tab->add_option("--out", table_out, "CSV output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (apply->parsed()) {
      const auto& c = apply_opts;
      const auto tc = fb::make_case(c.case_name, c.alpha, c.s, c.lambda);
      const auto rows = fb::operator_error_study(tc, c.p, c.gamma, fb::parse_h_list(c.h),
                                                 probe_points(c), parse_fold(c.fold));
      with_output(c.out, [&](std::ostream& os) { fb::write_convergence_csv(os, rows, c.timing); });
      report_probes(rows, c);
    } else if (solve->parsed()) {
      const auto& c = solve_opts;
      const auto tc = fb::make_case(c.case_name, c.alpha, c.s, c.lambda);
      const auto hs = fb::parse_h_list(c.h);
      const auto rows = fb::poisson_convergence_study(tc, c.p, c.gamma, hs, probe_points(c), cg_tol,
                                                      parse_fold(c.fold));
      with_output(c.out, [&](std::ostream& os) { fb::write_convergence_csv(os, rows, c.timing); });
      report_probes(rows, c);
      if (!field_out.empty()) {
        const auto run = fb::solve_case(tc, c.p, c.gamma, hs.back(), cg_tol, parse_fold(c.fold));
        fb::emit_error_field(run.errors.pointwise, run.grid, field_out);
      }
    } else if (gamma->parsed()) {
      const auto& c = gamma_opts;
      const auto tc = fb::make_case(c.case_name, c.alpha, c.s, c.lambda);
      const auto list = gammas.empty() ? fb::default_gamma_list(c.alpha) : gammas;
      const auto blocks = fb::gamma_sensitivity_study(tc, c.p, list, fb::parse_h_list(c.h));
      with_output(c.out, [&](std::ostream& os) { fb::write_gamma_csv(os, blocks); });
    } else if (temp->parsed()) {
      const auto& c = temp_opts;
      const auto blocks = fb::tempered_study(c.alpha, lambdas, c.p, fb::parse_h_list(c.h));
      with_output(c.out, [&](std::ostream& os) { fb::write_lambda_csv(os, blocks, c.timing); });
    } else if (tab->parsed()) {
      const auto blocks = fb::reproduce_table(table);
      with_output(table_out, [&](std::ostream& os) { fb::write_table_csv(os, blocks, table_timing); });
    }
  } catch (const fraclap::Error& e) {
    std::cerr << "fraclap: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fraclap: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
