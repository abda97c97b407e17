#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <memory>

#include "fraclap/bench.hpp"
#include "fraclap/error.hpp"
#include "fraclap/fastop.hpp"
#include "fraclap/solver.hpp"
#include "fraclap/specfun.hpp"
#include "fraclap/stencil.hpp"
#include "fraclap/weights.hpp"

namespace py = pybind11;
using namespace fraclap;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return {a.data(), a.data() + a.size()};
}

// Python callables may be invoked from worker threads; every call takes the GIL.
FieldFn wrap(py::object fn, int dim) {
  if (fn.is_none()) return FieldFn::zero();
  std::shared_ptr<py::object> holder(new py::object(std::move(fn)), [](py::object* p) {
    py::gil_scoped_acquire gil;
    delete p;
  });
  return FieldFn(
      [holder, dim](const Point& x) {
        py::gil_scoped_acquire gil;
        py::object r = dim == 1 ? (*holder)(x[0]) : (*holder)(x[0], x[1]);
        return r.cast<double>();
      },
      FieldFn::Support::Everywhere);
}

OriginFold parse_fold(const std::string& s) {
  if (s == "axis-average") return OriginFold::AxisAverage;
  if (s == "three-point") return OriginFold::ThreePoint;
  if (s == "literal") return OriginFold::Literal;
  throw Error(ErrorCode::Domain, "fold must be axis-average, three-point or literal");
}

py::list rows_to_list(const std::vector<bench::ConvergenceRow>& rows) {
  py::list out;
  for (const auto& r : rows) {
    py::dict d;
    d["h"] = r.h;
    d["error_inf"] = r.error_inf;
    d["rate"] = std::isnan(r.rate) ? py::object(py::none()) : py::object(py::float_(r.rate));
    d["runtime_s"] = r.runtime_s;
    d["probe_errors"] = r.probe_errors;
    out.append(d);
  }
  return out;
}

std::vector<Point> probes_1d(const std::vector<double>& xs) {
  std::vector<Point> out;
  for (double x : xs) out.push_back({x, 0.0});
  return out;
}

}  // namespace

PYBIND11_MODULE(_fraclap, m) {
  m.doc() = "Operator-factorization discretization of the integral fractional Laplacian";

  py::register_exception<Error>(m, "FraclapError", PyExc_RuntimeError);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("power", &KernelSpec::power, py::arg("dim"), py::arg("alpha"), py::arg("gamma") = 2.0)
      .def_static(
          "tempered",
          [](int dim, double alpha, double lambda, double gamma, std::optional<double> cbar) {
            return KernelSpec::tempered(dim, alpha, lambda, gamma, cbar);
          },
          py::arg("dim"), py::arg("alpha"), py::arg("lam"), py::arg("gamma") = 2.0,
          py::arg("cbar") = py::none())
      .def_readonly("dim", &KernelSpec::dim)
      .def_readonly("alpha", &KernelSpec::alpha)
      .def_readonly("gamma", &KernelSpec::gamma)
      .def_readonly("lam", &KernelSpec::lambda)
      .def_readonly("c", &KernelSpec::c)
      .def("radial", &KernelSpec::radial)
      .def("validate", &KernelSpec::validate)
      .def("__repr__", [](const KernelSpec& s) {
        return "KernelSpec(dim=" + std::to_string(s.dim) + ", alpha=" + bench::format_number(s.alpha) +
               ", gamma=" + bench::format_number(s.gamma) + ", lam=" + bench::format_number(s.lambda) + ")";
      });

  py::class_<Grid>(m, "Grid")
      .def_static("interval", &Grid::interval, py::arg("a"), py::arg("b"), py::arg("cells"))
      .def_static(
          "rectangle",
          [](std::pair<double, double> lo, std::pair<double, double> hi, int cells_x) {
            return Grid::rectangle({lo.first, lo.second}, {hi.first, hi.second}, cells_x);
          },
          py::arg("lower"), py::arg("upper"), py::arg("cells_x"))
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("h", &Grid::h)
      .def_property_readonly("n", &Grid::n)
      .def_property_readonly("extent", &Grid::extent)
      .def_property_readonly("interior_size", &Grid::interior_size)
      .def("cells", &Grid::cells)
      .def("interior_points", [](const Grid& g) {
        const auto pts = g.interior_points();
        py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), static_cast<py::ssize_t>(g.dim())});
        auto v = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < pts.size(); ++i) {
          for (int a = 0; a < g.dim(); ++a) v(static_cast<py::ssize_t>(i), a) = pts[i][static_cast<std::size_t>(a)];
        }
        return out;
      });

  m.def("gamma", &specfun::gamma, py::arg("x"));
  m.def("gauss_2f1", [](double a, double b, double c, double z) { return specfun::gauss_2f1(a, b, c, z).value; },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"));
  m.def("kummer_1f1", [](double a, double b, double z) { return specfun::kummer_1f1(a, b, z).value; },
        py::arg("a"), py::arg("b"), py::arg("z"));
  m.def("normalization_constant", &specfun::normalization_constant, py::arg("d"), py::arg("alpha"));

  m.def("weights_1d_analytic",
        [](int p, double alpha, double gamma, int n, double h) {
          return to_array(weights_1d_analytic(p, alpha, gamma, n, h).values);
        },
        py::arg("p"), py::arg("alpha"), py::arg("gamma"), py::arg("n"), py::arg("h"));
  m.def("weights_1d_quadrature",
        [](const KernelSpec& spec, int p, int n, double h, double tol) {
          WeightTable1D w;
          {
            py::gil_scoped_release nogil;
            w = weights_1d_quadrature(spec, p, n, h, tol);
          }
          return to_array(w.values);
        },
        py::arg("spec"), py::arg("p"), py::arg("n"), py::arg("h"), py::arg("tol") = 1e-13);
  m.def("weights_2d_quadrature",
        [](const KernelSpec& spec, int p, int n, double h, double tol) {
          WeightTable2D w;
          {
            py::gil_scoped_release nogil;
            w = weights_2d_quadrature(spec, p, n, h, tol);
          }
          const auto k = static_cast<py::ssize_t>(n + 1);
          py::array_t<double> out({k, k});
          std::copy(w.values.begin(), w.values.end(), out.mutable_data());
          return out;
        },
        py::arg("spec"), py::arg("p"), py::arg("n"), py::arg("h"), py::arg("tol") = 1e-13);

  m.def("coeffs_1d",
        [](const KernelSpec& spec, const Grid& grid, int p) {
          const auto s = assemble_coeffs_1d(spec, grid, p);
          return py::make_tuple(to_array(s.a), s.farfield_measure);
        },
        py::arg("spec"), py::arg("grid"), py::arg("p"),
        "Coefficients a_0..a_N and the far-field measure.");
  m.def("coeffs_2d",
        [](const KernelSpec& spec, const Grid& grid, int p, const std::string& fold) {
          const auto s = assemble_coeffs_2d(spec, grid, p, parse_fold(fold));
          const auto k = static_cast<py::ssize_t>(s.n + 1);
          py::array_t<double> out({k, k});
          std::copy(s.a.begin(), s.a.end(), out.mutable_data());
          return py::make_tuple(out, s.farfield_measure);
        },
        py::arg("spec"), py::arg("grid"), py::arg("p"), py::arg("fold") = "axis-average");

  m.def("apply_operator",
        [](const KernelSpec& spec, const Grid& grid, int p, py::object u, py::object g,
           const std::string& fold) {
          const FieldFn uf = wrap(u, grid.dim());
          const FieldFn gf = g.is_none() ? uf : wrap(g, grid.dim());
          std::vector<double> v;
          {
            py::gil_scoped_release nogil;
            v = apply_operator(spec, grid, p, uf, gf, parse_fold(fold));
          }
          return to_array(v);
        },
        py::arg("spec"), py::arg("grid"), py::arg("p"), py::arg("u"), py::arg("g") = py::none(),
        py::arg("fold") = "axis-average",
        "Discrete operator at interior nodes; g defaults to u.");

  m.def("solve_poisson",
        [](const KernelSpec& spec, const Grid& grid, int p, py::object f, py::object g, double cg_tol,
           int max_iter, const std::string& fold) {
          PoissonProblem pb;
          pb.spec = spec;
          pb.grid = grid;
          pb.p = p;
          pb.f = wrap(f, grid.dim());
          pb.g = wrap(g, grid.dim());
          pb.fold = parse_fold(fold);
          SolveReport r;
          {
            py::gil_scoped_release nogil;
            r = solve_poisson(pb, cg_tol, max_iter);
          }
          py::dict d;
          d["u_h"] = to_array(r.u_h);
          d["iterations"] = r.iterations;
          d["final_residual"] = r.final_residual;
          d["indefinite"] = r.indefiniteness_flag;
          d["wall_time"] = r.wall_time;
          return d;
        },
        py::arg("spec"), py::arg("grid"), py::arg("p"), py::arg("f"), py::arg("g") = py::none(),
        py::arg("cg_tol") = 1e-12, py::arg("max_iter") = 20000, py::arg("fold") = "axis-average");

  m.def("toeplitz_matvec",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> col,
           py::array_t<double, py::array::c_style | py::array::forcecast> x, double scale, bool dense) {
          const ToeplitzOperator op(from_array(col), scale);
          const auto xv = from_array(x);
          return to_array(dense ? dense_matvec(op, xv) : op.apply(xv));
        },
        py::arg("first_col"), py::arg("x"), py::arg("scale") = 1.0, py::arg("dense") = false);

  m.def("operator_error_study",
        [](const std::string& name, double alpha, int p, double gamma, const std::string& h, double s,
           double lam, const std::vector<double>& probes) {
          const auto tc = bench::make_case(name, alpha, s, lam);
          std::vector<bench::ConvergenceRow> rows;
          {
            py::gil_scoped_release nogil;
            rows = bench::operator_error_study(tc, p, gamma, bench::parse_h_list(h), probes_1d(probes));
          }
          return rows_to_list(rows);
        },
        py::arg("case"), py::arg("alpha"), py::arg("p"), py::arg("gamma") = 2.0,
        py::arg("h") = "1/16..1/256", py::arg("s") = 2.0, py::arg("lam") = 0.0,
        py::arg("probes") = std::vector<double>{});

  m.def("poisson_convergence_study",
        [](const std::string& name, double alpha, int p, double gamma, const std::string& h, double s,
           double lam, const std::vector<double>& probes, double cg_tol) {
          const auto tc = bench::make_case(name, alpha, s, lam);
          std::vector<bench::ConvergenceRow> rows;
          {
            py::gil_scoped_release nogil;
            rows = bench::poisson_convergence_study(tc, p, gamma, bench::parse_h_list(h),
                                                    probes_1d(probes), cg_tol);
          }
          return rows_to_list(rows);
        },
        py::arg("case"), py::arg("alpha"), py::arg("p"), py::arg("gamma") = 2.0,
        py::arg("h") = "1/16..1/256", py::arg("s") = 2.0, py::arg("lam") = 0.0,
        py::arg("probes") = std::vector<double>{}, py::arg("cg_tol") = 1e-12);

  m.def("reproduce_table",
        [](int which) {
          std::vector<bench::TableBlock> blocks;
          {
            py::gil_scoped_release nogil;
            blocks = bench::reproduce_table(which);
          }
          py::list out;
          for (const auto& b : blocks) {
            py::dict d;
            d["alpha"] = b.alpha;
            d["p"] = b.p;
            d["rows"] = rows_to_list(b.rows);
            out.append(d);
          }
          return out;
        },
        py::arg("which"));

  m.def("parse_h_list", &bench::parse_h_list, py::arg("text"));
  m.def("clear_weight_cache", &clear_weight_cache);
}
