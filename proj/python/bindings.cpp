#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hmlab/domain/quadrature.hpp"
#include "hmlab/lab/runner.hpp"
#include "hmlab/lab/scenario.hpp"
#include "hmlab/target/comparison.hpp"
#include "hmlab/target/space.hpp"

namespace py = pybind11;
using namespace hmlab;

namespace {

target::TargetPoint to_point(const std::vector<double>& coords) {
  target::TargetPoint p;
  p.coords.assign(coords.begin(), coords.end());
  return p;
}

lab::Scenario load(const std::string& path) { return lab::parse_scenario(path); }

// ScenarioInvalid carries every issue; surface them as (field, message) pairs.
py::list issues_of(const lab::ScenarioInvalid& e) {
  py::list out;
  for (const auto& i : e.issues()) out.append(py::make_tuple(i.field, i.message));
  return out;
}

}  // namespace

PYBIND11_MODULE(_hmlab, m) {
  m.doc() = "Harmonic map order and Bochner checks";

  static py::exception<lab::ScenarioInvalid> invalid(m, "ScenarioInvalid", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const lab::ScenarioInvalid& e) {
      py::object exc = py::reinterpret_borrow<py::object>(invalid)(e.what());
      exc.attr("issues") = issues_of(e);
      PyErr_SetObject(invalid.ptr(), exc.ptr());
    } catch (const ConfigError& e) {
      PyErr_SetString(PyExc_ValueError, (e.field() + ": " + e.what()).c_str());
    } catch (const InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  auto form = [](const Eigen::MatrixXd& q) { return domain::QuadraticForm(q); };
  m.def("integrate_quadratic_sphere",
        [=](const Eigen::MatrixXd& q, double sigma) {
          return domain::integrate_quadratic_sphere(form(q), sigma, static_cast<int>(q.rows()));
        },
        py::arg("Q"), py::arg("sigma"));
  m.def("integrate_quadratic_ball",
        [=](const Eigen::MatrixXd& q, double sigma) {
          return domain::integrate_quadratic_ball(form(q), sigma, static_cast<int>(q.rows()));
        },
        py::arg("Q"), py::arg("sigma"));
  m.def("integrate_quadratic_product_sphere",
        [=](const Eigen::MatrixXd& q, const Eigen::MatrixXd& qt, double sigma) {
          return domain::integrate_quadratic_product_sphere(form(q), form(qt), sigma, static_cast<int>(q.rows()));
        },
        py::arg("Q"), py::arg("Qt"), py::arg("sigma"));
  m.def(
      "quadrature_selftest",
      [](int count, std::uint64_t seed) {
        py::list rows;
        for (const auto& r : domain::quadrature_selftest(count, seed))
          rows.append(py::dict(py::arg("form") = r.form_id, py::arg("n") = r.n, py::arg("sigma") = r.sigma,
                               py::arg("analytic") = r.analytic, py::arg("numeric") = r.numeric,
                               py::arg("rel_err") = r.rel_err));
        return rows;
      },
      py::arg("count") = 100, py::arg("seed") = 1);

  m.def("euclidean_comparison_distance", &target::euclidean_comparison_distance, py::arg("a"), py::arg("b"),
        py::arg("c"), py::arg("t"));
  m.def("hyperbolic_comparison_distance", &target::hyperbolic_comparison_distance, py::arg("a"), py::arg("b"),
        py::arg("c"), py::arg("t"));

  m.def(
      "target_distance",
      [](const std::string& spec, const std::vector<double>& p, const std::vector<double>& q) {
        auto space = target::TargetSpace::from_json(nlohmann::json::parse(spec));
        return space.distance(space.canonicalize(to_point(p)), space.canonicalize(to_point(q)));
      },
      py::arg("spec_json"), py::arg("p"), py::arg("q"),
      "Distance between two points given in the target's coordinates.");

  m.def("known_checks", &lab::known_checks);
  m.def(
      "validate_scenario", [](const std::string& path) { return load(path).name; }, py::arg("path"),
      "Parses and validates a scenario file, returning its name.");
  m.def(
      "run_scenario",
      [](const std::string& path, std::optional<std::string> out, std::optional<std::vector<std::string>> checks,
         int threads, bool write) {
        lab::Scenario s = load(path);
        lab::RunOptions options;
        if (out) options.output = *out;
        options.checks = checks;
        options.threads = threads;
        options.write = write;
        lab::RunResult r;
        {
          py::gil_scoped_release release;
          r = lab::run_scenario(s, options);
        }
        std::vector<std::string> manifest;
        for (const auto& p : r.manifest) manifest.push_back(p.string());
        return py::make_tuple(r.exit_code(), r.artifacts.summary.dump(), manifest);
      },
      py::arg("path"), py::arg("out") = py::none(), py::arg("checks") = py::none(), py::arg("threads") = 1,
      py::arg("write") = true);
}
