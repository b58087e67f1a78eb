#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "localmotion/evolver.hpp"
#include "localmotion/experiments.hpp"
#include "localmotion/io.hpp"
#include "localmotion/metrics.hpp"

namespace py = pybind11;
namespace lm = localmotion;

namespace {

// Results cross the boundary as JSON text; the Python side decodes them.
lm::ExperimentConfig config_from(const std::string& text, const std::map<std::string, std::string>& overrides) {
  auto cfg = lm::parse_config(text);
  for (const auto& [key, value] : overrides) lm::set_config_value(cfg, key, value);
  cfg.validate();
  return cfg;
}

py::tuple run(const std::string& text, const std::map<std::string, std::string>& overrides) {
  const auto cfg = config_from(text, overrides);
  lm::RunResult r;
  {
    py::gil_scoped_release release;
    r = lm::run(cfg);
  }
  return py::make_tuple(lm::to_json(r.summary).dump(), lm::metrics_csv(r.rows));
}

std::string verify(const std::string& text, const std::map<std::string, std::string>& overrides) {
  const auto cfg = config_from(text, overrides);
  py::gil_scoped_release release;
  return lm::to_json(lm::verify(cfg)).dump();
}

std::string lower_bound(const std::string& text, const std::map<std::string, std::string>& overrides) {
  const auto cfg = config_from(text, overrides);
  py::gil_scoped_release release;
  return lm::to_json(lm::lower_bound_experiment(cfg)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tracking locally moving objects with a two-bit oracle";
  py::register_exception<lm::ModelViolation>(m, "ModelViolation", PyExc_RuntimeError);

  m.def("canonical_config", [](const std::string& text, const std::map<std::string, std::string>& overrides) {
    return lm::to_text(config_from(text, overrides));
  }, py::arg("text"), py::arg("overrides") = std::map<std::string, std::string>{});
  m.def("run", &run, py::arg("text"), py::arg("overrides") = std::map<std::string, std::string>{});
  m.def("verify", &verify, py::arg("text"), py::arg("overrides") = std::map<std::string, std::string>{});
  m.def("lower_bound", &lower_bound, py::arg("text"),
        py::arg("overrides") = std::map<std::string, std::string>{});

  m.def("kl_exact_1d", py::overload_cast<double, double, double, double>(&lm::kl_exact_1d),
        py::arg("q"), py::arg("l"), py::arg("k"), py::arg("h"));
  m.def("kl_upper_bound", &lm::kl_upper_bound, py::arg("s"), py::arg("l"), py::arg("h"), py::arg("d"));
  m.def("object_potential", py::overload_cast<double, double, double>(&lm::object_potential),
        py::arg("s"), py::arg("l"), py::arg("h"));
  m.def("completion_potential_bound", &lm::completion_potential_bound, py::arg("beta"));
  m.def("evolver_potential_bound", &lm::evolver_potential_bound, py::arg("alpha"), py::arg("beta"),
        py::arg("d"));
  m.def("adversary_push_count", &lm::adversary_push_count, py::arg("alpha"));
}
