#include "difftrio/bench/bc_io.hpp"
#include "difftrio/bench/run.hpp"
#include "difftrio/errors.hpp"
#include "difftrio/rc/solver.hpp"
#include "difftrio/spectral/chebyshev.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace difftrio;

namespace {

py::dict result_row(const std::string& name, const bench::SolverResult& r) {
  py::dict d;
  d["solver"] = name;
  d["status"] = r.status;
  if (r.ok()) {
    d["field_eps_inf"] = r.report->eps_inf;
    d["flux_eps_inf"] = r.report->flux_eps_inf;
    d["scd"] = r.report->scd;
    d["r_cpu_ms_per_h"] = r.report->r_cpu_ms_per_h;
  }
  return d;
}

py::dict physical_field(const core::SolutionField& f, const bench::CaseSetup& setup) {
  const auto phys = core::redimensionalize(f, setup.problem);
  py::dict d;
  d["x_m"] = phys.x_nodes;
  d["t_s"] = phys.t_samples;
  d["values"] = phys.values;
  return d;
}

bench::CaseId parse_case(const std::string& name) {
  if (name == "heat") return bench::CaseId::heat;
  if (name == "moisture") return bench::CaseId::moisture;
  if (name == "annual") return bench::CaseId::annual;
  throw ConfigurationError("unknown case '" + name + "'");
}

py::dict bc_dict(const bench::BcSeries& s) {
  py::dict d;
  d["time_s"] = s.time_s;
  d["left"] = s.left;
  d["right"] = s.right;
  d["units"] = s.units;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "1D diffusion solvers (RC, FDM, Chebyshev-Tau) and benchmark harness";

  // Registered most-derived last: pybind11 tries translators in reverse order.
  static py::exception<Error> base(m, "DifftrioError", PyExc_RuntimeError);
  py::register_exception<ConfigurationError>(m, "ConfigurationError", base.ptr());
  py::register_exception<IngestionError>(m, "IngestionError", base.ptr());
  py::register_exception<OracleDivergenceError>(m, "OracleDivergenceError", base.ptr());
  py::register_exception<StabilityError>(m, "StabilityError", base.ptr());

  py::class_<bench::RunConfig>(m, "RunConfig")
      .def_property_readonly("case", [](const bench::RunConfig& c) { return bench::case_name(c.case_id); })
      .def_property_readonly("solvers",
                             [](const bench::RunConfig& c) {
                               std::vector<std::string> names;
                               for (const auto& s : c.solvers) names.push_back(s.label());
                               return names;
                             })
      .def_property("output_dir", [](const bench::RunConfig& c) { return c.output_dir; },
                    [](bench::RunConfig& c, const std::filesystem::path& p) { c.output_dir = p; })
      .def_readwrite("plots", &bench::RunConfig::plots)
      .def_readwrite("jobs", &bench::RunConfig::jobs)
      .def_readwrite("seed", &bench::RunConfig::seed)
      .def_readwrite("timing_min_seconds", &bench::RunConfig::timing_min_seconds);

  m.def("parse_config", &bench::parse_run_config, py::arg("json_text"), py::arg("base_dir") = std::filesystem::path{},
        "Run configuration from JSON text (schema_version 1).");
  m.def("load_config", &bench::load_run_config, py::arg("path"));
  m.def("preset", [](const std::string& name) { return bench::preset(parse_case(name)); }, py::arg("case"),
        "Configuration with the case's default solvers.");

  py::class_<bench::BenchReport>(m, "BenchReport")
      .def_property_readonly("exit_code", &bench::BenchReport::exit_code)
      .def_property_readonly("rows",
                             [](const bench::BenchReport& r) {
                               py::list rows;
                               for (const auto& res : r.results) rows.append(result_row(res.run.spec.label(), res));
                               return rows;
                             })
      .def_property_readonly("certificate",
                             [](const bench::BenchReport& r) -> py::object {
                               if (!r.certificate) return py::none();
                               return py::module_::import("json").attr("loads")(bench::certificate_json(*r.certificate));
                             })
      .def("metrics_csv", &bench::metrics_csv)
      .def("reference_field", [](const bench::BenchReport& r) { return physical_field(r.reference, r.setup); })
      .def("field", [](const bench::BenchReport& r, std::size_t i) {
        if (i >= r.results.size() || !r.results[i].run.ok) throw py::index_error("no field for this solver");
        return physical_field(r.results[i].run.on_grid, r.setup);
      }, py::arg("index"))
      .def("write", &bench::write_report, py::arg("dir"));

  m.def("run_case", &bench::run_case, py::arg("config"), py::call_guard<py::gil_scoped_release>(),
        "Solve and score every configured solver.");
  m.def("certify", [](const bench::RunConfig& c) {
    return py::module_::import("json").attr("loads")(bench::certificate_json(bench::certify(c)));
  }, py::arg("config"));
  m.def("sweep", [](const bench::RunConfig& c, const std::vector<std::size_t>& r_values) {
    const auto s = bench::sweep_resistances(c, r_values);
    py::list rows;
    for (const auto& row : s.rows) {
      py::dict d;
      d["r"] = row.r;
      d["ok"] = row.ok;
      d["field_eps_inf"] = row.field_eps_inf;
      d["flux_eps_inf"] = row.flux_eps_inf;
      d["error"] = row.error;
      rows.append(d);
    }
    return rows;
  }, py::arg("config"), py::arg("r_values"));

  m.def("synth_annual_bc", [](std::uint64_t seed) { return bc_dict(bench::synth_annual_bc(seed)); },
        py::arg("seed"));
  m.def("write_synth_bc", [](std::uint64_t seed, const std::filesystem::path& out) {
    bench::write_bc_csv(out, bench::synth_annual_bc(seed));
  }, py::arg("seed"), py::arg("out"));
  m.def("read_bc_csv", [](const std::filesystem::path& path) { return bc_dict(bench::read_bc_csv(path)); },
        py::arg("path"));

  m.def("cheb_eval", &spectral::cheb_eval, py::arg("coeffs"), py::arg("x"));
  m.def("derivative_coeffs_first", &spectral::derivative_coeffs_first, py::arg("coeffs"));
  m.def("derivative_coeffs_second", &spectral::derivative_coeffs_second, py::arg("coeffs"));
  m.def("cfl_max_step", &rc::cfl_max_step, py::arg("fo"), py::arg("dx_star"));
}
