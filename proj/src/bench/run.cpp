#include "difftrio/bench/run.hpp"

#include "difftrio/bench/svg.hpp"
#include "difftrio/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace difftrio::bench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double day = 86400.0;
constexpr double month = 30.0 * day;

std::size_t default_cells(CaseId id) { return id == CaseId::annual ? 50 : 100; }

// ---- config parsing -------------------------------------------------------

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigurationError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items())
    if (!allowed.contains(key)) throw ConfigurationError("unknown key '" + key + "' in " + where);
}

template <class T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigurationError("bad type for '" + std::string(key) + "' in " + where);
  }
}

std::size_t get_count(const json& obj, const char* key, std::size_t fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigurationError("'" + std::string(key) + "' in " + where + " must be a non-negative integer");
  return static_cast<std::size_t>(v.get<long long>());
}

SolverSpec parse_solver(const json& j, std::size_t index) {
  const std::string where = "solvers[" + std::to_string(index) + "]";
  if (!j.is_object() || !j.contains("type")) throw ConfigurationError(where + " needs a \"type\"");
  const auto type = get_or<std::string>(j, "type", "", where);
  SolverSpec s;
  if (type == "rc") {
    allow_keys(j, where, {"type", "r", "dt", "cfl_fraction"});
    s = SolverSpec::rc_chain(get_count(j, "r", 0, where));
    const double fraction = get_or<double>(j, "cfl_fraction", 0.5, where);
    s.dt = rc::DtPolicy::automatic_fraction(fraction);
    if (j.contains("dt")) {
      const auto& dt = j.at("dt");
      if (dt.is_string()) {
        if (dt.get<std::string>() != "auto") throw ConfigurationError(where + ": dt must be \"auto\" or seconds");
      } else if (dt.is_number()) {
        s.dt = rc::DtPolicy::fixed_step(dt.get<double>());
      } else {
        throw ConfigurationError(where + ": dt must be \"auto\" or seconds");
      }
    }
    if (s.dt.kind == rc::DtPolicy::Kind::automatic && (!(fraction > 0.0) || fraction > 1.0))
      throw ConfigurationError(where + ": cfl_fraction must lie in (0, 1]");
  } else if (type == "fdm") {
    allow_keys(j, where, {"type", "cells", "abs_tol", "rel_tol"});
    s = SolverSpec::finite_difference(get_count(j, "cells", 0, where));
  } else if (type == "spectral") {
    allow_keys(j, where, {"type", "n", "abs_tol", "rel_tol", "quadrature_nodes"});
    s = SolverSpec::chebyshev(get_count(j, "n", 0, where));
    s.quadrature_nodes = get_count(j, "quadrature_nodes", 0, where);
  } else {
    throw ConfigurationError(where + ": unknown solver type '" + type + "'");
  }
  s.tol.abs_tol = get_or<double>(j, "abs_tol", s.tol.abs_tol, where);
  s.tol.rel_tol = get_or<double>(j, "rel_tol", s.tol.rel_tol, where);
  try {
    s.validate();
  } catch (const Error& e) {
    throw ConfigurationError(where + ": " + e.what());
  }
  return s;
}

CaseId parse_case(const std::string& name) {
  if (name == "heat") return CaseId::heat;
  if (name == "moisture") return CaseId::moisture;
  if (name == "annual") return CaseId::annual;
  throw ConfigurationError("unknown case '" + name + "' (expected heat, moisture or annual)");
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

// ---- workers --------------------------------------------------------------

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1u, jobs));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
}

// ---- output helpers -------------------------------------------------------

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return s;
}

std::string file_safe(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
  return s;
}

/// Labels made unique with the solver knobs when two entries would collide.
std::vector<std::string> display_names(const std::vector<SolverResult>& results) {
  std::map<std::string, int> seen;
  for (const auto& r : results) ++seen[r.run.spec.label()];
  std::vector<std::string> names;
  std::map<std::string, int> used;
  for (const auto& r : results) {
    const auto& s = r.run.spec;
    std::string name = s.label();
    if (seen[name] > 1) {
      if (s.kind == SolverKind::fdm) name += std::to_string(s.cells);
      if (s.kind == SolverKind::spectral) name += std::to_string(s.n);
    }
    if (const int k = ++used[name]; k > 1) name += "_" + std::to_string(k);
    names.push_back(name);
  }
  return names;
}

double flux_factor(const CaseSetup& setup) {
  const auto& p = setup.problem;
  const auto& dp = setup.dimensionless;
  if (p.physics == core::Physics::heat) return p.heat().k * dp.value_scale / p.length;
  return dp.constitutive.kappa_ref() * dp.value_scale / p.length;
}

std::string value_unit(const CaseSetup& setup) {
  return setup.problem.physics == core::Physics::heat ? "degC" : "Pa";
}

std::string flux_unit(const CaseSetup& setup) {
  return setup.problem.physics == core::Physics::heat ? "W/m2" : "kg/(m2.s)";
}

std::string load_unit(const CaseSetup& setup) {
  return setup.problem.physics == core::Physics::heat ? "J/m2" : "kg/m2";
}

void write_field_csv(const fs::path& path, const core::SolutionField& f, const CaseSetup& setup) {
  std::ostringstream os;
  os << "time_s";
  for (double x : f.x_nodes) os << ',' << format_number(x * setup.problem.length);
  os << '\n';
  for (std::size_t m = 0; m < f.t_samples.size(); ++m) {
    os << format_number(f.t_samples[m] * setup.problem.t_ref);
    for (Eigen::Index j = 0; j < f.values.cols(); ++j)
      os << ',' << format_number(f.values(static_cast<Eigen::Index>(m), j) * setup.dimensionless.value_scale);
    os << '\n';
  }
  write_text(path, os.str());
}

struct SurfaceFlux {
  metrics::FluxSeries left;
  metrics::FluxSeries right;
};

SurfaceFlux surface_flux(const core::SolutionField& field, metrics::FluxMethod method, const CaseSetup& setup) {
  return {physical_surface_flux(field, method, setup, 0.0), physical_surface_flux(field, method, setup, 1.0)};
}

std::vector<double> hours(const std::vector<double>& t_star, double t_ref) {
  std::vector<double> h(t_star.size());
  for (std::size_t m = 0; m < t_star.size(); ++m) h[m] = t_star[m] * t_ref / 3600.0;
  return h;
}

void write_plots(const BenchReport& report, const std::vector<std::string>& names, const fs::path& dir) {
  const auto& setup = report.setup;
  const double scale = setup.dimensionless.value_scale;
  const double length = setup.problem.length;
  const std::string title = case_name(report.config.case_id);

  std::vector<const core::SolutionField*> fields{&report.reference};
  std::vector<const core::SolutionField*> natives{&report.reference};
  std::vector<std::string> labels{"Reference"};
  std::vector<metrics::FluxMethod> methods{metrics::FluxMethod::spectral};
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    if (!report.results[i].run.ok) continue;
    fields.push_back(&report.results[i].run.on_grid);
    natives.push_back(&report.results[i].run.native);
    labels.push_back(names[i]);
    methods.push_back(flux_method(report.results[i].run.spec));
  }

  std::vector<PlotSeries> profile;
  std::vector<PlotSeries> history;
  for (std::size_t s = 0; s < fields.size(); ++s) {
    const auto& f = *fields[s];
    PlotSeries p{labels[s], {}, {}};
    for (std::size_t j = 0; j < f.x_nodes.size(); ++j) {
      p.x.push_back(f.x_nodes[j] * length);
      p.y.push_back(f.values(f.values.rows() - 1, static_cast<Eigen::Index>(j)) * scale);
    }
    profile.push_back(std::move(p));
    const auto mid = static_cast<Eigen::Index>(f.x_nodes.size() / 2);
    PlotSeries h{labels[s], hours(f.t_samples, setup.problem.t_ref), {}};
    for (Eigen::Index m = 0; m < f.values.rows(); ++m) h.y.push_back(f.values(m, mid) * scale);
    history.push_back(std::move(h));
  }
  write_text(dir / "profile_final.svg",
             line_plot_svg(profile, {title + ": final profile", "x [m]", value_unit(setup)}));
  const double x_mid = report.reference.x_nodes[report.reference.x_nodes.size() / 2] * length;
  write_text(dir / "history_midwall.svg",
             line_plot_svg(history, {title + ": history at x = " + format_number(x_mid) + " m", "t [h]",
                                     value_unit(setup)}));

  std::vector<PlotSeries> flux;
  for (std::size_t s = 0; s < fields.size(); ++s) {
    const auto q = physical_surface_flux(*natives[s], methods[s], setup, 1.0);
    PlotSeries p{labels[s], {}, q.q};
    for (double t : q.t_samples) p.x.push_back(t / 3600.0);
    flux.push_back(std::move(p));
  }
  write_text(dir / "flux_right.svg",
             line_plot_svg(flux, {title + ": flux at the right surface", "t [h]", flux_unit(setup)}));

  std::vector<PlotSeries> eps;
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    const auto& r = report.results[i];
    if (!r.ok()) continue;
    PlotSeries p{names[i], {}, r.report->eps2_profile};
    for (double x : r.report->x) p.x.push_back(x * length);
    eps.push_back(std::move(p));
  }
  PlotAxes eps_axes{title + ": RMS error profile", "x [m]", "eps2 (dimensionless)"};
  eps_axes.log_y = true;
  write_text(dir / "eps2_profile.svg", line_plot_svg(eps, eps_axes));

  const double horizon = setup.problem.horizon;
  for (const auto& [window, name] : {std::pair{day, std::string("daily")}, std::pair{month, std::string("monthly")}}) {
    if (horizon + 1e-6 < window) continue;
    const auto table = surface_loads(report, window);
    std::vector<std::string> groups;
    for (std::size_t w = 0; w < table.loads.front().size(); ++w) groups.push_back(std::to_string(w + 1));
    std::vector<std::vector<double>> mj = table.loads;
    for (auto& row : mj)
      for (double& v : row) v *= setup.problem.physics == core::Physics::heat ? 1e-6 : 1.0;
    write_text(dir / ("loads_" + name + ".svg"),
               bar_chart_svg(groups, table.solvers, mj,
                             {title + ": " + name + " loads at the right surface", name == "daily" ? "day" : "month",
                              setup.problem.physics == core::Physics::heat ? "MJ/m2" : "kg/m2"}));
  }
}

}  // namespace

// ---- config ---------------------------------------------------------------

std::string case_name(CaseId id) {
  switch (id) {
    case CaseId::heat: return "heat";
    case CaseId::moisture: return "moisture";
    case CaseId::annual: return "annual";
  }
  return "?";
}

void RunConfig::validate() const {
  if (solvers.empty()) throw ConfigurationError("the solver list is empty");
  for (const auto& s : solvers) s.validate();
  if (!(samples_per_unit > 0.0)) throw ConfigurationError("samples_per_unit must be positive");
  if (!(timing_min_seconds >= 0.0)) throw ConfigurationError("timing_min_seconds must be non-negative");
  if (reference.fdm_cells < 2) throw ConfigurationError("reference fdm_cells must be at least 2");
}

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(std::string("config is not valid JSON: ") + e.what());
  }
  allow_keys(j, "config", {"schema_version", "case", "solvers", "output", "reference", "bc", "jobs", "notes"});
  if (get_or<int>(j, "schema_version", 0, "config") != 1)
    throw ConfigurationError("config needs \"schema_version\": 1");
  if (!j.contains("case")) throw ConfigurationError("config needs a \"case\"");

  RunConfig c;
  c.case_id = parse_case(get_or<std::string>(j, "case", "", "config"));
  c.notes = get_or<std::string>(j, "notes", "", "config");
  c.jobs = static_cast<unsigned>(get_count(j, "jobs", 0, "config"));

  if (!j.contains("solvers") || !j.at("solvers").is_array())
    throw ConfigurationError("config needs a \"solvers\" list");
  const auto& solvers = j.at("solvers");
  if (solvers.empty()) throw ConfigurationError("the solver list is empty");
  for (std::size_t i = 0; i < solvers.size(); ++i) c.solvers.push_back(parse_solver(solvers[i], i));

  if (j.contains("output")) {
    const auto& o = j.at("output");
    allow_keys(o, "output", {"dir", "x_cells", "samples_per_unit", "plots", "timing_min_seconds"});
    c.output_dir = get_or<std::string>(o, "dir", c.output_dir.string(), "output");
    c.x_cells = get_count(o, "x_cells", 0, "output");
    c.samples_per_unit = get_or<double>(o, "samples_per_unit", 1.0, "output");
    c.plots = get_or<bool>(o, "plots", true, "output");
    c.timing_min_seconds = get_or<double>(o, "timing_min_seconds", c.timing_min_seconds, "output");
  }
  c.output_dir = resolve(base_dir, c.output_dir);

  if (j.contains("reference")) {
    const auto& r = j.at("reference");
    allow_keys(r, "reference", {"spectral_n", "fdm_cells", "spectral_tol", "fdm_tol"});
    c.reference.spectral_n = get_count(r, "spectral_n", 0, "reference");
    c.reference.fdm_cells = get_count(r, "fdm_cells", c.reference.fdm_cells, "reference");
    c.reference.spectral_tol = get_or<double>(r, "spectral_tol", c.reference.spectral_tol, "reference");
    c.reference.fdm_tol = get_or<double>(r, "fdm_tol", c.reference.fdm_tol, "reference");
  }

  if (j.contains("bc")) {
    const auto& b = j.at("bc");
    allow_keys(b, "bc", {"csv", "discard_first_week", "seed"});
    c.bc_csv = resolve(base_dir, get_or<std::string>(b, "csv", "", "bc"));
    c.discard_first_week = get_or<bool>(b, "discard_first_week", true, "bc");
    c.seed = get_or<std::uint64_t>(b, "seed", 1, "bc");
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path.parent_path());
}

RunConfig preset(CaseId id) {
  RunConfig c;
  c.case_id = id;
  c.solvers = default_solvers(static_cast<int>(id));
  c.output_dir = fs::path("out") / case_name(id);
  return c;
}

unsigned resolve_jobs(unsigned configured) {
  if (const char* env = std::getenv("DIFFTRIO_JOBS"); env && *env) {
    const std::string_view text(env);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0)
      throw ConfigurationError("DIFFTRIO_JOBS must be a positive integer, got '" + std::string(text) + "'");
    return value;
  }
  if (configured > 0) return configured;
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---- runs -----------------------------------------------------------------

CaseSetup setup_case(const RunConfig& config) {
  CaseSetup s;
  switch (config.case_id) {
    case CaseId::heat: s.problem = case_heat(); break;
    case CaseId::moisture: s.problem = case_moisture(); break;
    case CaseId::annual: {
      const BcSeries series = config.bc_csv.empty() ? synth_annual_bc(config.seed) : read_bc_csv(config.bc_csv);
      IngestOptions opt;
      opt.discard_first_week = config.discard_first_week;
      const auto [left, right] = ingest_bc(series, opt);
      s.problem = case_annual(left, right);
      break;
    }
  }
  s.dimensionless = core::nondimensionalize(s.problem);
  const std::size_t cells = config.x_cells > 0 ? config.x_cells : default_cells(config.case_id);
  s.grid = OutputGrid::uniform(cells, s.dimensionless.horizon, config.samples_per_unit);
  return s;
}

int BenchReport::exit_code() const {
  for (const auto& r : results)
    if (!r.ok()) return 2;
  return 0;
}

BenchReport run_case(const RunConfig& config) {
  config.validate();
  BenchReport report;
  report.config = config;
  report.setup = setup_case(config);
  const auto& setup = report.setup;
  const unsigned jobs = resolve_jobs(config.jobs);
  const double timing = config.timing_min_seconds;

  if (config.case_id != CaseId::annual) {
    auto ref = oracle::reference_solution(setup.dimensionless, config.reference, setup.grid.x, setup.grid.t, jobs > 1);
    report.reference = std::move(ref.field);
    report.certificate = ref.certificate;
    report.reference_kind = "oracle";
  }

  report.results.resize(config.solvers.size());
  parallel_for(config.solvers.size(), jobs, [&](std::size_t i) {
    report.results[i].run = run_solver(setup.problem, setup.dimensionless, config.solvers[i], setup.grid, timing);
  });

  std::string reference_error;
  if (config.case_id == CaseId::annual) {
    const auto it = std::find_if(report.results.begin(), report.results.end(),
                                 [](const SolverResult& r) { return r.run.spec.kind == SolverKind::spectral; });
    SolverRun ref = it != report.results.end()
                        ? it->run
                        : run_solver(setup.problem, setup.dimensionless, SolverSpec::chebyshev(12), setup.grid);
    report.reference_kind = ref.spec.label() + " n=" + std::to_string(ref.spec.n);
    if (ref.ok) {
      report.reference = ref.native;
    } else {
      reference_error = "reference solver failed: " + ref.error;
    }
  }

  for (auto& r : report.results) {
    if (!r.run.ok) {
      r.status = "failed: " + csv_safe(r.run.error);
      continue;
    }
    if (!reference_error.empty()) {
      r.status = "failed: " + csv_safe(reference_error);
      continue;
    }
    try {
      r.report = evaluate(r.run, report.reference, setup.dimensionless);
      r.status = "ok";
    } catch (const std::exception& e) {
      r.status = "failed: " + csv_safe(e.what());
    }
  }
  return report;
}

metrics::FluxSeries physical_surface_flux(const core::SolutionField& field, metrics::FluxMethod method,
                                          const CaseSetup& setup, double x_star) {
  const auto law = setup.dimensionless.constitutive;
  auto q = metrics::flux(field, method, [law](double v) { return law.kappa(v); }, x_star);
  const double factor = flux_factor(setup);
  for (double& v : q.q) v *= factor;
  for (double& t : q.t_samples) t *= setup.problem.t_ref;
  q.x0 = x_star * setup.problem.length;
  return q;
}

LoadTable surface_loads(const BenchReport& report, double window_seconds) {
  LoadTable table;
  table.window = window_seconds;
  table.solvers.push_back("Reference");
  table.loads.push_back(metrics::window_loads(
      physical_surface_flux(report.reference, metrics::FluxMethod::spectral, report.setup, 1.0), window_seconds));
  const auto names = display_names(report.results);
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    const auto& r = report.results[i];
    if (!r.run.ok) continue;
    table.solvers.push_back(names[i]);
    table.loads.push_back(metrics::window_loads(
        physical_surface_flux(r.run.native, flux_method(r.run.spec), report.setup, 1.0), window_seconds));
  }
  return table;
}

std::string metrics_csv(const BenchReport& report) {
  const auto names = display_names(report.results);
  std::ostringstream os;
  os << "solver,field_eps_inf,flux_eps_inf,scd,r_cpu_ms_per_h,status\n";
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    const auto& r = report.results[i];
    os << names[i] << ',';
    if (r.ok())
      os << format_number(r.report->eps_inf) << ',' << format_number(r.report->flux_eps_inf) << ','
         << format_number(r.report->scd) << ',' << format_number(r.report->r_cpu_ms_per_h);
    else
      os << ",,,";
    os << ',' << r.status << '\n';
  }
  return os.str();
}

std::string certificate_json(const oracle::Certificate& c) {
  json j{{"cross_eps_inf", c.cross_eps_inf}, {"threshold", c.threshold},
         {"spectral_n", c.spectral_n},       {"fdm_cells", c.fdm_cells},
         {"spectral_seconds", c.spectral_seconds}, {"fdm_seconds", c.fdm_seconds},
         {"certified", c.certified}};
  return j.dump(2) + "\n";
}

void write_report(const BenchReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  const auto& setup = report.setup;
  const auto names = display_names(report.results);
  write_text(dir / "metrics.csv", metrics_csv(report));

  if (report.certificate) {
    write_text(dir / "certificate.json", certificate_json(*report.certificate));
  } else {
    write_text(dir / "certificate.json", json{{"reference", report.reference_kind}}.dump(2) + "\n");
  }

  for (std::size_t i = 0; i < report.results.size(); ++i) {
    const auto& r = report.results[i];
    if (!r.run.ok) continue;
    write_field_csv(dir / ("field_" + file_safe(names[i]) + ".csv"), r.run.on_grid, setup);
    const auto q = surface_flux(r.run.native, flux_method(r.run.spec), setup);
    std::ostringstream os;
    os << "time_s,left,right\n";
    for (std::size_t m = 0; m < q.left.q.size(); ++m)
      os << format_number(q.left.t_samples[m]) << ',' << format_number(q.left.q[m] + 0.0) << ','
         << format_number(q.right.q[m] + 0.0) << '\n';
    write_text(dir / ("flux_" + file_safe(names[i]) + ".csv"), os.str());
  }

  {
    std::ostringstream os;
    os << "x_m";
    for (std::size_t i = 0; i < report.results.size(); ++i) os << ',' << names[i];
    os << '\n';
    for (std::size_t j = 0; j < setup.grid.x.size(); ++j) {
      os << format_number(setup.grid.x[j] * setup.problem.length);
      for (const auto& r : report.results) {
        os << ',';
        if (r.ok()) os << format_number(r.report->eps2_profile[j]);
      }
      os << '\n';
    }
    write_text(dir / "eps2_profile.csv", os.str());
  }

  if (!report.reference.values.size()) return;
  {
    std::ostringstream os;
    bool header = false;
    for (const auto& [window, name] : {std::pair{day, "day"}, std::pair{month, "month"}}) {
      if (setup.problem.horizon + 1e-6 < window) continue;
      const auto table = surface_loads(report, window);
      if (!header) {
        os << "period,index,start_s";
        for (const auto& s : table.solvers) os << ',' << s;
        os << '\n';
        header = true;
      }
      for (std::size_t w = 0; w < table.loads.front().size(); ++w) {
        os << name << ',' << w << ',' << format_number(window * static_cast<double>(w));
        for (const auto& row : table.loads) os << ',' << format_number(row[w]);
        os << '\n';
      }
    }
    if (header) write_text(dir / "loads.csv", "# units: " + load_unit(setup) + "\n" + os.str());
  }
  if (report.config.plots) write_plots(report, names, dir);
}

// ---- sweeps and certification -------------------------------------------

SweepThresholds sweep_thresholds(CaseId id) {
  // Field: ten times the integrator tolerance. The vapour case is read one decade looser on both.
  if (id == CaseId::moisture) return {1e-2, 1e-1};
  return {1e-3, 1e-2};
}

std::size_t SweepReport::first_field_below(double threshold) const {
  for (const auto& r : rows)
    if (r.ok && r.field_eps_inf < threshold) return r.r;
  return 0;
}

std::size_t SweepReport::first_flux_below(double threshold) const {
  for (const auto& r : rows)
    if (r.ok && r.flux_eps_inf < threshold) return r.r;
  return 0;
}

int SweepReport::exit_code() const {
  for (const auto& r : rows)
    if (!r.ok) return 2;
  return 0;
}

SweepReport sweep_resistances(const RunConfig& config, const std::vector<std::size_t>& r_values) {
  if (config.case_id == CaseId::annual)
    throw ConfigurationError("resistance sweeps need an oracle and are defined for the heat and moisture cases");
  if (r_values.empty()) throw ConfigurationError("the list of resistance counts is empty");
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    if (r_values[i] < 2) throw ConfigurationError("resistance counts must be at least 2");
    if (i > 0 && r_values[i] <= r_values[i - 1])
      throw ConfigurationError("resistance counts must be strictly ascending");
  }
  const CaseSetup setup = setup_case(config);
  const unsigned jobs = resolve_jobs(config.jobs);
  const auto ref =
      oracle::reference_solution(setup.dimensionless, config.reference, setup.grid.x, setup.grid.t, jobs > 1);

  rc::DtPolicy dt;
  for (const auto& s : config.solvers)
    if (s.kind == SolverKind::rc) {
      dt = s.dt;
      break;
    }

  SweepReport report;
  report.case_id = config.case_id;
  report.certificate = ref.certificate;
  report.rows.resize(r_values.size());
  parallel_for(r_values.size(), jobs, [&](std::size_t i) {
    SolverSpec spec = SolverSpec::rc_chain(r_values[i]);
    spec.dt = dt;
    SweepRow& row = report.rows[i];
    row.r = r_values[i];
    const SolverRun run = run_solver(setup.problem, setup.dimensionless, spec, setup.grid);
    if (!run.ok) {
      row.error = run.error;
      return;
    }
    try {
      const auto rep = evaluate(run, ref.field, setup.dimensionless);
      row.field_eps_inf = rep.eps_inf;
      row.flux_eps_inf = rep.flux_eps_inf;
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return report;
}

void write_sweep(const SweepReport& report, const fs::path& dir, bool plots) {
  fs::create_directories(dir);
  std::ostringstream os;
  os << "r,field_eps_inf,flux_eps_inf,status\n";
  for (const auto& r : report.rows) {
    os << r.r << ',';
    if (r.ok)
      os << format_number(r.field_eps_inf) << ',' << format_number(r.flux_eps_inf) << ",ok\n";
    else
      os << ",,failed: " << csv_safe(r.error) << '\n';
  }
  write_text(dir / "sweep.csv", os.str());
  write_text(dir / "certificate.json", certificate_json(report.certificate));
  if (!plots) return;
  PlotSeries field{"field", {}, {}};
  PlotSeries flux{"flux", {}, {}};
  for (const auto& r : report.rows) {
    if (!r.ok) continue;
    field.x.push_back(static_cast<double>(r.r));
    field.y.push_back(r.field_eps_inf);
    flux.x.push_back(static_cast<double>(r.r));
    flux.y.push_back(r.flux_eps_inf);
  }
  PlotAxes axes{case_name(report.case_id) + ": error against the number of resistances", "r", "eps_inf"};
  axes.log_x = true;
  axes.log_y = true;
  write_text(dir / "sweep.svg", line_plot_svg({field, flux}, axes));
}

oracle::Certificate certify(const RunConfig& config) {
  const CaseSetup setup = setup_case(config);
  const bool linear = setup.dimensionless.constitutive.is_unit();
  const auto level = oracle::resolve_level(config.reference, linear);
  try {
    return oracle::reference_solution(setup.dimensionless, level, setup.grid.x, setup.grid.t,
                                      resolve_jobs(config.jobs) > 1)
        .certificate;
  } catch (const OracleDivergenceError& e) {
    oracle::Certificate c;
    c.cross_eps_inf = e.cross_error();
    c.threshold = level.threshold;
    c.spectral_n = level.spectral_n;
    c.fdm_cells = level.fdm_cells;
    c.certified = false;
    return c;
  }
}

}  // namespace difftrio::bench
