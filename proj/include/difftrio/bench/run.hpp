#pragma once

#include "difftrio/bench/bc_io.hpp"
#include "difftrio/bench/cases.hpp"
#include "difftrio/bench/pipeline.hpp"
#include "difftrio/oracle/oracle.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace difftrio::bench {

enum class CaseId { heat = 1, moisture = 2, annual = 3 };

std::string case_name(CaseId id);

/**
 * Run configuration, read from a JSON file with `schema_version` 1:
 *
 *   case           "heat" | "moisture" | "annual"
 *   solvers        non-empty list of
 *                    {"type": "rc", "r": 2, "dt": "auto" | seconds, "cfl_fraction": 0.5}
 *                    {"type": "fdm", "cells": 100, "abs_tol": 1e-4, "rel_tol": 1e-4}
 *                    {"type": "spectral", "n": 6, "abs_tol", "rel_tol", "quadrature_nodes": 0}
 *   output         {"dir": "out", "x_cells": 0, "samples_per_unit": 1, "plots": true,
 *                   "timing_min_seconds": 0.2}
 *   reference      {"spectral_n": 0, "fdm_cells": 400, "spectral_tol": 1e-10, "fdm_tol": 1e-8}
 *   bc             {"csv": "", "discard_first_week": true, "seed": 1}   (annual case)
 *   jobs           worker threads, 0 = hardware concurrency
 *   notes          free text, ignored
 *
 * Relative paths are resolved against the directory of the config file.
 * Unknown keys are rejected.
 */
struct RunConfig {
  CaseId case_id{CaseId::heat};
  std::vector<SolverSpec> solvers;
  std::filesystem::path output_dir{"out"};
  std::size_t x_cells{0};  ///< 0: the FDM grid of the case
  double samples_per_unit{1.0};
  bool plots{true};
  double timing_min_seconds{0.2};
  oracle::ReferenceLevel reference;
  std::filesystem::path bc_csv;  ///< empty: synthetic climate from `seed`
  bool discard_first_week{true};
  std::uint64_t seed{1};
  unsigned jobs{0};
  std::string notes;

  void validate() const;
};

/// Throws ConfigurationError on a schema violation or an empty solver list.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Preset with the case's default solvers.
RunConfig preset(CaseId id);

/// Worker count: DIFFTRIO_JOBS when set, else `configured`, else the hardware concurrency.
unsigned resolve_jobs(unsigned configured);

struct CaseSetup {
  core::DiffusionProblem problem;
  core::DimensionlessProblem dimensionless;
  OutputGrid grid;
};

/// Builds the problem and lattice; reads or synthesizes the boundary series for the annual case.
CaseSetup setup_case(const RunConfig& config);

struct SolverResult {
  SolverRun run;
  std::optional<metrics::ErrorReport> report;
  std::string status;  ///< "ok" or "failed: <reason>"

  bool ok() const { return report.has_value(); }
};

struct BenchReport {
  RunConfig config;
  CaseSetup setup;
  core::SolutionField reference;
  std::string reference_kind;  ///< "oracle" or the label of the reference solver
  std::optional<oracle::Certificate> certificate;
  std::vector<SolverResult> results;

  /// 0 when every solver succeeded, 2 otherwise.
  int exit_code() const;
};

/**
 * Solves the case with every configured solver (in parallel) and scores each
 * against the certified oracle, or against the spectral solver for the annual
 * case. Solver failures are recorded per solver. Throws OracleDivergenceError
 * when the oracle cannot be certified.
 */
BenchReport run_case(const RunConfig& config);

/**
 * Writes metrics.csv, field_<solver>.csv, flux_<solver>.csv, eps2_profile.csv,
 * loads.csv, certificate.json and, if enabled, SVG plots into `dir`.
 */
void write_report(const BenchReport& report, const std::filesystem::path& dir);

/// Metrics CSV text, one row per configured solver.
std::string metrics_csv(const BenchReport& report);

/// Loads through the right (inside) surface over consecutive windows, physical units.
struct LoadTable {
  double window{0.0};
  std::vector<std::string> solvers;       ///< reference first
  std::vector<std::vector<double>> loads;  ///< loads[s][w]
};
LoadTable surface_loads(const BenchReport& report, double window_seconds);

/// Flux -kappa du/dx at `x_star` in physical units (W/m2 or kg/(m2.s)), times in seconds.
metrics::FluxSeries physical_surface_flux(const core::SolutionField& field, metrics::FluxMethod method,
                                          const CaseSetup& setup, double x_star);

struct SweepRow {
  std::size_t r{0};
  double field_eps_inf{0.0};
  double flux_eps_inf{0.0};
  bool ok{false};
  std::string error;
};

/// Threshold rules used to read a resistance sweep.
struct SweepThresholds {
  double field;
  double flux;
};
SweepThresholds sweep_thresholds(CaseId id);

struct SweepReport {
  CaseId case_id{CaseId::heat};
  std::vector<SweepRow> rows;
  oracle::Certificate certificate;

  /// First r whose error is below `threshold`, 0 if none.
  std::size_t first_field_below(double threshold) const;
  std::size_t first_flux_below(double threshold) const;
  int exit_code() const;
};

/// RC chains with the given resistance counts (non-empty, strictly ascending) against the oracle.
SweepReport sweep_resistances(const RunConfig& config, const std::vector<std::size_t>& r_values);
void write_sweep(const SweepReport& report, const std::filesystem::path& dir, bool plots = true);

/// Oracle certification of the configured case. A disagreement is reported with `certified` false.
oracle::Certificate certify(const RunConfig& config);
std::string certificate_json(const oracle::Certificate& c);

}  // namespace difftrio::bench
