#include "difftrio/bench/bc_io.hpp"
#include "difftrio/bench/run.hpp"
#include "difftrio/errors.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace difftrio;

std::vector<std::size_t> parse_r_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + comma, value);
    if (ec != std::errc{} || ptr != text.data() + comma)
      throw ConfigurationError("--r expects comma-separated integers, got '" + text + "'");
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

void print_metrics(const bench::BenchReport& report) { std::cout << bench::metrics_csv(report); }

int cmd_run(const std::string& config_path) {
  const auto config = bench::load_run_config(config_path);
  const auto report = bench::run_case(config);
  bench::write_report(report, config.output_dir);
  print_metrics(report);
  std::cerr << "report written to " << config.output_dir.string() << '\n';
  return report.exit_code();
}

int cmd_sweep(const std::string& config_path, const std::string& r_list) {
  const auto config = bench::load_run_config(config_path);
  const auto report = bench::sweep_resistances(config, parse_r_list(r_list));
  bench::write_sweep(report, config.output_dir, config.plots);
  const auto thr = bench::sweep_thresholds(config.case_id);
  std::cout << "r,field_eps_inf,flux_eps_inf\n";
  for (const auto& row : report.rows) {
    if (row.ok)
      std::cout << row.r << ',' << bench::format_number(row.field_eps_inf) << ','
                << bench::format_number(row.flux_eps_inf) << '\n';
    else
      std::cout << row.r << ",,  # " << row.error << '\n';
  }
  const auto show = [](std::size_t r) { return r == 0 ? std::string("not reached") : std::to_string(r); };
  std::cout << "field below " << thr.field << " from r = " << show(report.first_field_below(thr.field)) << '\n'
            << "flux below " << thr.flux << " from r = " << show(report.first_flux_below(thr.flux)) << '\n';
  return report.exit_code();
}

int cmd_synth(std::uint64_t seed, const std::string& out) {
  bench::write_bc_csv(out, bench::synth_annual_bc(seed));
  std::cerr << "wrote " << out << '\n';
  return 0;
}

int cmd_oracle(const std::string& config_path) {
  const auto config = bench::load_run_config(config_path);
  const auto cert = bench::certify(config);
  std::filesystem::create_directories(config.output_dir);
  const auto text = bench::certificate_json(cert);
  std::ofstream(config.output_dir / "certificate.json", std::ios::binary) << text;
  std::cout << text;
  if (!cert.certified) std::cerr << "oracle divergence: cross eps_inf " << cert.cross_eps_inf << '\n';
  return cert.certified ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"difftrio: 1D diffusion solvers and benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string r_list;
  std::uint64_t seed = 1;
  std::string out_path;

  auto* run = app.add_subcommand("run", "Solve a case with every configured solver and write the report");
  run->add_option("config", config_path, "JSON run configuration")->required();

  auto* sweep = app.add_subcommand("sweep", "Error of RC chains against the oracle for several resistance counts");
  sweep->add_option("config", config_path, "JSON run configuration")->required();
  sweep->add_option("--r", r_list, "Ascending resistance counts, e.g. 2,5,10")->required();

  auto* synth = app.add_subcommand("synth-bc", "Write one year of synthetic hourly surface temperatures");
  synth->add_option("--seed", seed, "Random seed")->required();
  synth->add_option("--out", out_path, "Output CSV path")->required();

  auto* orc = app.add_subcommand("oracle", "Certify the reference solution of a case");
  orc->add_option("config", config_path, "JSON run configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*sweep) return cmd_sweep(config_path, r_list);
    if (*synth) return cmd_synth(seed, out_path);
    if (*orc) return cmd_oracle(config_path);
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const IngestionError& e) {
    std::cerr << "ingestion error: " << e.what() << '\n';
    return 1;
  } catch (const OracleDivergenceError& e) {
    std::cerr << "oracle divergence: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
