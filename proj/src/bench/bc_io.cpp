#include "difftrio/bench/bc_io.hpp"

#include "difftrio/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>

namespace difftrio::bench {

namespace {

constexpr const char* header = "time_s,left,right";
constexpr const char* units_prefix = "# units:";

double parse_field(std::string_view text, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v))
    throw IngestionError("malformed number '" + std::string(text) + "'", line);
  return v;
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw ContractError("number formatting failed");
  return {buf.data(), ptr};
}

BcSeries parse_bc_csv(std::istream& in) {
  BcSeries s;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw IngestionError("empty file", 1);
  ++line_no;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (line != header) throw IngestionError("header must be '" + std::string(header) + "'", line_no);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') throw IngestionError("CR line ending", line_no);
    if (line.rfind('#', 0) == 0) {
      if (line_no != 2 || line.rfind(units_prefix, 0) != 0)
        throw IngestionError("only a '# units:' line directly after the header is allowed", line_no);
      s.units = line.substr(std::string_view(units_prefix).size());
      continue;
    }
    if (line.empty()) throw IngestionError("empty line", line_no);
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
      throw IngestionError("expected three comma-separated fields", line_no);
    const std::string_view view(line);
    const double t = parse_field(view.substr(0, c1), line_no);
    if (!s.time_s.empty() && !(t > s.time_s.back())) throw IngestionError("time is not strictly increasing", line_no);
    s.time_s.push_back(t);
    s.left.push_back(parse_field(view.substr(c1 + 1, c2 - c1 - 1), line_no));
    s.right.push_back(parse_field(view.substr(c2 + 1), line_no));
  }
  if (s.time_s.empty()) throw IngestionError("no data rows", line_no);
  return s;
}

BcSeries read_bc_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open " + path.string(), 0);
  return parse_bc_csv(in);
}

void write_bc_csv(std::ostream& out, const BcSeries& s) {
  if (s.left.size() != s.size() || s.right.size() != s.size()) throw ContractError("series columns differ in length");
  out << header << '\n';
  if (!s.units.empty()) out << units_prefix << s.units << '\n';
  for (std::size_t i = 0; i < s.size(); ++i)
    out << format_number(s.time_s[i]) << ',' << format_number(s.left[i]) << ',' << format_number(s.right[i]) << '\n';
}

void write_bc_csv(const std::filesystem::path& path, const BcSeries& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  write_bc_csv(out, s);
}

std::pair<core::BoundarySignal, core::BoundarySignal> ingest_bc(const BcSeries& s, const IngestOptions& opt) {
  if (s.size() == 0) throw IngestionError("no data rows", 0);
  // data rows start on line 2, or 3 after a units line
  const std::size_t first_line = s.units.empty() ? 2 : 3;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s.time_s[i] > s.time_s[i - 1])) throw IngestionError("time is not strictly increasing", first_line + i);
  if (s.size() > 1) {
    std::vector<double> gaps(s.size() - 1);
    for (std::size_t i = 1; i < s.size(); ++i) gaps[i - 1] = s.time_s[i] - s.time_s[i - 1];
    std::vector<double> sorted = gaps;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (std::size_t i = 0; i < gaps.size(); ++i)
      if (gaps[i] > opt.max_gap_factor * median)
        throw IngestionError("gap of " + format_number(gaps[i]) + " s exceeds " + format_number(opt.max_gap_factor) +
                                 " x the median spacing",
                             first_line + i + 1);
  }

  std::size_t start = 0;
  if (opt.discard_first_week) {
    const double cut = s.time_s.front() + 7.0 * 86400.0;
    while (start < s.size() && s.time_s[start] < cut) ++start;
    if (s.size() - start < 2) throw IngestionError("fewer than two rows left after discarding the first week", 0);
  }
  const double t0 = s.time_s[start];
  std::vector<double> t(s.time_s.begin() + static_cast<std::ptrdiff_t>(start), s.time_s.end());
  for (double& v : t) v -= t0;
  std::vector<double> l(s.left.begin() + static_cast<std::ptrdiff_t>(start), s.left.end());
  std::vector<double> r(s.right.begin() + static_cast<std::ptrdiff_t>(start), s.right.end());
  return {core::BoundarySignal::sampled(t, std::move(l)), core::BoundarySignal::sampled(std::move(t), std::move(r))};
}

std::pair<core::BoundarySignal, core::BoundarySignal> ingest_bc_csv(const std::filesystem::path& path,
                                                                    const IngestOptions& opt) {
  return ingest_bc(read_bc_csv(path), opt);
}

namespace {

// outside
constexpr double out_mean = 9.0;
constexpr double out_annual = 6.0;
constexpr double out_daily = 5.0;
constexpr double out_noise = 5.0;
constexpr double out_corr_h = 48.0;
constexpr double out_peak_day = 210.0;
// inside: heated room with a night setback while the heating season lasts
constexpr double in_mean = 20.0;
constexpr double in_annual = 1.0;
constexpr double in_daily = 0.5;
constexpr double in_setback = 3.0;
constexpr double in_noise = 1.0;
constexpr double in_corr_h = 24.0;

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace

SynthBounds synth_bounds() {
  const double lo_slack = 0.0005;
  return {out_mean - out_annual - out_daily - out_noise - lo_slack, out_mean + out_annual + out_daily + out_noise + lo_slack,
          in_mean - in_annual - in_daily - in_setback - in_noise - lo_slack, in_mean + in_annual + in_daily + in_noise + lo_slack};
}

BcSeries synth_annual_bc(std::uint64_t seed) {
  constexpr std::size_t hours = 8760;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // unit-variance AR(1) processes squashed by tanh, so |noise| < amplitude
  const double a_out = std::exp(-1.0 / out_corr_h);
  const double a_in = std::exp(-1.0 / in_corr_h);
  double z_out = gauss(rng);
  double z_in = gauss(rng);

  BcSeries s;
  s.units = " s, degC, degC";
  s.time_s.resize(hours);
  s.left.resize(hours);
  s.right.resize(hours);
  for (std::size_t h = 0; h < hours; ++h) {
    const double day = static_cast<double>(h) / 24.0;
    const double hour_of_day = static_cast<double>(h % 24);
    const double season = std::sin(two_pi * (day - out_peak_day + 365.0 / 4.0) / 365.0);
    const double daily = std::sin(two_pi * (hour_of_day - 9.0) / 24.0);
    s.time_s[h] = 3600.0 * static_cast<double>(h);
    s.left[h] = round3(out_mean + out_annual * season + out_daily * daily + out_noise * std::tanh(z_out));
    const bool night = hour_of_day >= 23.0 || hour_of_day < 6.0;
    const double setback = night ? in_setback * std::clamp(-season, 0.0, 1.0) : 0.0;
    s.right[h] = round3(in_mean + in_annual * season + in_daily * daily - setback + in_noise * std::tanh(z_in));
    z_out = a_out * z_out + std::sqrt(1.0 - a_out * a_out) * gauss(rng);
    z_in = a_in * z_in + std::sqrt(1.0 - a_in * a_in) * gauss(rng);
  }
  return s;
}

std::vector<double> init_linear_profile(double left_value, double right_value, std::span<const double> nodes) {
  std::vector<double> out(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double x = nodes[j];
    out[j] = x == 1.0 ? right_value : left_value + (right_value - left_value) * x;
  }
  return out;
}

}  // namespace difftrio::bench
