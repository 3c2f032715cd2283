#pragma once

#include "difftrio/core/model.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace difftrio::bench {

/// Boundary time series in the `time_s,left,right` CSV layout.
struct BcSeries {
  std::vector<double> time_s;
  std::vector<double> left;
  std::vector<double> right;
  std::string units;  ///< text after "# units:", empty when absent

  std::size_t size() const { return time_s.size(); }
};

struct IngestOptions {
  bool discard_first_week{false};
  double max_gap_factor{2.0};  ///< gaps above this multiple of the median spacing are rejected
};

/// Strict parser. Throws IngestionError with the offending line number.
BcSeries parse_bc_csv(std::istream& in);
BcSeries read_bc_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form, LF line endings.
void write_bc_csv(std::ostream& out, const BcSeries& s);
void write_bc_csv(const std::filesystem::path& path, const BcSeries& s);

/// Checks ordering and gaps, optionally drops the first seven days and shifts time to start at 0.
std::pair<core::BoundarySignal, core::BoundarySignal> ingest_bc(const BcSeries& s, const IngestOptions& opt = {});
std::pair<core::BoundarySignal, core::BoundarySignal> ingest_bc_csv(const std::filesystem::path& path,
                                                                    const IngestOptions& opt = {});

/// Envelope of the synthetic climate; every generated value lies inside these bounds.
struct SynthBounds {
  double left_min, left_max, right_min, right_max;
};
SynthBounds synth_bounds();

/**
 * One year of hourly surface temperatures [°C] (8760 rows). Outside: annual
 * and daily sines plus smooth bounded noise with a correlation time of a few
 * days. Inside: a heated room, warmer than outside in every month. Values are
 * rounded to 1e-3 °C and depend only on `seed`.
 */
BcSeries synth_annual_bc(std::uint64_t seed);

/// Affine profile between `left_value` and `right_value` over the nodes (x in [0, 1]).
std::vector<double> init_linear_profile(double left_value, double right_value, std::span<const double> nodes);

/// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

}  // namespace difftrio::bench
