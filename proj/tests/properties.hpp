#pragma once

#include <cstdint>
#include <cstddef>

// Property measurements shared by the unit tests and the acceptance binary.
namespace difftrio::testing {

/// Largest gap between the Chebyshev derivative recurrences and a 7-point central difference, orders 2..8.
double chebyshev_fd_discrepancy(std::uint64_t seed);

/// Largest relative gap between the RC node balance and the FDM right-hand side of the heat preset.
double rc_fdm_rhs_discrepancy(std::uint64_t seed);

/// Growth max|y(end)| / max|y(0)| of explicit Euler on an r-link chain at `fraction` of the CFL step.
double cfl_growth(std::size_t r, double fraction, std::size_t steps);

/// Largest departure from the linear steady profile over FDM, RC and spectral runs.
double steady_profile_drift();

/// Measured sup of the one-sided flux perturbation from +-delta node noise, divided by 2 delta / dx.
double flux_noise_ratio(std::uint64_t seed);

/// Largest error of the certified oracle on the decaying sine mode.
double sine_decay_oracle_error();

/// Same seed gives identical synthetic files and identical run CSVs.
bool seeded_runs_deterministic();

}  // namespace difftrio::testing
