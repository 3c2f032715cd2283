#pragma once

#include "difftrio/core/model.hpp"

#include <cstddef>
#include <span>

namespace difftrio::oracle {

/// Resolution of the two certification solves.
struct ReferenceLevel {
  std::size_t spectral_n{0};  ///< 0 selects 24 (linear) or 32 (nonlinear)
  std::size_t fdm_cells{400};
  double spectral_tol{1e-10};
  double fdm_tol{1e-8};
  double threshold{0.0};  ///< 0 selects 1e-6 (linear) or 1e-5 (nonlinear)
};

struct Certificate {
  double cross_eps_inf{0.0};
  double threshold{0.0};
  std::size_t spectral_n{0};
  std::size_t fdm_cells{0};
  double spectral_seconds{0.0};
  double fdm_seconds{0.0};
  bool certified{false};
};

struct Reference {
  core::SolutionField field;  ///< high-order spectral solution on (x_out, t_out)
  Certificate certificate;
};

/// Fills the defaults of `level` for a linear or nonlinear problem.
ReferenceLevel resolve_level(const ReferenceLevel& level, bool linear);

/**
 * Spectral and finite-difference solves at high resolution, compared on the
 * finite-difference nodes. Throws OracleDivergenceError when their ε∞
 * disagreement reaches the threshold. The two solves run concurrently when
 * `concurrent` is set.
 */
Reference reference_solution(const core::DimensionlessProblem& p, const ReferenceLevel& level,
                             std::span<const double> x_out, std::span<const double> t_out, bool concurrent = true);

}  // namespace difftrio::oracle
