#pragma once

#include <vector>

#include "nlc/config.hpp"
#include "nlc/diagnostics.hpp"
#include "nlc/grid.hpp"

namespace nlc {

/// Block-average restriction of cell data (coarse dims must divide fine).
ScalarField restrict_cell(const ScalarField& f, const GridSpec& coarse);

/// Face-average restriction of MAC components; preserves the discrete
/// divergence-free property exactly.
MacVectorField restrict_mac(const MacVectorField& u, const GridSpec& coarse);

/// Block-average restriction of the director, renormalized back onto the
/// unit sphere afterwards (both runs satisfy the constraint).
DirectorField restrict_director(const DirectorField& d, const GridSpec& coarse,
                                bool renormalize = true);

State restrict_state(const State& s, const GridSpec& coarse,
                     bool renormalize_dir = true);

/// Piecewise-constant prolongation (used by tests).
ScalarField prolong_cell(const ScalarField& coarse, const GridSpec& fine);

struct ComparisonLevel {
  GridSpec grid;
  std::vector<RelEnergyRecord> records;
  double max_rel_energy = 0;
  double c_fit = 0;
};

struct ComparisonSummary {
  std::vector<ComparisonLevel> levels;     // in cfg.ws_coarse order
  std::vector<double> convergence_factors; // max_R[l] / max_R[l+1]
  double floor = 0;                        // envelope floor used
};

/// Runs the fine "strong" solution and each coarse surrogate from the same
/// restricted data, sampling the relative energy, the Gronwall weight, and
/// the fitted envelope at every ws.stride-th step.
ComparisonSummary compare_runs(const RunConfig& cfg);

}  // namespace nlc
