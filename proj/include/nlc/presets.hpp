#pragma once

#include "nlc/config.hpp"
#include "nlc/grid.hpp"

namespace nlc {

/// Builds the initial state for cfg's preset on the given grid (which may
/// differ from cfg's own grid; the harnesses rebuild presets per resolution).
/// The director is angle-parameterized so |d| = 1 holds exactly; the sampled
/// velocity is projected once so the discrete divergence is at solver
/// tolerance. Pressure starts at zero.
State make_initial_state(const RunConfig& cfg, const GridSpec& g);

inline State make_initial_state(const RunConfig& cfg) {
  return make_initial_state(cfg, grid_from(cfg));
}

}  // namespace nlc
