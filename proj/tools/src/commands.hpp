#pragma once

#include "run_config.hpp"
#include "table.hpp"

namespace wgscat::cli {

// (omega, T, arg t, arg r) rows, or (omega, |ratio|^2, arg ratio) for a single
// standing-wave mode, for every sweep point.
CommandResult cmd_spectrum(const RunConfig& cfg);

// Square-pulse transmission over (phi, g2T) for one of the preset panels, plus
// the monochromatic transmission at the carrier.
CommandResult cmd_map(const RunConfig& cfg);

// Channel probabilities (full and linear-only) and nonlinear norms.
CommandResult cmd_two_photon(const RunConfig& cfg);

// Grid scan followed by simplex refinement of one objective.
CommandResult cmd_optimize(const RunConfig& cfg);

// Invariant suites and a small oracle comparison.
CommandResult cmd_validate(const RunConfig& cfg);

CommandResult run_command(const RunConfig& cfg);

// Panel presets and default axes for the map.
RunConfig map_config(RunConfig cfg);

// Column names for sweep axes, with units.
std::vector<std::string> sweep_columns(const RunConfig& cfg);

}  // namespace wgscat::cli
