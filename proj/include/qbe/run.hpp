#pragma once

// End-to-end simulation driver: synthesize (or load) a state, march it to
// time T on the global clock t = k * dt, record diagnostics on a fixed
// stride, stream them to CSV, snapshot on a checkpoint stride, and fit
// decay laws over the configured window.
//
// The global step index is the source of truth for time: a resumed run
// recomputes t = (k0 + j) * dt, records at the same indices as the
// uninterrupted run, and therefore reproduces its CSV rows byte for byte.

#include <optional>
#include <string>
#include <vector>

#include "qbe/config.hpp"
#include "qbe/diagnostics.hpp"

namespace qbe {

struct RunResult {
  std::vector<EnergyReport> records;
  long long steps = 0;  // step() invocations performed
  // Fits are attempted only when the config enables a window; a fit that
  // cannot be formed (too few usable records) is left empty rather than
  // aborting the run.
  std::optional<DecayFit> fit_energy;    // power law for e_total
  std::optional<DecayFit> fit_velocity;  // power law for ||u||_2
  std::optional<DecayFit> fit_q_rate;    // exponential rate for ||Q||_2^2
};

RunResult run_simulation(const RunConfig& cfg);

// Continue from a snapshot under the same config (grid must match); the
// records cover the resumed segment only.
RunResult resume_simulation(const std::string& checkpoint_path, const RunConfig& cfg);

}  // namespace qbe
