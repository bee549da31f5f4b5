#pragma once

// Initial-data synthesis.  Fields are built from the config alone (plus
// the potential's confinement radius r2 for validation): a seeded
// splitmix-style generator drives all randomness, so a given (config,
// seed, n) reproduces the same state bit for bit.

#include "qbe/config.hpp"
#include "qbe/dynamics.hpp"

namespace qbe {

// u kinds: zero | solenoidal_blob (Gaussian envelope, mean removed, Leray
// projected) | taylor_green (deterministic single-wavenumber cell).
// q kinds: zero | gaussian_blob (one traceless direction times a Gaussian
// envelope) | random_smooth (band-limited random modes).  Nonzero q fields
// are rescaled so ||Q_0||_inf equals amplitude_q exactly; amplitude_q
// above the confinement radius r2 is rejected.
State synthesize_initial_data(const RunConfig& cfg, const PotentialHypothesesReport& pr);

}  // namespace qbe
