#pragma once

// Shared fixtures for the unit tests: seeded random tensors and a shortcut
// for building initial states through the same synthesis path the CLI uses.

#include <cstdint>

#include "qbe/config.hpp"
#include "qbe/init.hpp"
#include "qbe/potential.hpp"
#include "qbe/rng.hpp"
#include "qbe/tensor.hpp"

namespace qbe::test {

inline SymTraceless3 random_q(SplitMix64& rng, double scale = 1.0) {
  SymTraceless3 q;
  for (auto& v : q.c) v = scale * rng.next_symmetric();
  return q;
}

inline Mat3 random_mat(SplitMix64& rng, double scale = 1.0) {
  Mat3 m;
  for (auto& v : m.m) v = scale * rng.next_symmetric();
  return m;
}

// State built exactly as the driver would: solenoidal_blob velocity plus
// band-limited random Q, validated against a confining potential.
inline State random_state(int n, double L, double amp_u, double amp_q,
                          std::uint64_t seed, double width = 1.0) {
  RunConfig cfg;
  cfg.grid.n = n;
  cfg.grid.L = L;
  cfg.init.u_kind = amp_u > 0.0 ? "solenoidal_blob" : "zero";
  cfg.init.q_kind = amp_q > 0.0 ? "random_smooth" : "zero";
  cfg.init.amplitude_u = amp_u;
  cfg.init.amplitude_q = amp_q;
  cfg.init.width = width;
  cfg.init.seed = seed;
  PolynomialPotential pot(1.0, 0.0, 1.0);
  return synthesize_initial_data(cfg, verify_hypotheses(pot));
}

}  // namespace qbe::test
