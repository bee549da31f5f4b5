#pragma once

// Binary state snapshots.  Layout (all multi-byte values little-endian):
//   bytes 0..4   magic "BEDL1"
//   uint64       n
//   float64      L
//   float64      t
//   float64[3 n^3]  u components, component-major, x-fastest
//   float64[5 n^3]  Q components (basis of tensor.hpp), same order
// Snapshots hold the exact bit pattern of the real samples, which is what
// makes interrupted runs resumable bit-for-bit.

#include <stdexcept>
#include <string>

#include "qbe/field.hpp"

namespace qbe {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Snapshot {
  PeriodicGrid grid;
  double t = 0.0;
  VecField u;
  QField q;
};

void save_checkpoint(const std::string& path, VecField& u, QField& q, double t);
Snapshot load_checkpoint(const std::string& path);

}  // namespace qbe
