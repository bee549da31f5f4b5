#pragma once

// Grid fields with NC components per point.  Both representations (real
// samples and spectral coefficients) are stored with validity flags; the
// transform pair is the normalized one from SpectralWorkspace, so when
// both flags are set the representations agree to transform round-off.
//
// Mutation is explicit: *_overwrite() discards the other representation,
// *_rw() syncs first and then invalidates it.  Const accessors require a
// valid representation (no lazy transforms behind const reads, so shared
// read-only use across threads is safe).

#include <cassert>
#include <vector>

#include "qbe/grid.hpp"

namespace qbe {

template <int NC>
class GridField {
 public:
  static_assert(NC >= 1);

  explicit GridField(const PeriodicGrid& g)
      : grid_(g), re_(NC * g.n_real(), 0.0), re_valid_(true), sp_valid_(false) {
    assert(g.valid());
  }

  const PeriodicGrid& grid() const { return grid_; }
  static constexpr int components() { return NC; }

  bool real_valid() const { return re_valid_; }
  bool spec_valid() const { return sp_valid_; }

  std::span<const double> real(int c) const {
    assert(re_valid_ && c >= 0 && c < NC);
    return {re_.data() + std::size_t(c) * grid_.n_real(), grid_.n_real()};
  }
  std::span<const cplx> spec(int c) const {
    assert(sp_valid_ && c >= 0 && c < NC);
    return {sp_.data() + std::size_t(c) * grid_.n_spec(), grid_.n_spec()};
  }

  std::span<double> real_overwrite(int c) {
    touch_real();
    re_valid_ = true;
    sp_valid_ = false;
    return {re_.data() + std::size_t(c) * grid_.n_real(), grid_.n_real()};
  }
  std::span<cplx> spec_overwrite(int c) {
    touch_spec();
    sp_valid_ = true;
    re_valid_ = false;
    return {sp_.data() + std::size_t(c) * grid_.n_spec(), grid_.n_spec()};
  }

  std::span<double> real_rw(int c) {
    sync_real();
    sp_valid_ = false;
    return {re_.data() + std::size_t(c) * grid_.n_real(), grid_.n_real()};
  }
  std::span<cplx> spec_rw(int c) {
    sync_spec();
    re_valid_ = false;
    return {sp_.data() + std::size_t(c) * grid_.n_spec(), grid_.n_spec()};
  }

  void sync_real() {
    if (re_valid_) return;
    assert(sp_valid_);
    touch_real();
    const auto& ws = workspace_for(grid_);
    for (int c = 0; c < NC; ++c)
      ws.backward({sp_.data() + std::size_t(c) * grid_.n_spec(), grid_.n_spec()},
                  {re_.data() + std::size_t(c) * grid_.n_real(), grid_.n_real()});
    re_valid_ = true;
  }
  void sync_spec() {
    if (sp_valid_) return;
    assert(re_valid_);
    touch_spec();
    const auto& ws = workspace_for(grid_);
    for (int c = 0; c < NC; ++c)
      ws.forward({re_.data() + std::size_t(c) * grid_.n_real(), grid_.n_real()},
                 {sp_.data() + std::size_t(c) * grid_.n_spec(), grid_.n_spec()});
    sp_valid_ = true;
  }
  void sync_both() {
    sync_spec();
    sync_real();
  }

  // meaningful for vector fields: set by the Leray projection
  bool solenoidal = false;

 private:
  void touch_real() {
    if (re_.empty()) re_.assign(NC * grid_.n_real(), 0.0);
  }
  void touch_spec() {
    if (sp_.empty()) sp_.assign(NC * grid_.n_spec(), cplx{});
  }

  PeriodicGrid grid_;
  std::vector<double> re_;
  std::vector<cplx> sp_;
  bool re_valid_ = false, sp_valid_ = false;
};

using ScalarField = GridField<1>;
using VecField = GridField<3>;
using QField = GridField<5>;   // symmetric traceless, basis of tensor.hpp
using Mat3Field = GridField<9>;  // row-major full matrix per point

}  // namespace qbe
