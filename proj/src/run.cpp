#include "qbe/run.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "qbe/checkpoint.hpp"
#include "qbe/init.hpp"
#include "qbe/potential.hpp"

namespace qbe {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

long long stride_of(double interval, double dt) {
  if (interval <= 0.0) return 0;
  return std::max(1ll, std::llround(interval / dt));
}

// March from global step k0; the caller has already placed st at t = k0*dt.
RunResult run_core(State st, long long k0, const RunConfig& cfg) {
  const double dt = cfg.time.dt;
  const long long steps = std::llround(cfg.time.T / dt);
  const long long rec_stride = std::max(1ll, stride_of(cfg.time.record_interval, dt));
  const long long ckpt_stride = stride_of(cfg.output.checkpoint_interval, dt);
  const double contamination = cfg.contamination_time_or_default();

  const PolynomialPotential pot(cfg.model.a, cfg.model.b, cfg.model.c);
  ModelParams mp;
  mp.xi = cfg.model.xi;
  mp.potential = &pot;
  mp.linearized = cfg.model.linearized;
  StepControl ctl;
  ctl.cfl_safety = cfg.time.cfl_safety;

  FilePtr csv;
  if (!cfg.output.csv_path.empty()) {
    csv.reset(std::fopen(cfg.output.csv_path.c_str(), "w"));
    if (!csv) throw std::runtime_error("run: cannot open csv path " + cfg.output.csv_path);
    write_csv_header(csv.get());
  }

  RunResult res;
  for (long long j = 0; j <= steps; ++j) {
    const long long k = k0 + j;
    st.t = double(k) * dt;  // pin to the global clock, no accumulated rounding
    if (ckpt_stride > 0 && j > 0 && k % ckpt_stride == 0 &&
        !cfg.output.checkpoint_path.empty()) {
      save_checkpoint(cfg.output.checkpoint_path, st.u, st.q, st.t);
      // The persisted real samples become the authoritative state: drop the
      // spectra so both this run and a later resume continue from
      // forward(real).  A re-transform is not the bitwise identity, so
      // without this the two trajectories would drift apart in the last
      // ulps and resumed CSV rows would stop matching byte for byte.
      for (int c = 0; c < 3; ++c) st.u.real_rw(c);
      for (int c = 0; c < 5; ++c) st.q.real_rw(c);
    }
    if (k % rec_stride == 0) {
      res.records.push_back(energy_report(st, mp, cfg.analysis.beta, contamination));
      if (csv) {
        write_csv_row(csv.get(), res.records.back());
        std::fflush(csv.get());
      }
    }
    if (j == steps) break;
    step(st, mp, dt, ctl);
    ++res.steps;
  }

  if (cfg.analysis.fit_t_hi > cfg.analysis.fit_t_lo) {
    const auto window_fit = [&](auto fitter, auto value) -> std::optional<DecayFit> {
      try {
        return fitter(std::span<const EnergyReport>(res.records), value,
                      cfg.analysis.fit_t_lo, cfg.analysis.fit_t_hi);
      } catch (const std::invalid_argument&) {
        return std::nullopt;  // window too sparse for this quantity
      }
    };
    res.fit_energy =
        window_fit(fit_power_decay, [](const EnergyReport& r) { return r.e_total; });
    res.fit_velocity =
        window_fit(fit_power_decay, [](const EnergyReport& r) { return r.nrm_u_l2; });
    res.fit_q_rate = window_fit(fit_exponential_decay, [](const EnergyReport& r) {
      return r.nrm_q_l2 * r.nrm_q_l2;
    });
  }
  return res;
}

}  // namespace

RunResult run_simulation(const RunConfig& cfg) {
  const PolynomialPotential pot(cfg.model.a, cfg.model.b, cfg.model.c);
  const auto hyp = verify_hypotheses(pot);
  State st = synthesize_initial_data(cfg, hyp);
  return run_core(std::move(st), 0, cfg);
}

RunResult resume_simulation(const std::string& checkpoint_path, const RunConfig& cfg) {
  Snapshot snap = load_checkpoint(checkpoint_path);
  if (snap.grid.n != cfg.grid.n || snap.grid.L != cfg.grid.L)
    throw ConfigError({"resume: checkpoint grid does not match the config"});
  const long long k0 = std::llround(snap.t / cfg.time.dt);
  if (std::fabs(double(k0) * cfg.time.dt - snap.t) > 1e-9 * std::max(1.0, snap.t))
    throw ConfigError({"resume: checkpoint time is not a multiple of time.dt"});
  State st(snap.grid);
  st.t = snap.t;
  st.u = std::move(snap.u);
  st.q = std::move(snap.q);
  return run_core(std::move(st), k0, cfg);
}

}  // namespace qbe
