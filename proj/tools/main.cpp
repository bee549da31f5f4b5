// Command-line front end: run / resume / flow / oracle / verify.
// Exit codes: 0 success, 1 validation or configuration error, 2 numerical
// failure (CFL rejection, NaN, non-convergence).

#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qbe/bootstrap.hpp"
#include "qbe/config.hpp"
#include "qbe/dynamics.hpp"
#include "qbe/gridops.hpp"
#include "qbe/init.hpp"
#include "qbe/parallel.hpp"
#include "qbe/potential.hpp"
#include "qbe/rng.hpp"
#include "qbe/run.hpp"
#include "qbe/stationary.hpp"

namespace {

using namespace qbe;

void print_fit(const char* label, const std::optional<DecayFit>& f) {
  if (!f) return;  // window disabled, or too sparse for this quantity
  std::printf("%s: exponent=%.6g amplitude=%.6g r2=%.6g window=[%g, %g] samples=%d\n",
              label, f->exponent, f->amplitude, f->goodness, f->t_lo, f->t_hi, f->samples);
}

void print_run_result(const RunResult& res) {
  std::printf("steps=%lld records=%zu\n", res.steps, res.records.size());
  if (!res.records.empty()) {
    const auto& a = res.records.front();
    const auto& b = res.records.back();
    std::printf("E(%g) = %.10g   E(%g) = %.10g\n", a.t, a.e_total, b.t, b.e_total);
    std::printf("||Q||_inf: %.10g -> %.10g\n", a.nrm_q_linf, b.nrm_q_linf);
  }
  print_fit("energy fit (power)", res.fit_energy);
  print_fit("velocity fit (power)", res.fit_velocity);
  print_fit("Q-mass fit (exponential)", res.fit_q_rate);
}

int cmd_run(const std::string& cfg_path) {
  const RunConfig cfg = load_config_file(cfg_path);
  if (cfg.model.xi != 0.0)
    std::fprintf(stderr,
                 "note: xi = %g; the decay certification covers the corotational case "
                 "(xi = 0), treat this run as exploratory\n",
                 cfg.model.xi);
  print_run_result(run_simulation(cfg));
  return 0;
}

int cmd_resume(const std::string& ckpt_path, const std::string& cfg_path) {
  const RunConfig cfg = load_config_file(cfg_path);
  print_run_result(resume_simulation(ckpt_path, cfg));
  return 0;
}

int cmd_flow(const std::string& cfg_path, const FlowConfig& fc) {
  const RunConfig cfg = load_config_file(cfg_path);
  const PolynomialPotential pot(cfg.model.a, cfg.model.b, cfg.model.c);
  const auto hyp = verify_hypotheses(pot);
  State st = synthesize_initial_data(cfg, hyp);
  auto [q, rep] = gradient_flow(st.q, pot, fc);
  std::printf("converged=%d iterations=%ld residual=%.6g\n", int(rep.converged),
              rep.iterations, rep.stationary_residual);
  std::printf("sup |Q| = %.10g\n", rep.final_sup);
  std::printf("pohozaev = %.10g\n", rep.pohozaev);
  std::printf("pohozaev b-free combination = %.10g\n", rep.pohozaev_combo);
  return rep.converged ? 0 : 2;
}

int cmd_oracle(const std::string& cfg_path, double horizon) {
  const RunConfig cfg = load_config_file(cfg_path);

  std::printf("-- weighted decay lemma: sup_t E(t) (1+t)^(mu-gamma), horizon %g --\n", horizon);
  for (double gamma : {0.3, 0.5, 0.7})
    for (double mu : {1.0, 1.5}) {
      BootstrapParams p;
      p.gamma = gamma;
      p.mu = mu;
      p.horizon = horizon;
      const auto rep = weighted_decay_sup(p);
      std::printf("  gamma=%.2f mu=%.2f  sup=%.6g  drift(last decade)=%.3g\n", gamma, mu,
                  rep.weighted_sup, rep.drift_last_decade);
    }

  std::printf("-- cascade at eps=%g --\n", cfg.analysis.epsilon);
  for (const auto& pass : bootstrap_cascade(1.0, 1.0, cfg.analysis.epsilon, horizon))
    std::printf("  pass %d: 2beta=%.6g gamma=%.6g mu=%.6g -> exponent %.6g (sup=%.4g, drift=%.3g)\n",
                pass.index, 2.0 * pass.beta, pass.gamma, pass.mu, pass.exponent,
                pass.weighted_sup, pass.drift_last_decade);

  std::printf("-- Duhamel kernel envelope --\n");
  const auto rg = log_grid(1e-3, 10.0, 80);
  const auto tg = log_grid(1e-3, 1e4, 80);
  const auto rg2 = log_grid(1e-3, 10.0, 160);
  const auto tg2 = log_grid(1e-3, 1e4, 160);
  for (double alpha : {0.0, 0.5}) {
    const auto k1 = kernel_bound_scan(alpha, rg, tg);
    const auto k2 = kernel_bound_scan(alpha, rg2, tg2);
    const double stab = std::fabs(k2.fitted_c - k1.fitted_c) / k1.fitted_c;
    std::printf("  alpha=%.2f  max K/envelope=%.6g  c(alpha)=%.6g  refinement drift=%.3g\n",
                alpha, k1.max_ratio, k1.fitted_c, stab);
  }

  std::printf("-- low-frequency heat mass --\n");
  const double c0 = low_freq_envelope_constant();
  std::printf("  envelope constant C0 = %.10g\n", c0);
  double worst = 0.0, worst_xcheck = 0.0;
  for (double t : log_grid(1e-3, 1e3, 200)) {
    const double R = shell_schedule(t, cfg.analysis.beta);
    const double m = low_freq_heat_mass(R, t);
    worst = std::max(worst, m * std::pow(1.0 + t, 1.5) / c0);
    worst_xcheck = std::max(worst_xcheck, std::fabs(m - low_freq_heat_mass_quad(R, t)) /
                                              std::max(m, 1e-300));
  }
  std::printf("  max mass*(1+t)^{3/2}/C0 over t in [1e-3,1e3] = %.6g (must stay <= 1)\n", worst);
  std::printf("  closed form vs quadrature, worst relative gap = %.3g\n", worst_xcheck);

  std::printf("-- Duhamel tail ratio I(t) (t/2)^{3/2} --\n");
  for (double t : {10.0, 100.0, 1000.0})
    std::printf("  t=%g  ratio=%.6g\n", t, duhamel_tail_ratio(t));
  return 0;
}

int cmd_verify(const std::string& cfg_path) {
  const RunConfig cfg = load_config_file(cfg_path);
  const PolynomialPotential pot(cfg.model.a, cfg.model.b, cfg.model.c);
  std::printf("%s\n", describe(verify_hypotheses(pot)).c_str());

  SplitMix64 rng(424242);
  const auto rand_q = [&]() {
    SymTraceless3 q;
    for (double& c : q.c) c = rng.next_symmetric();
    return q;
  };
  const auto rand_mat = [&]() {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = rng.next_symmetric();
    return m;
  };

  double d3 = 0.0, comm = 0.0, xi0 = 0.0;
  for (int it = 0; it < 200; ++it) {
    const SymTraceless3 q = rand_q();
    const Mat3 qm = q.to_mat();
    const Mat3 g = rand_mat();
    const Mat3 w = 0.5 * (g - g.transpose());
    const Mat3 rot = w * qm - qm * w;
    d3 = std::max(d3, std::fabs(frobenius_inner(rot, qm)));
    const Mat3 df = pot.gradient(q);
    comm = std::max(comm, std::sqrt(frobenius_inner(commutator(qm, df), commutator(qm, df))));
    // the general source evaluated at xi = 0 against the corotational form
    const Mat3 third = (1.0 / 3.0) * Mat3::identity();
    const Mat3 m = qm + third;
    const Mat3 gen = w * m - m * w;
    const Mat3 diff = gen - rot;
    xi0 = std::max(xi0, std::sqrt(frobenius_inner(diff, diff)));
  }
  std::printf("rotation identity (wQ-Qw):Q      max |.| = %.3g\n", d3);
  std::printf("commutation [Q, dF]              max |.| = %.3g\n", comm);
  std::printf("xi=0 source consistency          max |.| = %.3g\n", xi0);

  // projector spot checks on a small box
  const PeriodicGrid g{16, 2.0 * M_PI};
  RunConfig icfg;
  icfg.grid.n = g.n;
  icfg.grid.L = g.L;
  icfg.init.u_kind = "solenoidal_blob";
  icfg.init.amplitude_u = 1.0;
  icfg.init.q_kind = "zero";
  const auto hyp = verify_hypotheses(pot);
  State stv = synthesize_initial_data(icfg, hyp);
  VecField pu = stv.u;
  helmholtz_project(pu);
  double pp = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto a = stv.u.spec(c);
    const auto b = pu.spec(c);
    for (std::size_t s = 0; s < a.size(); ++s) pp = std::max(pp, std::abs(a[s] - b[s]));
  }
  std::printf("projector idempotence            max |.| = %.3g\n", pp);
  const double div_rel = max_spectral_divergence(stv.u) / std::sqrt(spec_l2sq(stv.u));
  std::printf("projected field divergence       rel     = %.3g\n", div_rel);

  const bool ok = d3 <= 1e-12 && comm <= 1e-12 && xi0 <= 1e-12 && pp <= 1e-12 &&
                  div_rel <= 1e-10;
  std::printf("verify: %s\n", ok ? "all checks passed" : "CHECKS FAILED");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  set_threads_from_env();

  CLI::App app{"pseudo-spectral laboratory for the coupled order-tensor / velocity system"};
  app.require_subcommand(1);

  std::string cfg_path, ckpt_path;
  double horizon = 1e4;
  FlowConfig fc;

  auto* c_run = app.add_subcommand("run", "simulate and stream diagnostics to CSV");
  c_run->add_option("config", cfg_path, "config file (JSON)")->required()->check(CLI::ExistingFile);

  auto* c_resume = app.add_subcommand("resume", "continue a run from a checkpoint");
  c_resume->add_option("checkpoint", ckpt_path, "snapshot file")->required()->check(CLI::ExistingFile);
  c_resume->add_option("config", cfg_path, "config file (JSON)")->required()->check(CLI::ExistingFile);

  auto* c_flow = app.add_subcommand("flow", "gradient flow to a stationary state");
  c_flow->add_option("config", cfg_path, "config file (JSON)")->required()->check(CLI::ExistingFile);
  c_flow->add_option("--flow-dt", fc.dt, "flow pseudo-time step");
  c_flow->add_option("--max-iters", fc.max_iters, "iteration budget");
  c_flow->add_option("--tol", fc.tol_rel, "relative residual tolerance");

  auto* c_oracle = app.add_subcommand("oracle", "scalar decay/kernel oracle tables");
  c_oracle->add_option("config", cfg_path, "config file (JSON)")->required()->check(CLI::ExistingFile);
  c_oracle->add_option("--horizon", horizon, "ODE time horizon");

  auto* c_verify = app.add_subcommand("verify", "potential hypotheses and identity spot checks");
  c_verify->add_option("config", cfg_path, "config file (JSON)")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_run->parsed()) return cmd_run(cfg_path);
    if (c_resume->parsed()) return cmd_resume(ckpt_path, cfg_path);
    if (c_flow->parsed()) return cmd_flow(cfg_path, fc);
    if (c_oracle->parsed()) return cmd_oracle(cfg_path, horizon);
    if (c_verify->parsed()) return cmd_verify(cfg_path);
  } catch (const ConfigError& e) {
    for (const auto& v : e.violations) std::fprintf(stderr, "config: %s\n", v.c_str());
    return 1;
  } catch (const CflViolation& e) {
    std::fprintf(stderr, "numerical: %s (requested dt=%g, advisory dt=%g)\n", e.what(),
                 e.requested_dt, e.advisory_dt);
    return 2;
  } catch (const NumericalFailure& e) {
    std::fprintf(stderr, "numerical: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
