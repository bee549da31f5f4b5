// Python bindings for the main operations: potential hypotheses, the
// coupled run driver, the stationary gradient flow, and the scalar decay
// oracles.  Field states stay on the C++ side; the module traffics in
// config text, per-record columns, and plain numbers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <string>

#include "qbe/bootstrap.hpp"
#include "qbe/config.hpp"
#include "qbe/init.hpp"
#include "qbe/parallel.hpp"
#include "qbe/potential.hpp"
#include "qbe/run.hpp"
#include "qbe/stationary.hpp"
#include "qbe/tensor.hpp"

namespace py = pybind11;
using namespace qbe;

namespace {

SymTraceless3 to_q(const std::array<double, 5>& v) {
  SymTraceless3 q;
  for (int i = 0; i < 5; ++i) q.c[i] = v[i];
  return q;
}

py::object fit_dict(const std::optional<DecayFit>& f) {
  if (!f) return py::none();
  py::dict d;
  d["exponent"] = f->exponent;
  d["amplitude"] = f->amplitude;
  d["goodness"] = f->goodness;
  d["t_lo"] = f->t_lo;
  d["t_hi"] = f->t_hi;
  d["samples"] = f->samples;
  return d;
}

py::dict result_dict(const RunResult& res) {
  py::dict d;
  const auto col = [&](const char* key, auto get) {
    py::list v;
    for (const auto& r : res.records) v.append(get(r));
    d[key] = v;
  };
  col("t", [](const EnergyReport& r) { return r.t; });
  col("e_kin", [](const EnergyReport& r) { return r.e_kinetic; });
  col("e_dir", [](const EnergyReport& r) { return r.e_dirichlet; });
  col("e_bulk", [](const EnergyReport& r) { return r.e_bulk; });
  col("e_total", [](const EnergyReport& r) { return r.e_total; });
  col("d_u", [](const EnergyReport& r) { return r.d_u; });
  col("d_q", [](const EnergyReport& r) { return r.d_q; });
  col("nrm_u_l2", [](const EnergyReport& r) { return r.nrm_u_l2; });
  col("nrm_q_l1", [](const EnergyReport& r) { return r.nrm_q_l1; });
  col("nrm_q_l2", [](const EnergyReport& r) { return r.nrm_q_l2; });
  col("nrm_q_linf", [](const EnergyReport& r) { return r.nrm_q_linf; });
  col("nrm_gradq_l2", [](const EnergyReport& r) { return r.nrm_gradq_l2; });
  col("e_low", [](const EnergyReport& r) { return r.e_low; });
  col("e_high", [](const EnergyReport& r) { return r.e_high; });
  col("shell_R", [](const EnergyReport& r) { return r.shell_r; });
  col("contaminated", [](const EnergyReport& r) { return r.box_contaminated; });
  d["steps"] = res.steps;
  d["fit_energy"] = fit_dict(res.fit_energy);
  d["fit_velocity"] = fit_dict(res.fit_velocity);
  d["fit_q_rate"] = fit_dict(res.fit_q_rate);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "pseudo-spectral laboratory for the coupled order-tensor / velocity system";
  set_threads_from_env();

  py::register_exception<ConfigError>(m, "ConfigurationError", PyExc_ValueError);

  m.def(
      "hypotheses",
      [](double a, double b, double c) {
        const PolynomialPotential pot(a, b, c);
        const auto r = verify_hypotheses(pot);
        py::dict d;
        d["r1"] = r.r1;
        d["r2"] = r.r2;
        d["positivity_ok"] = r.positivity_ok;
        d["growth_ok"] = r.growth_ok;
        d["lambda"] = r.lambda ? py::object(py::float_(*r.lambda)) : py::object(py::none());
        d["alpha"] = r.alpha;
        d["samples"] = r.samples;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("c"),
      "sampled verification of the structural potential hypotheses");

  m.def(
      "potential_value",
      [](double a, double b, double c, const std::array<double, 5>& q) {
        return PolynomialPotential(a, b, c).value(to_q(q));
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("q"));

  m.def(
      "projected_gradient",
      [](double a, double b, double c, const std::array<double, 5>& q) {
        const SymTraceless3 g = PolynomialPotential(a, b, c).projected_gradient(to_q(q));
        return std::array<double, 5>{g.c[0], g.c[1], g.c[2], g.c[3], g.c[4]};
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("q"),
      "traceless bulk-potential gradient in the orthonormal tensor basis");

  m.def(
      "run",
      [](const std::string& config_text) {
        return result_dict(run_simulation(parse_config(config_text)));
      },
      py::arg("config"), "simulate a config (JSON text) and return record columns and fits");

  m.def(
      "resume",
      [](const std::string& checkpoint_path, const std::string& config_text) {
        return result_dict(resume_simulation(checkpoint_path, parse_config(config_text)));
      },
      py::arg("checkpoint"), py::arg("config"));

  m.def(
      "gradient_flow",
      [](const std::string& config_text) {
        const RunConfig cfg = parse_config(config_text);
        const PolynomialPotential pot(cfg.model.a, cfg.model.b, cfg.model.c);
        State st = synthesize_initial_data(cfg, verify_hypotheses(pot));
        const auto [q, rep] = qbe::gradient_flow(st.q, pot);
        py::dict d;
        d["converged"] = rep.converged;
        d["iterations"] = rep.iterations;
        d["stationary_residual"] = rep.stationary_residual;
        d["final_sup"] = rep.final_sup;
        d["pohozaev"] = rep.pohozaev;
        d["pohozaev_combo"] = rep.pohozaev_combo;
        return d;
      },
      py::arg("config"), "gradient-flow the config's Q initial data to a stationary state");

  m.def(
      "weighted_decay_sup",
      [](double gamma, double mu, double c, double e0, double horizon) {
        BootstrapParams p;
        p.gamma = gamma;
        p.mu = mu;
        p.c = c;
        p.e0 = e0;
        p.horizon = horizon;
        const auto r = weighted_decay_sup(p);
        return py::make_tuple(r.weighted_sup, r.drift_last_decade);
      },
      py::arg("gamma"), py::arg("mu"), py::arg("c") = 1.0, py::arg("e0") = 1.0,
      py::arg("horizon") = 1e4,
      "sup_t E(t) (1+t)^(mu-gamma) for the comparison ODE, with last-decade drift");

  m.def(
      "bootstrap_cascade",
      [](double epsilon, double horizon) {
        py::list out;
        for (const auto& p : bootstrap_cascade(1.0, 1.0, epsilon, horizon)) {
          py::dict d;
          d["index"] = p.index;
          d["beta"] = p.beta;
          d["gamma"] = p.gamma;
          d["mu"] = p.mu;
          d["exponent"] = p.exponent;
          d["weighted_sup"] = p.weighted_sup;
          d["drift_last_decade"] = p.drift_last_decade;
          out.append(d);
        }
        return out;
      },
      py::arg("epsilon") = 0.1, py::arg("horizon") = 1e4);

  m.def("kernel_small_r_limit", &kernel_small_r_limit, py::arg("alpha"), py::arg("t"));
  m.def("low_freq_heat_mass", &low_freq_heat_mass, py::arg("R"), py::arg("t"));
  m.def("low_freq_envelope_constant", &low_freq_envelope_constant);
  m.def("shell_schedule", &shell_schedule, py::arg("t"), py::arg("beta"));
  m.def("duhamel_tail_ratio", &duhamel_tail_ratio, py::arg("t"));

  m.def("config_defaults", [] { return serialize_config(RunConfig{}); },
        "canonical config document with every key at its default");
}
