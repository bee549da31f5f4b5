#include "qbe/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qbe {

using json = nlohmann::ordered_json;

double RunConfig::contamination_time_or_default() const {
  if (analysis.contamination_time >= 0.0) return analysis.contamination_time;
  return grid.L * grid.L / 10.0;
}

ConfigError::ConfigError(std::vector<std::string> v)
    : std::runtime_error([&v] {
        std::string msg = "invalid configuration:";
        for (const auto& s : v) msg += "\n  " + s;
        return msg;
      }()),
      violations(std::move(v)) {}

namespace {

class Checker {
 public:
  explicit Checker(std::vector<std::string>& out) : out_(out) {}

  // visits one section; complains about unknown keys inside it
  void section(const json& root, const char* name,
               std::initializer_list<const char*> keys, const json*& sec) {
    sec = nullptr;
    if (!root.contains(name)) return;
    const json& j = root.at(name);
    if (!j.is_object()) {
      fail(std::string(name) + ": must be an object");
      return;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool known = false;
      for (const char* k : keys)
        if (it.key() == k) { known = true; break; }
      if (!known) fail(std::string(name) + "." + it.key() + ": unknown key");
    }
    sec = &j;
  }

  template <class T>
  void get(const json* sec, const char* section, const char* key, T& slot) {
    if (!sec || !sec->contains(key)) return;
    try {
      slot = sec->at(key).get<T>();
    } catch (const json::exception&) {
      fail(std::string(section) + "." + key + ": wrong type");
    }
  }

  void require(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
  }

  void fail(const std::string& msg) { out_.push_back(msg); }

 private:
  std::vector<std::string>& out_;
};

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// interval must be a positive integer multiple of dt (within rounding)
bool multiple_of(double interval, double dt) {
  if (!(interval > 0.0) || !(dt > 0.0)) return false;
  const double k = interval / dt;
  return std::abs(k - std::llround(k)) <= 1e-9 * std::max(1.0, k) && std::llround(k) >= 1;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  if (!root.is_object()) throw ConfigError({"top level: must be an object"});

  std::vector<std::string> bad;
  Checker ck(bad);

  static const char* kSections[] = {"grid", "time", "model", "init", "output", "analysis"};
  for (auto it = root.begin(); it != root.end(); ++it) {
    bool known = false;
    for (const char* s : kSections)
      if (it.key() == s) { known = true; break; }
    if (!known) ck.fail(it.key() + ": unknown section");
  }

  RunConfig cfg;
  const json* sec = nullptr;

  ck.section(root, "grid", {"n", "L"}, sec);
  ck.get(sec, "grid", "n", cfg.grid.n);
  ck.get(sec, "grid", "L", cfg.grid.L);

  ck.section(root, "time", {"dt", "T", "record_interval", "cfl_safety"}, sec);
  ck.get(sec, "time", "dt", cfg.time.dt);
  ck.get(sec, "time", "T", cfg.time.T);
  ck.get(sec, "time", "record_interval", cfg.time.record_interval);
  ck.get(sec, "time", "cfl_safety", cfg.time.cfl_safety);

  ck.section(root, "model", {"xi", "a", "b", "c", "linearized"}, sec);
  ck.get(sec, "model", "xi", cfg.model.xi);
  ck.get(sec, "model", "a", cfg.model.a);
  ck.get(sec, "model", "b", cfg.model.b);
  ck.get(sec, "model", "c", cfg.model.c);
  ck.get(sec, "model", "linearized", cfg.model.linearized);

  ck.section(root, "init",
             {"u_kind", "q_kind", "amplitude_u", "amplitude_q", "width", "seed"}, sec);
  ck.get(sec, "init", "u_kind", cfg.init.u_kind);
  ck.get(sec, "init", "q_kind", cfg.init.q_kind);
  ck.get(sec, "init", "amplitude_u", cfg.init.amplitude_u);
  ck.get(sec, "init", "amplitude_q", cfg.init.amplitude_q);
  ck.get(sec, "init", "width", cfg.init.width);
  ck.get(sec, "init", "seed", cfg.init.seed);

  ck.section(root, "output", {"csv_path", "checkpoint_path", "checkpoint_interval"}, sec);
  ck.get(sec, "output", "csv_path", cfg.output.csv_path);
  ck.get(sec, "output", "checkpoint_path", cfg.output.checkpoint_path);
  ck.get(sec, "output", "checkpoint_interval", cfg.output.checkpoint_interval);

  ck.section(root, "analysis",
             {"beta", "epsilon", "fit_window", "contamination_time"}, sec);
  ck.get(sec, "analysis", "beta", cfg.analysis.beta);
  ck.get(sec, "analysis", "epsilon", cfg.analysis.epsilon);
  ck.get(sec, "analysis", "contamination_time", cfg.analysis.contamination_time);
  if (sec && sec->contains("fit_window")) {
    const json& w = sec->at("fit_window");
    if (w.is_array() && w.size() == 2 && w[0].is_number() && w[1].is_number()) {
      cfg.analysis.fit_t_lo = w[0].get<double>();
      cfg.analysis.fit_t_hi = w[1].get<double>();
    } else {
      ck.fail("analysis.fit_window: must be a [t_lo, t_hi] number pair");
    }
  }

  // ---- value constraints (all checked, all reported) ----
  ck.require(power_of_two(cfg.grid.n) && cfg.grid.n >= 8, "grid.n: power of two >= 8");
  ck.require(cfg.grid.L > 0.0, "grid.L: must be positive");
  ck.require(cfg.time.dt > 0.0, "time.dt: must be positive");
  ck.require(cfg.time.T >= 0.0, "time.T: must be >= 0");
  if (cfg.time.dt > 0.0) {
    ck.require(cfg.time.T == 0.0 || multiple_of(cfg.time.T, cfg.time.dt),
               "time.T: must be an integer multiple of time.dt");
    ck.require(multiple_of(cfg.time.record_interval, cfg.time.dt),
               "time.record_interval: must be a positive integer multiple of time.dt");
    ck.require(cfg.output.checkpoint_interval == 0.0 ||
                   multiple_of(cfg.output.checkpoint_interval, cfg.time.dt),
               "output.checkpoint_interval: must be 0 or an integer multiple of time.dt");
  }
  ck.require(cfg.time.cfl_safety > 0.0 && cfg.time.cfl_safety <= 1.0,
             "time.cfl_safety: must lie in (0, 1]");
  ck.require(cfg.init.u_kind == "zero" || cfg.init.u_kind == "solenoidal_blob" ||
                 cfg.init.u_kind == "taylor_green",
             "init.u_kind: one of zero | solenoidal_blob | taylor_green");
  ck.require(cfg.init.q_kind == "zero" || cfg.init.q_kind == "gaussian_blob" ||
                 cfg.init.q_kind == "random_smooth",
             "init.q_kind: one of zero | gaussian_blob | random_smooth");
  ck.require(cfg.init.amplitude_u >= 0.0, "init.amplitude_u: must be >= 0");
  ck.require(cfg.init.amplitude_q >= 0.0, "init.amplitude_q: must be >= 0");
  ck.require(cfg.init.width > 0.0, "init.width: must be positive");
  ck.require(cfg.output.checkpoint_interval >= 0.0,
             "output.checkpoint_interval: must be >= 0");
  ck.require(cfg.analysis.beta >= 0.0 && cfg.analysis.beta <= 0.5,
             "analysis.beta: must lie in [0, 1/2]");
  ck.require(cfg.analysis.epsilon > 0.0, "analysis.epsilon: must be positive");
  ck.require(cfg.analysis.fit_t_hi <= 0.0 || cfg.analysis.fit_t_hi > cfg.analysis.fit_t_lo,
             "analysis.fit_window: t_hi must exceed t_lo");

  if (!bad.empty()) throw ConfigError(std::move(bad));
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path + ": cannot open"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json root;
  root["grid"] = {{"n", cfg.grid.n}, {"L", cfg.grid.L}};
  root["time"] = {{"dt", cfg.time.dt},
                  {"T", cfg.time.T},
                  {"record_interval", cfg.time.record_interval},
                  {"cfl_safety", cfg.time.cfl_safety}};
  root["model"] = {{"xi", cfg.model.xi},
                   {"a", cfg.model.a},
                   {"b", cfg.model.b},
                   {"c", cfg.model.c},
                   {"linearized", cfg.model.linearized}};
  root["init"] = {{"u_kind", cfg.init.u_kind},
                  {"q_kind", cfg.init.q_kind},
                  {"amplitude_u", cfg.init.amplitude_u},
                  {"amplitude_q", cfg.init.amplitude_q},
                  {"width", cfg.init.width},
                  {"seed", cfg.init.seed}};
  root["output"] = {{"csv_path", cfg.output.csv_path},
                    {"checkpoint_path", cfg.output.checkpoint_path},
                    {"checkpoint_interval", cfg.output.checkpoint_interval}};
  root["analysis"] = {{"beta", cfg.analysis.beta},
                      {"epsilon", cfg.analysis.epsilon},
                      {"fit_window", {cfg.analysis.fit_t_lo, cfg.analysis.fit_t_hi}},
                      {"contamination_time", cfg.analysis.contamination_time}};
  return root.dump(2) + "\n";
}

}  // namespace qbe
