// Copyright 2026 The fairo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment orchestration: configuration, seeded runs, traces, metric
// reports, comparisons between methods and seed sweeps.

#pragma once

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fairo/controller.hpp"
#include "fairo/env_hvac.hpp"
#include "fairo/env_learning.hpp"
#include "fairo/env_water.hpp"
#include "fairo/fairness.hpp"
#include "fairo/metrics.hpp"

namespace fairo {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kTraceHeader =
    "tick,phase,human,desired,global_action,weight,L,satisfied,perf,active_option,dqn_action";

struct ExperimentConfig {
  AppType app_type = AppType::hvac;
  Method method = Method::fairo;
  std::vector<Method> methods;  // used by sweep only
  std::size_t n_humans = 3;
  std::size_t ticks = 15000;
  std::uint64_t seed = 1;
  double delta = 0.01;
  std::size_t window = 3000;
  ControllerConfig controller;
  HvacConfig hvac;
  WaterConfig water;
  LearningConfig learning;
  std::string schedule_csv;  // hvac: pinned activity schedule
  std::string demand_csv;    // water: pinned demand trace
  std::string mdp_file;      // learning: transition matrices

  void validate() const {
    require(n_humans >= 2, "config", "n_humans must be at least 2");
    require(ticks > controller.warmup, "config", "ticks must exceed warmup");
    require(method_valid_for(method, app_type), "config",
            "method " + to_string(method) + " is not defined for app type " + to_string(app_type));
    for (Method m : methods) {
      require(method_valid_for(m, app_type), "config",
              "method " + to_string(m) + " is not defined for app type " + to_string(app_type));
    }
    require(delta > 0.0 && delta < 1.0, "config", "delta must lie in (0,1)");
    require(window > 0, "config", "window must be positive");
    require(controller.zeta >= 0.0 && controller.zeta <= 1.0, "config", "zeta must lie in [0,1]");
    require(controller.delta_w > 0.0, "config", "delta_w must be positive");
    require(controller.w_floor >= 0.0 &&
                controller.w_floor * static_cast<double>(n_humans) <= 1.0,
            "config", "w_floor must be nonnegative and leave room on the simplex");
    require(controller.hidden > 0, "config", "hidden must be positive");
    controller.train.validate();
  }
};

// ---------------------------------------------------------------------------
// JSON config

namespace detail {

// Reads keys from one JSON object and rejects any key it was not asked about.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where)) {
    require(j_.is_object(), "config", where_ + " must be a JSON object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw Error("config", where_ + "." + key + ": " + e.what());
    }
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const nlohmann::json& at(const char* key) const { return j_.at(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      require(seen_.count(it.key()) > 0, "config", "unknown key " + where_ + "." + it.key());
    }
  }

 private:
  const nlohmann::json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

template <class E, class Parse>
std::vector<E> parse_list(const nlohmann::json& j, Parse parse, const std::string& where) {
  require(j.is_array(), "config", where + " must be an array of names");
  std::vector<E> out;
  for (const auto& x : j) {
    require(x.is_string(), "config", where + " must be an array of names");
    out.push_back(parse(x.get<std::string>()));
  }
  return out;
}

template <class E>
nlohmann::json name_list(const std::vector<E>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline std::string resolve(const std::string& path, const std::filesystem::path& base) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  return p.is_absolute() ? path : (base / p).lexically_normal().string();
}

}  // namespace detail

/// Relative file paths inside the document are resolved against `base_dir`.
inline ExperimentConfig config_from_json(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir = {}) {
  ExperimentConfig c;
  detail::ObjectReader r(j, "config");
  std::string s;
  if (r.has("app_type")) {
    r.get("app_type", s);
    c.app_type = parse_app_type(s);
  }
  if (r.has("method")) {
    r.get("method", s);
    c.method = parse_method(s);
  }
  if (r.has("methods")) {
    c.methods = detail::parse_list<Method>(r.at("methods"), parse_method, "methods");
  }
  r.get("n_humans", c.n_humans);
  r.get("ticks", c.ticks);
  r.get("seed", c.seed);
  r.get("delta", c.delta);
  r.get("window", c.window);
  r.get("zeta", c.controller.zeta);
  r.get("delta_w", c.controller.delta_w);
  r.get("w_floor", c.controller.w_floor);
  r.get("warmup", c.controller.warmup);
  r.get("hidden", c.controller.hidden);
  if (r.has("improvement")) {
    r.get("improvement", s);
    c.controller.improvement = parse_improvement_baseline(s);
  }
  r.get("schedule_csv", c.schedule_csv);
  r.get("demand_csv", c.demand_csv);
  r.get("mdp_file", c.mdp_file);

  if (r.has("train")) {
    detail::ObjectReader t(r.at("train"), "train");
    auto& tc = c.controller.train;
    t.get("alpha", tc.alpha);
    t.get("gamma", tc.gamma);
    t.get("epsilon_start", tc.epsilon_start);
    t.get("epsilon_end", tc.epsilon_end);
    t.get("epsilon_decay_steps", tc.epsilon_decay_steps);
    t.get("grad_clip", tc.grad_clip);
    t.finish();
  }
  if (r.has("hvac")) {
    detail::ObjectReader h(r.at("hvac"), "hvac");
    auto& hc = c.hvac;
    h.get("tau", hc.tau);
    h.get("outdoor_mean", hc.outdoor_mean);
    h.get("outdoor_amplitude", hc.outdoor_amplitude);
    h.get("initial_temp", hc.initial_temp);
    if (h.has("profiles")) {
      hc.profiles = detail::parse_list<ProfileKind>(h.at("profiles"), parse_profile_kind,
                                                    "hvac.profiles");
    }
    h.get("met", hc.comfort.met);
    h.get("clo", hc.comfort.clo);
    h.get("air_velocity", hc.comfort.air_velocity);
    h.get("relative_humidity", hc.comfort.relative_humidity);
    h.get("tick_minutes", hc.thermal.tick_minutes);
    h.get("substeps", hc.thermal.substeps);
    h.get("envelope_tau_min", hc.thermal.envelope_tau_min);
    h.get("heat_gain", hc.thermal.heat_gain);
    h.get("cool_gain", hc.thermal.cool_gain);
    h.get("heat_flow_temp", hc.thermal.heat_flow_temp);
    h.get("cool_flow_temp", hc.thermal.cool_flow_temp);
    h.get("band", hc.thermal.band);
    h.get("occupant_heat", hc.thermal.occupant_heat);
    h.finish();
  }
  if (r.has("water")) {
    detail::ObjectReader w(r.at("water"), "water");
    auto& wc = c.water;
    w.get("satisfied_rate", wc.satisfied_rate);
    w.get("resource_factor", wc.resource_factor);
    w.get("tank_capacity_factor", wc.tank_capacity_factor);
    w.get("initial_level", wc.initial_level);
    w.get("gallons", wc.demand.gallons);
    w.get("demand_scale", wc.demand.scale);
    if (w.has("profiles")) {
      wc.profiles = detail::parse_list<ProfileKind>(w.at("profiles"), parse_profile_kind,
                                                    "water.profiles");
    }
    w.finish();
  }
  if (r.has("learning")) {
    detail::ObjectReader l(r.at("learning"), "learning");
    auto& lc = c.learning;
    l.get("day_length", lc.day_length);
    l.get("value_top", lc.value_top);
    if (l.has("profiles")) {
      lc.profiles = detail::parse_list<LearnerProfile>(l.at("profiles"), parse_learner_profile,
                                                       "learning.profiles");
    }
    l.finish();
  }
  r.finish();

  c.schedule_csv = detail::resolve(c.schedule_csv, base_dir);
  c.demand_csv = detail::resolve(c.demand_csv, base_dir);
  c.mdp_file = detail::resolve(c.mdp_file, base_dir);
  c.validate();
  return c;
}

/// Effective configuration with every default spelled out.
inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["app_type"] = to_string(c.app_type);
  j["method"] = to_string(c.method);
  if (!c.methods.empty()) j["methods"] = detail::name_list(c.methods);
  j["n_humans"] = c.n_humans;
  j["ticks"] = c.ticks;
  j["seed"] = c.seed;
  j["delta"] = c.delta;
  j["window"] = c.window;
  j["zeta"] = c.controller.zeta;
  j["delta_w"] = c.controller.delta_w;
  j["w_floor"] = c.controller.w_floor;
  j["warmup"] = c.controller.warmup;
  j["hidden"] = c.controller.hidden;
  j["improvement"] = to_string(c.controller.improvement);
  j["schedule_csv"] = c.schedule_csv;
  j["demand_csv"] = c.demand_csv;
  j["mdp_file"] = c.mdp_file;
  const auto& t = c.controller.train;
  j["train"] = {{"alpha", t.alpha},
                {"gamma", t.gamma},
                {"epsilon_start", t.epsilon_start},
                {"epsilon_end", t.epsilon_end},
                {"epsilon_decay_steps", t.epsilon_decay_steps},
                {"grad_clip", t.grad_clip}};
  const auto& h = c.hvac;
  j["hvac"] = {{"tau", h.tau},
               {"outdoor_mean", h.outdoor_mean},
               {"outdoor_amplitude", h.outdoor_amplitude},
               {"initial_temp", h.initial_temp},
               {"profiles", detail::name_list(h.profiles)},
               {"met", h.comfort.met},
               {"clo", h.comfort.clo},
               {"air_velocity", h.comfort.air_velocity},
               {"relative_humidity", h.comfort.relative_humidity},
               {"tick_minutes", h.thermal.tick_minutes},
               {"substeps", h.thermal.substeps},
               {"envelope_tau_min", h.thermal.envelope_tau_min},
               {"heat_gain", h.thermal.heat_gain},
               {"cool_gain", h.thermal.cool_gain},
               {"heat_flow_temp", h.thermal.heat_flow_temp},
               {"cool_flow_temp", h.thermal.cool_flow_temp},
               {"band", h.thermal.band},
               {"occupant_heat", h.thermal.occupant_heat}};
  const auto& w = c.water;
  j["water"] = {{"satisfied_rate", w.satisfied_rate},
                {"resource_factor", w.resource_factor},
                {"tank_capacity_factor", w.tank_capacity_factor},
                {"initial_level", w.initial_level},
                {"gallons", w.demand.gallons},
                {"demand_scale", w.demand.scale},
                {"profiles", detail::name_list(w.profiles)}};
  const auto& l = c.learning;
  j["learning"] = {{"day_length", l.day_length},
                   {"value_top", l.value_top},
                   {"profiles", detail::name_list(l.profiles)}};
  return j;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "io", "cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("config", "cannot parse " + path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

/// Provenance hash over the library version and the effective config.
inline std::string config_hash(const ExperimentConfig& c) {
  const std::string text = std::string(kVersion) + "\n" + config_to_json(c).dump();
  std::ostringstream os;
  os << std::hex << detail::fnv1a(text);
  return os.str();
}

// ---------------------------------------------------------------------------
// Running

/// Shortest round-trip decimal form; locale independent.
inline std::unique_ptr<Environment> make_environment(const ExperimentConfig& c) {
  const std::uint64_t env_seed = Rng::stream(c.seed, "env").next_u64();
  switch (c.app_type) {
    case AppType::hvac: {
      HvacConfig hc = c.hvac;
      hc.humans = c.n_humans;
      hc.ticks = c.ticks;
      if (!c.schedule_csv.empty()) {
        std::ifstream in(c.schedule_csv);
        require(static_cast<bool>(in), "io", "cannot open schedule " + c.schedule_csv);
        return std::make_unique<HvacEnvironment>(hc, read_schedule_csv(in));
      }
      return std::make_unique<HvacEnvironment>(hc, env_seed);
    }
    case AppType::water: {
      WaterConfig wc = c.water;
      wc.humans = c.n_humans;
      wc.ticks = c.ticks;
      if (!c.demand_csv.empty()) {
        std::ifstream in(c.demand_csv);
        require(static_cast<bool>(in), "io", "cannot open demand trace " + c.demand_csv);
        return std::make_unique<WaterEnvironment>(wc, read_demand_csv(in));
      }
      return std::make_unique<WaterEnvironment>(wc, env_seed);
    }
    case AppType::learning: {
      LearningConfig lc = c.learning;
      lc.humans = c.n_humans;
      lc.ticks = c.ticks;
      if (!c.mdp_file.empty()) {
        std::ifstream in(c.mdp_file);
        require(static_cast<bool>(in), "io", "cannot open MDP file " + c.mdp_file);
        lc.mdps = read_learner_mdps(in);
      }
      return std::make_unique<LearningEnvironment>(lc, env_seed);
    }
  }
  throw Error("config", "unknown app type");
}

/// Per-tick series kept in memory for metric computation, tick-major.
struct RunResult {
  ExperimentConfig config;
  std::vector<std::vector<double>> closeness;     // L after the tick's ledger update
  std::vector<std::vector<double>> satisfaction;  // v/(u+v)
  std::vector<std::vector<double>> app_metric;    // PMV, balance rate or learning experience
  std::vector<std::vector<double>> weights;
  std::size_t updates = 0;
  std::vector<MetricRow> metrics;
};

inline std::vector<MetricRow> compute_metrics(const RunResult& r);

/// Executes warmup and then the configured method. When `trace` is given, the
/// per-(tick, human) trace CSV is streamed into it.
inline RunResult run_experiment(const ExperimentConfig& config, std::ostream* trace = nullptr,
                                std::ostream* signals = nullptr) {
  config.validate();
  const std::size_t n = config.n_humans;
  auto env = make_environment(config);
  auto policy = make_policy(config.method, config.app_type, n, config.controller, config.seed);
  SatisfactionLedger ledger = init_ledger(n, config.delta);

  RunResult res;
  res.config = config;
  res.closeness.reserve(config.ticks);
  res.satisfaction.reserve(config.ticks);
  res.app_metric.reserve(config.ticks);
  res.weights.reserve(config.ticks);
  if (trace) *trace << kTraceHeader << '\n';
  if (signals) *signals << "tick,human,satisfaction,metric\n";

  std::vector<double> perf(n);
  for (std::size_t t = 0; t < config.ticks; ++t) {
    try {
      const Observation obs = env->observe(t);
      const StepDecision d = policy->decide(t, ledger, obs);
      const Outcome out = env->apply(t, d.action);
      SatisfactionLedger next = update_ledger(ledger, out.satisfied);
      for (std::size_t i = 0; i < n; ++i) {
        perf[i] = performance_term(next.satisfaction(i), out.score[i]);
        require(std::isfinite(perf[i]) && std::isfinite(out.metric[i]), "numeric",
                "non-finite performance signal");
      }
      policy->learn(next, perf);
      ledger = std::move(next);

      FairnessState l = fairness_state(ledger);
      std::vector<double> sat(n);
      for (std::size_t i = 0; i < n; ++i) sat[i] = ledger.satisfaction(i);

      if (trace) {
        for (std::size_t i = 0; i < n; ++i) {
          std::string desired, global;
          switch (config.app_type) {
            case AppType::hvac:
              desired = fmt(obs.desired[i]);
              global = fmt(d.action.setpoint);
              break;
            case AppType::water:
              desired = fmt(obs.desired[i]);
              global = fmt(d.action.allocation[i]);
              break;
            case AppType::learning:
              desired = env->category_name(obs.desired_category[i]);
              global = env->category_name(d.action.category);
              break;
          }
          *trace << t << ',' << (d.warmup ? "warmup" : "run") << ',' << i << ',' << desired << ','
                 << global << ',' << fmt(d.weights[i]) << ',' << fmt(l[i]) << ','
                 << (out.satisfied[i] ? 1 : 0) << ',' << fmt(perf[i]) << ',' << d.active_option
                 << ',' << (d.dqn_action ? to_string(*d.dqn_action) : "none") << '\n';
        }
      }
      if (signals) {
        for (std::size_t i = 0; i < n; ++i) {
          *signals << t << ',' << i << ',' << fmt(sat[i]) << ',' << fmt(out.metric[i]) << '\n';
        }
      }
      res.closeness.push_back(std::move(l));
      res.satisfaction.push_back(std::move(sat));
      res.app_metric.push_back(out.metric);
      res.weights.push_back(d.weights);
    } catch (const Error& e) {
      throw Error(e.code(), "tick " + std::to_string(t) + ": " + e.what());
    }
  }
  res.updates = policy->updates();
  res.metrics = compute_metrics(res);
  return res;
}

// ---------------------------------------------------------------------------
// Metrics of one run

inline std::string human_key(std::size_t i) { return "h" + std::to_string(i); }

inline std::string pair_key(std::size_t i, std::size_t j) {
  return human_key(i) + "-" + human_key(j);
}

/// Evaluation window: the last `window` ticks, never reaching into warmup.
inline std::size_t evaluation_window(const ExperimentConfig& c) {
  return std::min(c.window, c.ticks - c.controller.warmup);
}

namespace detail {

inline std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t i,
                                  std::size_t first) {
  std::vector<double> out;
  out.reserve(rows.size() - first);
  for (std::size_t t = first; t < rows.size(); ++t) out.push_back(rows[t][i]);
  return out;
}

inline void pairwise_jsd(std::vector<MetricRow>& rows, const std::string& name,
                         const std::vector<Histogram>& h) {
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = i + 1; j < h.size(); ++j) {
      const double d = jsd(h[i], h[j]);
      rows.push_back({name, "pair", pair_key(i, j), d});
      sum += d;
      ++pairs;
    }
  }
  rows.push_back({name + "_avg", "run", "all", sum / static_cast<double>(pairs)});
}

}  // namespace detail

inline std::vector<MetricRow> compute_metrics(const RunResult& r) {
  const auto& c = r.config;
  const std::size_t n = c.n_humans;
  const std::size_t w = evaluation_window(c);
  const std::size_t first = r.closeness.size() - w;
  std::vector<MetricRow> rows;

  const auto opp = opportunity_probs(r.closeness, w);
  const auto odds = odds_probs(r.closeness, w);
  for (std::size_t i = 0; i < n; ++i) rows.push_back({"opportunity_prob", "human", human_key(i), opp[i]});
  rows.push_back({"opportunity_diff", "run", "all", avg_abs_pairwise_diff(opp)});
  for (std::size_t i = 0; i < n; ++i) rows.push_back({"odds_prob", "human", human_key(i), odds[i]});
  rows.push_back({"odds_diff", "run", "all", avg_abs_pairwise_diff(odds)});

  double min_l = 0.0, mean_l = 0.0;
  for (std::size_t t = first; t < r.closeness.size(); ++t) {
    const auto& l = r.closeness[t];
    min_l += *std::min_element(l.begin(), l.end());
    for (double x : l) mean_l += x / static_cast<double>(n);
  }
  rows.push_back({"min_closeness_mean", "run", "all", min_l / static_cast<double>(w)});
  rows.push_back({"closeness_mean", "run", "all", mean_l / static_cast<double>(w)});

  std::vector<Histogram> sat_h;
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = detail::column(r.satisfaction, i, first);
    const auto g = gaussian_fit(s);
    rows.push_back({"satisfaction_mu", "human", human_key(i), g.mu});
    rows.push_back({"satisfaction_sigma2", "human", human_key(i), g.sigma2});
    sat_h.push_back(make_histogram(s, 0.0, 1.0));
  }
  detail::pairwise_jsd(rows, "satisfaction_jsd", sat_h);

  std::vector<std::vector<double>> metric_cols;
  for (std::size_t i = 0; i < n; ++i) metric_cols.push_back(detail::column(r.app_metric, i, first));
  auto per_human_fraction = [&](const std::string& name, auto pred) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t k = 0;
      for (double x : metric_cols[i]) k += pred(x);
      const double f = static_cast<double>(k) / static_cast<double>(w);
      rows.push_back({name, "human", human_key(i), f});
      total += f;
    }
    rows.push_back({name + "_mean", "run", "all", total / static_cast<double>(n)});
  };
  switch (c.app_type) {
    case AppType::hvac: {
      std::vector<Histogram> h;
      for (std::size_t i = 0; i < n; ++i) {
        const auto g = gaussian_fit(metric_cols[i]);
        rows.push_back({"pmv_mu", "human", human_key(i), g.mu});
        rows.push_back({"pmv_sigma2", "human", human_key(i), g.sigma2});
        h.push_back(make_histogram(metric_cols[i], -3.0, 3.0));
      }
      detail::pairwise_jsd(rows, "pmv_jsd", h);
      per_human_fraction("pmv_comfortable", [](double p) { return std::abs(p) <= 0.5; });
      break;
    }
    case AppType::water: {
      std::vector<Histogram> h;
      for (std::size_t i = 0; i < n; ++i) h.push_back(make_histogram(metric_cols[i], 0.0, 2.0));
      detail::pairwise_jsd(rows, "br_jsd", h);
      per_human_fraction("br_above_80", [](double b) { return b > 0.8; });
      break;
    }
    case AppType::learning:
      per_human_fraction("le_positive", [](double le) { return le > 0.0; });
      break;
  }

  // time-weighted utilities of the post-warmup weight trace
  const std::size_t start = c.controller.warmup;
  const std::size_t horizon = r.weights.size() - start - 1;
  std::vector<double> util;
  for (std::size_t i = 0; i < n; ++i) {
    const auto wi = detail::column(r.weights, i, start);
    util.push_back(horizon >= 1 ? fairiot_utility(wi, horizon) : wi.back());
    rows.push_back({"weight_utility", "human", human_key(i), util.back()});
  }
  rows.push_back({"weight_cv", "run", "all", coefficient_of_variation(util)});
  rows.push_back({"updates", "run", "all", static_cast<double>(r.updates)});
  rows.push_back({"window", "run", "all", static_cast<double>(w)});
  return rows;
}

/// Value of a run-level (or any keyed) metric row.
inline double metric_value(std::span<const MetricRow> rows, std::string_view metric,
                           std::string_view key = "all") {
  for (const auto& r : rows) {
    if (r.metric == metric && r.key == key) return r.value;
  }
  throw Error("domain", "metric " + std::string(metric) + "/" + std::string(key) + " not found");
}

// ---------------------------------------------------------------------------
// Artifacts on disk

inline std::filesystem::path output_root(const std::string& fallback = "runs") {
  if (const char* env = std::getenv("FAIRO_OUT_ROOT"); env && *env) return env;
  return fallback;
}

inline std::string default_run_name(const ExperimentConfig& c) {
  return to_string(c.app_type) + "_" + to_string(c.method) + "_seed" + std::to_string(c.seed);
}

inline std::vector<double> moving_average(std::span<const double> x, std::size_t width) {
  std::vector<double> out(x.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    acc += x[t];
    if (t >= width) acc -= x[t - width];
    out[t] = acc / static_cast<double>(std::min(t + 1, width));
  }
  return out;
}

/// Writes config.json, trace.csv, signals.csv, metrics.csv and metrics.txt into `dir`.
/// With `smoothing` > 1 also writes smoothed.csv for plotting.
inline RunResult write_run(const ExperimentConfig& config, const std::filesystem::path& dir,
                           std::size_t smoothing = 0) {
  std::filesystem::create_directories(dir);
  std::ofstream trace(dir / "trace.csv", std::ios::binary);
  std::ofstream signals(dir / "signals.csv", std::ios::binary);
  require(trace && signals, "io", "cannot write into " + dir.string());
  RunResult res = run_experiment(config, &trace, &signals);

  nlohmann::json echo;
  echo["config"] = config_to_json(config);
  echo["config_hash"] = config_hash(config);
  echo["version"] = kVersion;
  std::ofstream(dir / "config.json", std::ios::binary) << echo.dump(2) << '\n';
  {
    std::ofstream m(dir / "metrics.csv", std::ios::binary);
    write_metrics_csv(res.metrics, m);
  }
  {
    std::ofstream m(dir / "metrics.txt", std::ios::binary);
    write_metrics_text(res.metrics, m);
  }
  if (smoothing > 1) {
    std::ofstream s(dir / "smoothed.csv", std::ios::binary);
    s << "tick,human,L,satisfaction,metric\n";
    for (std::size_t i = 0; i < config.n_humans; ++i) {
      const auto l = moving_average(detail::column(res.closeness, i, 0), smoothing);
      const auto v = moving_average(detail::column(res.satisfaction, i, 0), smoothing);
      const auto m = moving_average(detail::column(res.app_metric, i, 0), smoothing);
      for (std::size_t t = 0; t < l.size(); ++t) {
        s << t << ',' << i << ',' << fmt(l[t]) << ',' << fmt(v[t]) << ',' << fmt(m[t]) << '\n';
      }
    }
  }
  return res;
}

inline std::vector<MetricRow> read_metrics_csv(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)) && line == "metric,scope,human_or_pair,value",
          "io", "metrics CSV has an unexpected header");
  std::vector<MetricRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    MetricRow r;
    std::string v;
    require(std::getline(row, r.metric, ',') && std::getline(row, r.scope, ',') &&
                std::getline(row, r.key, ',') && std::getline(row, v),
            "io", "malformed metrics row: " + line);
    r.value = std::stod(v);
    rows.push_back(std::move(r));
  }
  return rows;
}

struct RunSummary {
  std::string label;
  AppType app_type = AppType::hvac;
  Method method = Method::fairo;
  std::size_t n_humans = 0;
  std::vector<MetricRow> metrics;
};

inline RunSummary summarize(const RunResult& r) {
  return {to_string(r.config.method), r.config.app_type, r.config.method, r.config.n_humans,
          r.metrics};
}

inline RunSummary load_run(const std::filesystem::path& dir) {
  std::ifstream cj(dir / "config.json");
  require(static_cast<bool>(cj), "io", "no config.json in " + dir.string());
  nlohmann::json echo;
  try {
    cj >> echo;
  } catch (const nlohmann::json::exception& e) {
    throw Error("io", "cannot parse " + (dir / "config.json").string() + ": " + e.what());
  }
  const ExperimentConfig c = config_from_json(echo.at("config"));
  std::ifstream mc(dir / "metrics.csv");
  require(static_cast<bool>(mc), "io", "no metrics.csv in " + dir.string());
  return {to_string(c.method), c.app_type, c.method, c.n_humans, read_metrics_csv(mc)};
}

// ---------------------------------------------------------------------------
// Comparison and sweeps

/// One block of rows per run (scope = run label), then, for every run-level
/// metric, FAIRO's reduction relative to each other run: (base - fairo) / base.
inline std::vector<MetricRow> compare(std::vector<RunSummary> runs) {
  require(!runs.empty(), "domain", "nothing to compare");
  std::map<std::string, int> seen;
  for (auto& r : runs) {
    require(r.app_type == runs.front().app_type && r.n_humans == runs.front().n_humans, "domain",
            "runs differ in app_type or n_humans");
    const int k = seen[r.label]++;
    if (k > 0) r.label += "#" + std::to_string(k);
  }
  std::vector<MetricRow> out;
  for (const auto& r : runs) {
    for (const auto& m : r.metrics) out.push_back({m.metric, r.label, m.key, m.value});
  }
  const RunSummary* fairo = nullptr;
  for (const auto& r : runs) {
    if (r.method == Method::fairo) {
      fairo = &r;
      break;
    }
  }
  if (fairo) {
    for (const auto& r : runs) {
      if (&r == fairo) continue;
      for (const auto& m : r.metrics) {
        if (m.key != "all" || m.metric == "updates" || m.metric == "window") continue;
        const double f = metric_value(fairo->metrics, m.metric);
        out.push_back({m.metric + "_reduction", r.label, "all", reduction(m.value, f)});
      }
    }
  }
  return out;
}

/// "1..10", "1,2,5" or "7".
inline std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> out;
  auto num = [&](std::string_view s) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    require(res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty(), "config",
            "bad seed '" + std::string(s) + "'");
    return v;
  };
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto a = num(text.substr(0, dots));
    const auto b = num(text.substr(dots + 2));
    require(a <= b, "config", "empty seed range");
    for (auto s = a; s <= b; ++s) out.push_back(s);
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = text.find(',', pos);
      const auto part = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
      out.push_back(num(part));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  }
  require(!out.empty(), "config", "no seeds given");
  return out;
}

/// Mean, min and max of every comparison row across seeds. Rows are matched by
/// (metric, scope, key); all reports must share the same row set.
inline std::vector<std::array<MetricRow, 3>> aggregate(
    const std::vector<std::vector<MetricRow>>& reports) {
  require(!reports.empty(), "domain", "nothing to aggregate");
  std::vector<std::array<MetricRow, 3>> out;
  for (std::size_t k = 0; k < reports.front().size(); ++k) {
    const auto& proto = reports.front()[k];
    double sum = 0.0, lo = proto.value, hi = proto.value;
    for (const auto& rep : reports) {
      require(rep.size() == reports.front().size() && rep[k].metric == proto.metric &&
                  rep[k].scope == proto.scope && rep[k].key == proto.key,
              "domain", "reports do not line up");
      sum += rep[k].value;
      lo = std::min(lo, rep[k].value);
      hi = std::max(hi, rep[k].value);
    }
    const double mean = sum / static_cast<double>(reports.size());
    out.push_back({MetricRow{proto.metric, proto.scope, proto.key, mean},
                   MetricRow{proto.metric, proto.scope, proto.key, lo},
                   MetricRow{proto.metric, proto.scope, proto.key, hi}});
  }
  return out;
}

inline void write_aggregate_csv(const std::vector<std::array<MetricRow, 3>>& agg,
                                std::ostream& os) {
  os << "metric,scope,human_or_pair,mean,min,max\n";
  for (const auto& a : agg) {
    os << a[0].metric << ',' << a[0].scope << ',' << a[0].key << ',' << fmt(a[0].value) << ','
       << fmt(a[1].value) << ',' << fmt(a[2].value) << '\n';
  }
}

/// Runs every method of the template for every seed under `root`:
/// root/seed_<s>/<method>/ plus root/seed_<s>/comparison.csv and root/aggregate.csv.
inline std::vector<std::array<MetricRow, 3>> sweep(const ExperimentConfig& tmpl,
                                                   const std::vector<std::uint64_t>& seeds,
                                                   const std::filesystem::path& root) {
  const std::vector<Method> methods = tmpl.methods.empty() ? std::vector<Method>{tmpl.method}
                                                           : tmpl.methods;
  std::vector<std::vector<MetricRow>> reports;
  for (const auto seed : seeds) {
    const auto seed_dir = root / ("seed_" + std::to_string(seed));
    std::vector<RunSummary> runs;
    for (const Method m : methods) {
      ExperimentConfig c = tmpl;
      c.seed = seed;
      c.method = m;
      c.methods.clear();
      runs.push_back(summarize(write_run(c, seed_dir / to_string(m))));
    }
    reports.push_back(compare(std::move(runs)));
    std::ofstream cmp(seed_dir / "comparison.csv", std::ios::binary);
    write_metrics_csv(reports.back(), cmp);
  }
  auto agg = aggregate(reports);
  std::filesystem::create_directories(root);
  std::ofstream out(root / "aggregate.csv", std::ios::binary);
  write_aggregate_csv(agg, out);
  return agg;
}

}  // namespace fairo
