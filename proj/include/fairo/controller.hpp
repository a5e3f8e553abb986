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

// The fairness-aware controller and the baseline policies it is compared
// against.
//
// One option per human. The option whose human has the lowest closeness is
// active; its network nudges that human's contribution weight up, down or not
// at all. The shared weight vector is renormalized after every nudge and turned
// into a global action according to the application type.

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairo/common.hpp"
#include "fairo/environment.hpp"
#include "fairo/fairness.hpp"
#include "fairo/qnet.hpp"

namespace fairo {

// ---------------------------------------------------------------------------
// Weights

class WeightVector {
 public:
  static WeightVector uniform(std::size_t n, double floor) {
    return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)), floor);
  }

  /// Takes ownership of already-normalized weights.
  WeightVector(std::vector<double> w, double floor) : w_(std::move(w)), floor_(floor) {
    require(!w_.empty(), "domain", "empty weight vector");
    require(floor_ >= 0.0 && floor_ * static_cast<double>(w_.size()) <= 1.0, "domain",
            "weight floor too large for the number of humans");
  }

  std::size_t size() const { return w_.size(); }
  double floor() const { return floor_; }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const { return w_; }

  friend WeightVector adjust_weights(const WeightVector& w, std::size_t i, int direction,
                                     double delta_w);

 private:
  std::vector<double> w_;
  double floor_;
};

/// Rescales `raw` onto the simplex while keeping every entry at or above
/// `floor`: entries that would fall below are pinned and the rest share the
/// remaining mass in proportion to their raw values.
inline std::vector<double> normalize_with_floor(std::vector<double> raw, double floor) {
  const std::size_t n = raw.size();
  std::vector<bool> pinned(n, false);
  for (std::size_t pass = 0; pass <= n; ++pass) {
    double free_mass = 1.0;
    double free_raw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pinned[i]) free_mass -= floor;
      else free_raw += raw[i];
    }
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (pinned[i]) continue;
      const double share = free_raw > 0.0 ? raw[i] / free_raw * free_mass : free_mass;
      if (share < floor) {
        pinned[i] = true;
        changed = true;
      }
    }
    if (!changed) {
      std::vector<double> out(n);
      std::size_t n_free = 0;
      for (std::size_t i = 0; i < n; ++i) n_free += pinned[i] ? 0 : 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (pinned[i]) out[i] = floor;
        else out[i] = free_raw > 0.0 ? raw[i] / free_raw * free_mass
                                     : free_mass / static_cast<double>(n_free);
      }
      return out;
    }
  }
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

/// Steps w_i by direction*delta_w, clamps it to [floor, 1], then renormalizes.
inline WeightVector adjust_weights(const WeightVector& w, std::size_t i, int direction,
                                   double delta_w) {
  require(i < w.size(), "dimension", "weight index out of range");
  if (direction == 0) return w;
  std::vector<double> raw = w.w_;
  raw[i] = std::clamp(raw[i] + direction * delta_w, w.floor_, 1.0);
  return WeightVector(normalize_with_floor(std::move(raw), w.floor_), w.floor_);
}

// ---------------------------------------------------------------------------
// Global actions

inline double global_action_type1(std::span<const double> w, std::span<const double> desired) {
  require(w.size() == desired.size(), "dimension", "weights and preferences differ in length");
  double a = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) a += w[i] * desired[i];
  return a;
}

inline std::vector<double> global_allocation_type2(std::span<const double> w, double resource) {
  require(resource >= 0.0, "domain", "resource must be nonnegative");
  std::vector<double> s(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) s[i] = w[i] * resource;
  return s;
}

/// Index of the preference with the largest weighted effect (lowest index on ties).
inline std::size_t global_choice_type3(std::span<const double> w, std::span<const double> effects) {
  require(w.size() == effects.size() && !w.empty(), "dimension",
          "weights and effects differ in length");
  std::size_t best = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] * effects[i] > w[best] * effects[best]) best = i;
  }
  return best;
}

template <typename T>
T global_action_type3(std::span<const double> w, std::span<const double> effects,
                      std::span<const T> desired) {
  require(desired.size() == w.size(), "dimension", "weights and preferences differ in length");
  return desired[global_choice_type3(w, effects)];
}

/// zeta*F + (1-zeta)*P for terms already in [-1, 1].
inline double option_reward(double zeta, double fairness_term, double performance) {
  require(zeta >= 0.0 && zeta <= 1.0, "domain", "zeta must lie in [0,1]");
  require(fairness_term >= -1.0 && fairness_term <= 1.0 && performance >= -1.0 &&
              performance <= 1.0,
          "domain", "reward terms must lie in [-1,1]");
  return zeta * fairness_term + (1.0 - zeta) * performance;
}

/// Turns a weight vector into the application's global action.
inline GlobalAction compose_global_action(AppType type, std::span<const double> w,
                                          const Observation& obs) {
  GlobalAction g;
  switch (type) {
    case AppType::hvac:
      g.setpoint = global_action_type1(w, obs.desired);
      break;
    case AppType::water:
      g.allocation = global_allocation_type2(w, obs.resource);
      break;
    case AppType::learning: {
      const std::size_t j = global_choice_type3(w, obs.effects);
      g.chosen = static_cast<int>(j);
      g.category = obs.desired_category.at(j);
      break;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Methods

enum class Method {
  fairo,
  average,
  weighted_average,
  round_robin,
  weighted_rr,
  mono_dqn_3in,
  mono_dqn_4in,
};

inline std::string to_string(Method m) {
  switch (m) {
    case Method::fairo: return "fairo";
    case Method::average: return "average";
    case Method::weighted_average: return "weighted_average";
    case Method::round_robin: return "round_robin";
    case Method::weighted_rr: return "weighted_rr";
    case Method::mono_dqn_3in: return "mono_dqn_3in";
    case Method::mono_dqn_4in: return "mono_dqn_4in";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  for (Method m : {Method::fairo, Method::average, Method::weighted_average, Method::round_robin,
                   Method::weighted_rr, Method::mono_dqn_3in, Method::mono_dqn_4in}) {
    if (s == to_string(m)) return m;
  }
  throw Error("config", "unknown method '" + std::string(s) + "'");
}

/// Weighted variants only make sense when the preferences are resource demands.
inline bool method_valid_for(Method m, AppType t) {
  if (m == Method::weighted_average || m == Method::weighted_rr) return t == AppType::water;
  return true;
}

struct StepDecision {
  GlobalAction action;
  std::vector<double> weights;
  int active_option = -1;
  std::optional<Adjustment> dqn_action;
  bool warmup = false;
};

// ---------------------------------------------------------------------------
// Baselines

inline std::vector<double> one_hot(std::size_t n, std::size_t i) {
  std::vector<double> w(n, 0.0);
  w[i] = 1.0;
  return w;
}

/// Shares of `resource` when human `chosen` is served first and the leftover
/// goes to the others, equally or in proportion to their demand.
inline std::vector<double> rotation_allocation(std::span<const double> demand, double resource,
                                               std::size_t chosen, bool proportional) {
  const std::size_t n = demand.size();
  std::vector<double> s(n, 0.0);
  s[chosen] = std::min(demand[chosen], resource);
  const double leftover = resource - s[chosen];
  double other_demand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != chosen) other_demand += demand[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i == chosen) continue;
    if (proportional && other_demand > 0.0) s[i] = leftover * demand[i] / other_demand;
    else s[i] = leftover / static_cast<double>(n - 1);
  }
  return s;
}

/// Decision of the non-learning baselines at tick t.
inline StepDecision baseline_step(Method kind, AppType type, std::size_t t, const Observation& obs) {
  require(method_valid_for(kind, type), "config",
          "method " + to_string(kind) + " is not defined for app type " + to_string(type));
  const std::size_t n = type == AppType::learning ? obs.desired_category.size() : obs.desired.size();
  require(n >= 1, "dimension", "observation has no humans");
  const std::size_t chosen = t % n;
  StepDecision d;
  switch (kind) {
    case Method::average: {
      d.weights.assign(n, 1.0 / static_cast<double>(n));
      if (type == AppType::learning) {
        // median effect under uniform weights
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          return obs.effects[a] < obs.effects[b];
        });
        const std::size_t j = order[(n - 1) / 2];
        d.action.chosen = static_cast<int>(j);
        d.action.category = obs.desired_category[j];
      } else {
        d.action = compose_global_action(type, d.weights, obs);
      }
      break;
    }
    case Method::round_robin:
    case Method::weighted_rr:
      d.weights = one_hot(n, chosen);
      d.action.chosen = static_cast<int>(chosen);
      if (type == AppType::hvac) {
        d.action.setpoint = obs.desired[chosen];
      } else if (type == AppType::water) {
        d.action.allocation = rotation_allocation(obs.desired, obs.resource, chosen,
                                                  kind == Method::weighted_rr);
        d.weights.assign(n, 0.0);
        if (obs.resource > 0.0) {
          for (std::size_t i = 0; i < n; ++i) d.weights[i] = d.action.allocation[i] / obs.resource;
        }
      } else {
        d.action.category = obs.desired_category[chosen];
      }
      break;
    case Method::weighted_average: {
      const double total = std::accumulate(obs.desired.begin(), obs.desired.end(), 0.0);
      d.weights.assign(n, 1.0 / static_cast<double>(n));
      if (total > 0.0) {
        for (std::size_t i = 0; i < n; ++i) d.weights[i] = obs.desired[i] / total;
      }
      d.action.allocation = global_allocation_type2(d.weights, obs.resource);
      break;
    }
    default:
      throw Error("config", "method " + to_string(kind) + " is not a fixed baseline");
  }
  return d;
}

// ---------------------------------------------------------------------------
// Policies

/// What an option's fairness improvement is measured against: the previous
/// tick, or the option's own closeness when it last became active.
enum class ImprovementBaseline { previous_tick, activation };

inline std::string to_string(ImprovementBaseline b) {
  return b == ImprovementBaseline::activation ? "activation" : "previous_tick";
}

inline ImprovementBaseline parse_improvement_baseline(std::string_view s) {
  if (s == "activation") return ImprovementBaseline::activation;
  if (s == "previous_tick") return ImprovementBaseline::previous_tick;
  throw Error("config", "unknown improvement baseline '" + std::string(s) + "'");
}

struct ControllerConfig {
  double zeta = 0.5;
  ImprovementBaseline improvement = ImprovementBaseline::previous_tick;
  double delta_w = 0.05;
  double w_floor = 0.01;
  std::size_t warmup = 1200;
  std::size_t hidden = 32;
  TrainConfig train;
};

/// Common stepping contract: round-robin during warmup, then the method's own
/// rule. `learn` must follow every `decide` once the environment has reacted.
class Policy {
 public:
  Policy(AppType type, std::size_t n, std::size_t warmup) : type_(type), n_(n), warmup_(warmup) {}
  virtual ~Policy() = default;

  StepDecision decide(std::size_t tick, const SatisfactionLedger& ledger, const Observation& obs) {
    in_warmup_ = tick < warmup_;
    if (in_warmup_) {
      StepDecision d = baseline_step(Method::round_robin, type_, tick, obs);
      d.warmup = true;
      return d;
    }
    return decide_policy(tick, ledger, obs);
  }

  /// `after` is the ledger updated with this tick's satisfaction flags.
  void learn(const SatisfactionLedger& after, std::span<const double> performance) {
    if (!in_warmup_) learn_policy(after, performance);
  }

  /// Number of network updates so far.
  virtual std::size_t updates() const { return 0; }

  AppType type() const { return type_; }
  std::size_t humans() const { return n_; }
  std::size_t warmup() const { return warmup_; }

 protected:
  virtual StepDecision decide_policy(std::size_t tick, const SatisfactionLedger& ledger,
                                     const Observation& obs) = 0;
  virtual void learn_policy(const SatisfactionLedger&, std::span<const double>) {}

  AppType type_;
  std::size_t n_;
  std::size_t warmup_;
  bool in_warmup_ = false;
};

class BaselinePolicy final : public Policy {
 public:
  BaselinePolicy(Method kind, AppType type, std::size_t n, std::size_t warmup)
      : Policy(type, n, warmup), kind_(kind) {
    require(method_valid_for(kind, type), "config",
            "method " + to_string(kind) + " is not defined for app type " + to_string(type));
  }

 protected:
  StepDecision decide_policy(std::size_t tick, const SatisfactionLedger&,
                             const Observation& obs) override {
    return baseline_step(kind_, type_, tick, obs);
  }

 private:
  Method kind_;
};

/// One option per human, each with its own Q-network, sharing one weight vector.
class FairoAgent final : public Policy {
 public:
  struct Option {
    QNetwork net;
    double prev_closeness = 1.0;
  };

  FairoAgent(AppType type, std::size_t n, const ControllerConfig& config, std::uint64_t seed)
      : Policy(type, n, config.warmup),
        config_(config),
        weights_(WeightVector::uniform(n, config.w_floor)),
        explore_(Rng::stream(seed, "explore")) {
    config_.train.validate();
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t net_seed =
          Rng::stream(seed, "qnet/option/" + std::to_string(i)).next_u64();
      options_.push_back({QNetwork(n + 1, config.hidden, net_seed), 1.0});
    }
  }

  const WeightVector& weights() const { return weights_; }
  const std::vector<Option>& options() const { return options_; }
  std::size_t updates() const override { return updates_; }
  double last_reward() const { return last_reward_; }

 protected:
  StepDecision decide_policy(std::size_t, const SatisfactionLedger& ledger,
                             const Observation& obs) override {
    const FairnessState state = fairness_state(ledger);
    const std::size_t i = next_option(active_, state);
    if (!active_ || *active_ != i) options_[i].prev_closeness = state[i];
    active_ = i;

    input_ = augment_state(state, ledger, i).as_input();
    const double eps = config_.train.epsilon_at(updates_);
    action_ = select_action(options_[i].net, input_, eps, explore_);
    const auto adj = static_cast<Adjustment>(action_);
    weights_ = adjust_weights(weights_, i, direction_of(adj), config_.delta_w);

    StepDecision d;
    d.action = compose_global_action(type_, weights_.values(), obs);
    d.weights.assign(weights_.values().begin(), weights_.values().end());
    d.active_option = static_cast<int>(i);
    d.dqn_action = adj;
    return d;
  }

  void learn_policy(const SatisfactionLedger& after, std::span<const double> performance) override {
    const std::size_t i = *active_;
    const FairnessState next = fairness_state(after);
    const double f = fairness_reward_term(options_[i].prev_closeness, next[i]);
    const double p = std::clamp(performance[i], -1.0, 1.0);
    last_reward_ = option_reward(config_.zeta, f, p);
    require(std::isfinite(last_reward_), "numeric", "non-finite option reward");
    const std::vector<double> next_input = augment_state(next, after, i).as_input();
    td_update(options_[i].net, input_, action_, last_reward_, next_input, config_.train);
    if (config_.improvement == ImprovementBaseline::previous_tick) {
      options_[i].prev_closeness = next[i];
    }
    ++updates_;
  }

 private:
  ControllerConfig config_;
  WeightVector weights_;
  Rng explore_;
  std::vector<Option> options_;
  std::optional<std::size_t> active_;
  std::vector<double> input_;
  std::size_t action_ = 0;
  std::size_t updates_ = 0;
  double last_reward_ = 0.0;
};

/// Single network over the whole fairness state, adjusting the weight of the
/// currently least-close human; rewarded with averages over all humans.
class MonoDqnAgent final : public Policy {
 public:
  MonoDqnAgent(AppType type, std::size_t n, bool argmin_input, const ControllerConfig& config,
               std::uint64_t seed)
      : Policy(type, n, config.warmup),
        config_(config),
        argmin_input_(argmin_input),
        weights_(WeightVector::uniform(n, config.w_floor)),
        explore_(Rng::stream(seed, "explore")),
        net_(argmin_input ? n + 1 : n, config.hidden,
             Rng::stream(seed, "qnet/mono").next_u64()) {
    config_.train.validate();
  }

  const WeightVector& weights() const { return weights_; }
  std::size_t updates() const override { return updates_; }

 protected:
  StepDecision decide_policy(std::size_t, const SatisfactionLedger& ledger,
                             const Observation& obs) override {
    const FairnessState state = fairness_state(ledger);
    target_ = active_option(state);
    prev_mean_ = mean(state);
    input_ = make_input(state);
    action_ = select_action(net_, input_, config_.train.epsilon_at(updates_), explore_);
    const auto adj = static_cast<Adjustment>(action_);
    weights_ = adjust_weights(weights_, target_, direction_of(adj), config_.delta_w);

    StepDecision d;
    d.action = compose_global_action(type_, weights_.values(), obs);
    d.weights.assign(weights_.values().begin(), weights_.values().end());
    d.active_option = static_cast<int>(target_);
    d.dqn_action = adj;
    return d;
  }

  void learn_policy(const SatisfactionLedger& after, std::span<const double> performance) override {
    const FairnessState next = fairness_state(after);
    const double f = fairness_reward_term(prev_mean_, mean(next));
    double p = 0.0;
    for (double x : performance) p += std::clamp(x, -1.0, 1.0);
    p /= static_cast<double>(performance.size());
    const double r = option_reward(config_.zeta, f, p);
    require(std::isfinite(r), "numeric", "non-finite reward");
    td_update(net_, input_, action_, r, make_input(next), config_.train);
    ++updates_;
  }

 private:
  static double mean(const FairnessState& s) {
    return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  }

  std::vector<double> make_input(const FairnessState& s) const {
    std::vector<double> x = s;
    if (argmin_input_) {
      x.push_back(static_cast<double>(active_option(s)) / static_cast<double>(n_ - 1));
    }
    return x;
  }

  ControllerConfig config_;
  bool argmin_input_;
  WeightVector weights_;
  Rng explore_;
  QNetwork net_;
  std::vector<double> input_;
  std::size_t target_ = 0;
  std::size_t action_ = 0;
  std::size_t updates_ = 0;
  double prev_mean_ = 1.0;
};

inline std::unique_ptr<Policy> make_policy(Method method, AppType type, std::size_t n,
                                           const ControllerConfig& config, std::uint64_t seed) {
  require(method_valid_for(method, type), "config",
          "method " + to_string(method) + " is not defined for app type " + to_string(type));
  switch (method) {
    case Method::fairo: return std::make_unique<FairoAgent>(type, n, config, seed);
    case Method::mono_dqn_3in:
      return std::make_unique<MonoDqnAgent>(type, n, false, config, seed);
    case Method::mono_dqn_4in:
      return std::make_unique<MonoDqnAgent>(type, n, true, config, seed);
    default: return std::make_unique<BaselinePolicy>(method, type, n, config.warmup);
  }
}

}  // namespace fairo
