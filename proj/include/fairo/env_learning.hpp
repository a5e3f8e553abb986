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

// Learners in a shared VR classroom. Each learner walks an 8-state chain
// (state 8 best) whose dynamics depend on the lesson mode and on the learner's
// tolerance to VR. States are 1-based in the API and in files.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fairo/activity.hpp"
#include "fairo/common.hpp"
#include "fairo/environment.hpp"

namespace fairo {

inline constexpr int kLearnerStates = 8;
inline constexpr int kLessonModes = 3;

enum class LessonMode : int { rest = 0, vr_on = 1, vr_off = 2 };

inline std::string to_string(LessonMode m) {
  switch (m) {
    case LessonMode::rest: return "break";
    case LessonMode::vr_on: return "vr_on";
    case LessonMode::vr_off: return "vr_off";
  }
  return "?";
}

inline LessonMode parse_lesson_mode(std::string_view s) {
  if (s == "break") return LessonMode::rest;
  if (s == "vr_on") return LessonMode::vr_on;
  if (s == "vr_off") return LessonMode::vr_off;
  throw Error("config", "unknown lesson mode '" + std::string(s) + "'");
}

enum class LearnerProfile { tolerant, intermediate, sensitive };

inline std::string to_string(LearnerProfile p) {
  switch (p) {
    case LearnerProfile::tolerant: return "tolerant";
    case LearnerProfile::intermediate: return "intermediate";
    case LearnerProfile::sensitive: return "sensitive";
  }
  return "?";
}

inline LearnerProfile parse_learner_profile(std::string_view s) {
  if (s == "tolerant") return LearnerProfile::tolerant;
  if (s == "intermediate") return LearnerProfile::intermediate;
  if (s == "sensitive") return LearnerProfile::sensitive;
  throw Error("config", "unknown learner profile '" + std::string(s) + "'");
}

using TransitionRow = std::array<double, kLearnerStates>;
using TransitionMatrix = std::array<TransitionRow, kLearnerStates>;

/// Transition matrices indexed [mode][from - 1][to - 1].
struct LearnerMDP {
  std::array<TransitionMatrix, kLessonModes> p{};

  const TransitionRow& row(LessonMode m, int state) const {
    return p[static_cast<std::size_t>(m)][static_cast<std::size_t>(state - 1)];
  }

  void validate() const {
    for (const auto& m : p) {
      for (const auto& r : m) {
        double sum = 0.0;
        for (double x : r) {
          require(x >= 0.0 && std::isfinite(x), "config", "transition probabilities must be >= 0");
          sum += x;
        }
        require(std::abs(sum - 1.0) <= 1e-9, "config", "transition rows must sum to 1");
      }
    }
  }
};

namespace detail {

// Row built from (offset, mass) pairs; mass past either end lands on the end state.
inline TransitionRow shifted_row(int from, std::initializer_list<std::pair<int, double>> moves) {
  TransitionRow r{};
  for (const auto& [off, mass] : moves) {
    const int to = std::clamp(from + off, 1, kLearnerStates);
    r[static_cast<std::size_t>(to - 1)] += mass;
  }
  return r;
}

}  // namespace detail

/// Synthesized default dynamics.
inline LearnerMDP default_learner_mdp(LearnerProfile profile) {
  LearnerMDP mdp;
  for (int s = 1; s <= kLearnerStates; ++s) {
    auto& rest = mdp.p[0][static_cast<std::size_t>(s - 1)];
    auto& on = mdp.p[1][static_cast<std::size_t>(s - 1)];
    auto& off = mdp.p[2][static_cast<std::size_t>(s - 1)];
    // a break pulls tired or overloaded learners back towards the middle
    if (s <= 3) rest = detail::shifted_row(s, {{1, 0.6}, {0, 0.4}});
    else if (s <= 5) rest = detail::shifted_row(s, {{0, 0.9}, {1, 0.05}, {-1, 0.05}});
    else rest = detail::shifted_row(s, {{-1, 0.5}, {0, 0.5}});
    off = detail::shifted_row(s, {{1, 0.3}, {0, 0.55}, {-1, 0.15}});
    switch (profile) {
      case LearnerProfile::tolerant:
        on = detail::shifted_row(s, {{2, 0.5}, {1, 0.3}, {0, 0.2}});
        break;
      case LearnerProfile::intermediate:
        on = detail::shifted_row(s, {{1, 0.5}, {2, 0.2}, {0, 0.1}, {-1, 0.2}});
        break;
      case LearnerProfile::sensitive:
        on = detail::shifted_row(s, {{-1, 0.5}, {-2, 0.2}, {0, 0.2}, {1, 0.1}});
        break;
    }
  }
  return mdp;
}

/// Linear value map, value(1) = 0 up to value(8) = top.
inline double state_value(int state, double top = 0.5) {
  return top * static_cast<double>(state - 1) / (kLearnerStates - 1);
}

inline double expected_next_value(const TransitionRow& row, double top = 0.5) {
  double e = 0.0;
  for (int s = 1; s <= kLearnerStates; ++s) e += row[static_cast<std::size_t>(s - 1)] * state_value(s, top);
  return e;
}

/// Best mode for a learner by expected next value; ties favour break, then vr_on.
inline LessonMode desired_mode(const LearnerMDP& mdp, int state, double top = 0.5) {
  int best = 0;
  double best_v = expected_next_value(mdp.row(LessonMode::rest, state), top);
  for (int m = 1; m < kLessonModes; ++m) {
    const double v = expected_next_value(mdp.row(static_cast<LessonMode>(m), state), top);
    if (v > best_v) {
      best = m;
      best_v = v;
    }
  }
  return static_cast<LessonMode>(best);
}

/// Expected value gained by everyone except `proposer` if `mode` is adopted.
inline double mode_effect(LessonMode mode, std::size_t proposer, std::span<const LearnerMDP* const> mdps,
                          std::span<const int> states, double top = 0.5) {
  require(mdps.size() == states.size(), "dimension", "one state per learner");
  double k = 0.0;
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (j == proposer) continue;
    k += expected_next_value(mdps[j]->row(mode, states[j]), top) - state_value(states[j], top);
  }
  return k;
}

inline int sample_transition(const TransitionRow& row, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  int last = 1;
  for (int s = 1; s <= kLearnerStates; ++s) {
    const double p = row[static_cast<std::size_t>(s - 1)];
    if (p <= 0.0) continue;
    acc += p;
    last = s;
    if (u < acc) return s;
  }
  return last;  // rounding slack
}

/// Improvement plus current value, clamped to [-1, 1].
inline double learning_experience(int prev_state, int cur_state, double top = 0.5) {
  const double cur = state_value(cur_state, top);
  return std::clamp(cur - state_value(prev_state, top) + cur, -1.0, 1.0);
}

/// Matrix file: blocks of `profile <name> action <mode>` followed by 8 rows of 8 numbers.
/// Missing blocks keep the defaults.
inline std::array<LearnerMDP, 3> read_learner_mdps(std::istream& is) {
  std::array<LearnerMDP, 3> out = {default_learner_mdp(LearnerProfile::tolerant),
                                   default_learner_mdp(LearnerProfile::intermediate),
                                   default_learner_mdp(LearnerProfile::sensitive)};
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream head(line);
    std::string kw1, prof, kw2, act;
    require(static_cast<bool>(head >> kw1 >> prof >> kw2 >> act) && kw1 == "profile" &&
                kw2 == "action",
            "io", "expected 'profile <name> action <mode>', got: " + line);
    auto& m = out[static_cast<std::size_t>(parse_learner_profile(prof))]
                  .p[static_cast<std::size_t>(parse_lesson_mode(act))];
    for (int r = 0; r < kLearnerStates; ++r) {
      require(static_cast<bool>(std::getline(is, line)), "io", "truncated matrix block");
      std::istringstream row(line);
      for (int c = 0; c < kLearnerStates; ++c) {
        require(static_cast<bool>(row >> m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]),
                "io", "matrix rows need 8 numbers: " + line);
      }
    }
  }
  for (const auto& mdp : out) mdp.validate();
  return out;
}

inline void write_learner_mdps(const std::array<LearnerMDP, 3>& mdps, std::ostream& os) {
  for (int p = 0; p < 3; ++p) {
    for (int a = 0; a < kLessonModes; ++a) {
      os << "profile " << to_string(static_cast<LearnerProfile>(p)) << " action "
         << to_string(static_cast<LessonMode>(a)) << '\n';
      for (const auto& r : mdps[static_cast<std::size_t>(p)].p[static_cast<std::size_t>(a)]) {
        for (int c = 0; c < kLearnerStates; ++c) os << (c ? " " : "") << fmt(r[static_cast<std::size_t>(c)]);
        os << '\n';
      }
    }
  }
}

struct LearningConfig {
  std::size_t humans = 3;
  std::size_t ticks = 15000;
  std::size_t day_length = kTicksPerDay;
  double value_top = 0.5;
  std::vector<LearnerProfile> profiles = {LearnerProfile::tolerant, LearnerProfile::intermediate,
                                          LearnerProfile::sensitive};
  std::array<LearnerMDP, 3> mdps = {default_learner_mdp(LearnerProfile::tolerant),
                                    default_learner_mdp(LearnerProfile::intermediate),
                                    default_learner_mdp(LearnerProfile::sensitive)};
};

class LearningEnvironment final : public Environment {
 public:
  LearningEnvironment(const LearningConfig& config, std::uint64_t seed)
      : config_(config),
        transition_rng_(Rng::stream(seed, "env/learning")),
        reset_rng_(Rng::stream(seed, "reset")) {
    require(config_.day_length > 0, "config", "day_length must be positive");
    require(!config_.profiles.empty(), "config", "learning needs at least one profile");
    for (const auto& m : config_.mdps) m.validate();
    for (std::size_t i = 0; i < config_.humans; ++i) {
      const auto prof = config_.profiles[i % config_.profiles.size()];
      mdps_.push_back(&config_.mdps[static_cast<std::size_t>(prof)]);
    }
    states_.assign(config_.humans, 1);
  }

  LearningEnvironment(const LearningEnvironment&) = delete;
  LearningEnvironment& operator=(const LearningEnvironment&) = delete;

  AppType type() const override { return AppType::learning; }
  std::size_t humans() const override { return config_.humans; }
  const std::vector<int>& states() const { return states_; }

  std::string category_name(int c) const override {
    return to_string(static_cast<LessonMode>(c));
  }

  Observation observe(std::size_t tick) override {
    if (tick % config_.day_length == 0) {
      for (auto& s : states_) s = reset_rng_.bernoulli(0.5) ? 1 : 3;
    }
    Observation obs;
    obs.desired_category.resize(config_.humans);
    obs.effects.resize(config_.humans);
    for (std::size_t i = 0; i < config_.humans; ++i) {
      const LessonMode m = desired_mode(*mdps_[i], states_[i], config_.value_top);
      obs.desired_category[i] = static_cast<int>(m);
      obs.effects[i] = mode_effect(m, i, mdps_, states_, config_.value_top);
    }
    return obs;
  }

  Outcome apply(std::size_t, const GlobalAction& action) override {
    require(action.category >= 0 && action.category < kLessonModes, "domain",
            "lesson mode out of range");
    const auto mode = static_cast<LessonMode>(action.category);
    Outcome out;
    out.satisfied.resize(config_.humans);
    out.score.resize(config_.humans);
    out.metric.resize(config_.humans);
    for (std::size_t i = 0; i < config_.humans; ++i) {
      const int prev = states_[i];
      states_[i] = sample_transition(mdps_[i]->row(mode, prev), transition_rng_);
      const double le = learning_experience(prev, states_[i], config_.value_top);
      out.metric[i] = le;
      out.score[i] = le;
      out.satisfied[i] = le > 0.0;
    }
    return out;
  }

 private:
  LearningConfig config_;
  std::vector<const LearnerMDP*> mdps_;
  std::vector<int> states_;
  Rng transition_rng_;
  Rng reset_rng_;
};

}  // namespace fairo
