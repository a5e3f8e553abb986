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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fairo/common.hpp"

namespace fairo {

/// Shape of the shared decision: one numeric value (hvac), a split of a
/// resource (water) or one categorical choice (learning).
enum class AppType { hvac, water, learning };

inline std::string to_string(AppType t) {
  switch (t) {
    case AppType::hvac: return "hvac";
    case AppType::water: return "water";
    case AppType::learning: return "learning";
  }
  return "?";
}

inline AppType parse_app_type(std::string_view s) {
  if (s == "hvac") return AppType::hvac;
  if (s == "water") return AppType::water;
  if (s == "learning") return AppType::learning;
  throw Error("config", "unknown app_type '" + std::string(s) + "'");
}

/// What the context engine reports before a decision.
struct Observation {
  std::vector<double> desired;        // numeric preferences (hvac setpoints, water demands)
  std::vector<int> desired_category;  // categorical preferences (learning)
  double resource = 0.0;              // shared resource available this tick (water)
  std::vector<double> effects;        // effect of adopting each human's preference (learning)
};

struct GlobalAction {
  double setpoint = 0.0;
  std::vector<double> allocation;
  int category = -1;
  int chosen = -1;  // human whose preference was adopted, when that is meaningful
};

/// Consequences of a global action for every human.
struct Outcome {
  std::vector<bool> satisfied;
  std::vector<double> score;   // application performance mapped to [-1, 1]
  std::vector<double> metric;  // raw application metric (PMV, balance rate, learning experience)
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual AppType type() const = 0;
  virtual std::size_t humans() const = 0;
  virtual Observation observe(std::size_t tick) = 0;
  virtual Outcome apply(std::size_t tick, const GlobalAction& action) = 0;

  /// Human-readable label for a categorical action (learning only).
  virtual std::string category_name(int) const { return {}; }
};

/// Share of the performance signal carried by the satisfied fraction v/(u+v).
inline constexpr double kSatisfactionShare = 0.2;

inline double performance_term(double satisfaction, double app_score) {
  return kSatisfactionShare * satisfaction + (1.0 - kSatisfactionShare) * app_score;
}

}  // namespace fairo
