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

// Households sharing an insufficient water supply, each buffered by a tank.

#pragma once

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fairo/activity.hpp"
#include "fairo/common.hpp"
#include "fairo/environment.hpp"

namespace fairo {

/// Shared supply for one tick: 1.5 times the largest instantaneous demand.
inline double resource_at(std::span<const double> demands, double factor = 1.5) {
  double m = 0.0;
  for (double d : demands) {
    require(d >= 0.0, "domain", "demand must be nonnegative");
    m = std::max(m, d);
  }
  return factor * m;
}

struct Tank {
  double level = 0.0;
  double capacity = 0.0;
};

struct TankStep {
  Tank tank;
  double shortfall = 0.0;
};

/// Demand is served from the supply first, then the reserve; surplus is kept up to capacity.
inline TankStep tank_step(Tank tank, double supply, double demand) {
  require(supply >= 0.0 && demand >= 0.0, "domain", "supply and demand must be nonnegative");
  const double available = supply + tank.level;
  const double consumed = std::min(available, demand);
  tank.level = std::min(available - consumed, tank.capacity);
  return {tank, demand - consumed};
}

inline constexpr double kBalanceRateCeiling = 2.0;

/// (supply + reserve) / demand, 1 when nothing is demanded. Uncapped.
inline double balance_rate(double supply, double reserve, double demand) {
  if (demand == 0.0) return 1.0;
  return (supply + reserve) / demand;
}

inline double reported_balance_rate(double br) { return std::min(br, kBalanceRateCeiling); }

inline double balance_score(double br) { return 2.0 * std::min(br, 1.0) - 1.0; }

/// Gallons per tick for each activity.
struct DemandTable {
  std::array<double, kNumActivities> gallons = {0.5, 2.0, 8.0, 3.0};
  double scale = 1.0;

  double operator()(Activity a) const {
    return scale * gallons[static_cast<std::size_t>(a)];
  }
};

/// demands[tick][household] in gallons.
using DemandTrace = std::vector<std::vector<double>>;

inline DemandTrace demand_trace(const Schedule& schedule, const DemandTable& table) {
  DemandTrace out(schedule.size());
  for (std::size_t t = 0; t < schedule.size(); ++t) {
    out[t].reserve(schedule[t].size());
    for (Activity a : schedule[t]) out[t].push_back(table(a));
  }
  return out;
}

/// CSV with header `tick,household,gallons`.
inline void write_demand_csv(const DemandTrace& trace, std::ostream& os) {
  os << "tick,household,gallons\n";
  os.precision(17);
  for (std::size_t t = 0; t < trace.size(); ++t) {
    for (std::size_t h = 0; h < trace[t].size(); ++h) {
      os << t << ',' << h << ',' << trace[t][h] << '\n';
    }
  }
}

inline DemandTrace read_demand_csv(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)) && line == "tick,household,gallons", "io",
          "demand CSV must start with 'tick,household,gallons'");
  DemandTrace out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tick, hh, gal;
    require(std::getline(row, tick, ',') && std::getline(row, hh, ',') && std::getline(row, gal),
            "io", "malformed demand row: " + line);
    const auto t = static_cast<std::size_t>(std::stoul(tick));
    const auto h = static_cast<std::size_t>(std::stoul(hh));
    const double g = std::stod(gal);
    require(g >= 0.0, "io", "negative demand in row: " + line);
    if (out.size() <= t) out.resize(t + 1);
    if (out[t].size() <= h) out[t].resize(h + 1, 0.0);
    out[t][h] = g;
  }
  return out;
}

struct WaterConfig {
  std::size_t humans = 3;
  std::size_t ticks = 15000;
  double satisfied_rate = 0.8;
  double resource_factor = 1.5;
  // tank capacity in multiples of the household's average daily demand
  double tank_capacity_factor = 2.0;
  double initial_level = 0.0;
  DemandTable demand;
  std::vector<ProfileKind> profiles = {ProfileKind::organized, ProfileKind::intermediate,
                                       ProfileKind::random};
};

class WaterEnvironment final : public Environment {
 public:
  WaterEnvironment(const WaterConfig& config, std::uint64_t seed)
      : WaterEnvironment(config, demand_trace(generate_schedule(config.profiles, config.humans,
                                                                config.ticks, seed),
                                              config.demand)) {}

  WaterEnvironment(const WaterConfig& config, DemandTrace demands)
      : config_(config), demands_(std::move(demands)) {
    require(demands_.size() >= config_.ticks, "config", "demand trace shorter than the run");
    require(config_.tank_capacity_factor >= 0.0 && config_.initial_level >= 0.0, "config",
            "tank parameters must be nonnegative");
    std::vector<double> mean(config_.humans, 0.0);
    for (std::size_t t = 0; t < config_.ticks; ++t) {
      require(demands_[t].size() == config_.humans, "config",
              "demand rows must cover every household");
      for (std::size_t h = 0; h < config_.humans; ++h) mean[h] += demands_[t][h];
    }
    for (std::size_t h = 0; h < config_.humans; ++h) {
      const double per_tick = mean[h] / static_cast<double>(std::max<std::size_t>(1, config_.ticks));
      const double cap = config_.tank_capacity_factor * per_tick * static_cast<double>(kTicksPerDay);
      tanks_.push_back({std::min(config_.initial_level, cap), cap});
    }
  }

  AppType type() const override { return AppType::water; }
  std::size_t humans() const override { return config_.humans; }
  const std::vector<Tank>& tanks() const { return tanks_; }
  const DemandTrace& demands() const { return demands_; }

  Observation observe(std::size_t tick) override {
    Observation obs;
    obs.desired = demands_[tick];
    obs.resource = resource_at(obs.desired, config_.resource_factor);
    return obs;
  }

  Outcome apply(std::size_t tick, const GlobalAction& action) override {
    require(action.allocation.size() == config_.humans, "dimension",
            "allocation must cover every household");
    Outcome out;
    out.satisfied.resize(config_.humans);
    out.score.resize(config_.humans);
    out.metric.resize(config_.humans);
    for (std::size_t h = 0; h < config_.humans; ++h) {
      const double d = demands_[tick][h];
      const double supply = action.allocation[h];
      const double br = balance_rate(supply, tanks_[h].level, d);
      tanks_[h] = tank_step(tanks_[h], supply, d).tank;
      out.metric[h] = reported_balance_rate(br);
      out.score[h] = balance_score(br);
      out.satisfied[h] = br >= config_.satisfied_rate;
    }
    return out;
  }

 private:
  WaterConfig config_;
  DemandTrace demands_;
  std::vector<Tank> tanks_;
};

}  // namespace fairo
