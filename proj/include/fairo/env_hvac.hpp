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

// Shared-thermostat house: one setpoint drives every room, each room holds one
// occupant whose preferred setpoint follows their current activity.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fairo/activity.hpp"
#include "fairo/common.hpp"
#include "fairo/environment.hpp"
#include "fairo/pmv.hpp"

namespace fairo {

/// Preferred thermostat setpoint in degrees Fahrenheit.
inline double desired_setpoint(Activity a) {
  switch (a) {
    case Activity::sleeping: return 62.0;
    case Activity::relaxing: return 77.0;
    case Activity::domestic_work: return 72.0;
    case Activity::work_from_home: return 67.0;
  }
  return 72.0;
}

struct ComfortParams {
  std::array<double, kNumActivities> met = {0.8, 1.0, 2.0, 1.2};
  // Fitted so each activity's preferred setpoint gives PMV ~ 0 (bedding for sleep).
  std::array<double, kNumActivities> clo = {3.50, 0.69, 0.19, 1.35};
  double air_velocity = 0.1;
  double relative_humidity = 50.0;
};

inline double pmv(double indoor_temp_f, Activity activity, const ComfortParams& params) {
  const auto k = static_cast<std::size_t>(activity);
  PmvInputs in;
  in.air_temp_c = fahrenheit_to_celsius(indoor_temp_f);
  in.radiant_temp_c = in.air_temp_c;
  in.air_velocity = params.air_velocity;
  in.relative_humidity = params.relative_humidity;
  in.met = params.met[k];
  in.clo = params.clo[k];
  return clamp_pmv(fanger_pmv(in));
}

/// Throws unless every activity is comfortable at its own preferred setpoint.
inline void check_comfort_calibration(const ComfortParams& params) {
  for (std::size_t k = 0; k < kNumActivities; ++k) {
    const auto a = static_cast<Activity>(k);
    const double p = pmv(desired_setpoint(a), a, params);
    require(std::abs(p) <= 0.5, "config",
            "comfort parameters put " + to_string(a) + " at PMV " + std::to_string(p) +
                " at its preferred setpoint");
  }
}

enum class HvacMode { idle, heat, cool };

struct RoomThermalState {
  double indoor_temp = 68.0;  // F
  HvacMode mode = HvacMode::idle;
};

/// Lumped first-order room: envelope loss to outdoors, a heating or cooling
/// coil at fixed flow temperature, and the occupant as a heat source.
struct ThermalParams {
  double tick_minutes = 6.0;
  int substeps = 12;
  double envelope_tau_min = 600.0;  // RC
  // coil gains in 1/min; 10-90% rise with the coil on takes ~30 min
  double heat_gain = 0.07;
  double cool_gain = 0.07;
  double heat_flow_temp = 122.0;    // 50 C
  double cool_flow_temp = 50.0;     // 10 C
  double band = 2.5;
  // occupant heat in F/min, per activity
  std::array<double, kNumActivities> occupant_heat = {0.002, 0.003, 0.008, 0.004};
};

inline RoomThermalState thermal_step(RoomThermalState room, double setpoint, double outdoor_temp,
                                     double occupant_heat, const ThermalParams& p) {
  const double dt = p.tick_minutes / p.substeps;
  for (int s = 0; s < p.substeps; ++s) {
    const double t = room.indoor_temp;
    if (t < setpoint - p.band) room.mode = HvacMode::heat;
    else if (t > setpoint + p.band) room.mode = HvacMode::cool;
    else room.mode = HvacMode::idle;

    // dT/dt = a*(T_eq - T), integrated exactly over the substep
    double a = 1.0 / p.envelope_tau_min;
    double forcing = outdoor_temp / p.envelope_tau_min + occupant_heat;
    if (room.mode == HvacMode::heat) {
      a += p.heat_gain;
      forcing += p.heat_gain * p.heat_flow_temp;
    } else if (room.mode == HvacMode::cool) {
      a += p.cool_gain;
      forcing += p.cool_gain * p.cool_flow_temp;
    }
    const double t_eq = forcing / a;
    room.indoor_temp = t_eq + (t - t_eq) * std::exp(-a * dt);
  }
  return room;
}

struct HvacConfig {
  std::size_t humans = 3;
  std::size_t ticks = 15000;
  double tau = 2.5;  // satisfaction threshold, F
  double outdoor_mean = 55.0;
  double outdoor_amplitude = 10.0;
  double initial_temp = 68.0;
  std::vector<ProfileKind> profiles = {ProfileKind::organized, ProfileKind::intermediate,
                                       ProfileKind::random};
  ComfortParams comfort;
  ThermalParams thermal;
};

inline double outdoor_temperature(std::size_t tick, double mean, double amplitude) {
  const double hour = static_cast<double>(tick % kTicksPerDay) * 24.0 / kTicksPerDay;
  // coldest around 05:00
  return mean - amplitude * std::cos(2.0 * std::numbers::pi * (hour - 5.0) / 24.0);
}

inline bool hvac_satisfied(double desired, double setpoint, double tau) {
  return std::abs(desired - setpoint) <= tau;
}

class HvacEnvironment final : public Environment {
 public:
  /// Schedules generated from seeded activity profiles.
  HvacEnvironment(const HvacConfig& config, std::uint64_t seed)
      : HvacEnvironment(config, make_schedule(config, seed)) {}

  /// Pinned schedule, e.g. loaded from CSV.
  HvacEnvironment(const HvacConfig& config, Schedule schedule)
      : config_(config), schedule_(std::move(schedule)) {
    check_comfort_calibration(config_.comfort);
    require(schedule_.size() >= config_.ticks, "config", "schedule shorter than the run");
    for (const auto& row : schedule_) {
      require(row.size() == config_.humans, "config", "schedule rows must cover every human");
    }
    rooms_.assign(config_.humans, RoomThermalState{config_.initial_temp, HvacMode::idle});
  }

  AppType type() const override { return AppType::hvac; }
  std::size_t humans() const override { return config_.humans; }
  const Schedule& schedule() const { return schedule_; }
  const std::vector<RoomThermalState>& rooms() const { return rooms_; }

  Observation observe(std::size_t tick) override {
    Observation obs;
    obs.desired.resize(config_.humans);
    for (std::size_t i = 0; i < config_.humans; ++i) {
      obs.desired[i] = desired_setpoint(schedule_[tick][i]);
    }
    desired_ = obs.desired;
    return obs;
  }

  Outcome apply(std::size_t tick, const GlobalAction& action) override {
    const double outdoor =
        outdoor_temperature(tick, config_.outdoor_mean, config_.outdoor_amplitude);
    Outcome out;
    out.satisfied.resize(config_.humans);
    out.score.resize(config_.humans);
    out.metric.resize(config_.humans);
    for (std::size_t i = 0; i < config_.humans; ++i) {
      const Activity a = schedule_[tick][i];
      const double q = config_.thermal.occupant_heat[static_cast<std::size_t>(a)];
      rooms_[i] = thermal_step(rooms_[i], action.setpoint, outdoor, q, config_.thermal);
      const double p = pmv(rooms_[i].indoor_temp, a, config_.comfort);
      out.metric[i] = p;
      out.score[i] = pmv_score(p);
      out.satisfied[i] = hvac_satisfied(desired_[i], action.setpoint, config_.tau);
    }
    return out;
  }

  static Schedule make_schedule(const HvacConfig& config, std::uint64_t seed) {
    return generate_schedule(config.profiles, config.humans, config.ticks, seed);
  }

 private:
  HvacConfig config_;
  Schedule schedule_;
  std::vector<RoomThermalState> rooms_;
  std::vector<double> desired_;
};

}  // namespace fairo
