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

// Synthetic occupant activity schedules. A tick is six simulated minutes, so
// a day has 240 ticks and a week 1680.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fairo/common.hpp"

namespace fairo {

inline constexpr std::size_t kTicksPerDay = 240;
inline constexpr std::size_t kTicksPerWeek = 7 * kTicksPerDay;

enum class Activity : int { sleeping = 0, relaxing = 1, domestic_work = 2, work_from_home = 3 };
inline constexpr std::size_t kNumActivities = 4;

inline std::string to_string(Activity a) {
  switch (a) {
    case Activity::sleeping: return "sleeping";
    case Activity::relaxing: return "relaxing";
    case Activity::domestic_work: return "domestic_work";
    case Activity::work_from_home: return "work_from_home";
  }
  return "?";
}

inline Activity parse_activity(std::string_view s) {
  for (int k = 0; k < static_cast<int>(kNumActivities); ++k) {
    if (s == to_string(static_cast<Activity>(k))) return static_cast<Activity>(k);
  }
  throw Error("io", "unknown activity '" + std::string(s) + "'");
}

/// How regular a human's life is: the same week over and over, a jittered
/// routine with occasional deviations, or no routine at all.
enum class ProfileKind { organized, intermediate, random };

inline std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::organized: return "organized";
    case ProfileKind::intermediate: return "intermediate";
    case ProfileKind::random: return "random";
  }
  return "?";
}

inline ProfileKind parse_profile_kind(std::string_view s) {
  if (s == "organized") return ProfileKind::organized;
  if (s == "intermediate") return ProfileKind::intermediate;
  if (s == "random") return ProfileKind::random;
  throw Error("config", "unknown activity profile '" + std::string(s) + "'");
}

namespace detail {

struct Block {
  std::size_t end_tick;  // exclusive, within the day
  Activity activity;
};

using DayPlan = std::vector<Block>;

constexpr std::size_t at(int hour, int minute = 0) {
  return static_cast<std::size_t>(hour * 10 + minute / 6);
}

// Weekday routine of the organized occupant.
inline const DayPlan& organized_weekday() {
  static const DayPlan plan = {
      {at(6, 30), Activity::sleeping},      {at(8), Activity::domestic_work},
      {at(12), Activity::work_from_home},   {at(13), Activity::domestic_work},
      {at(17, 30), Activity::work_from_home}, {at(19), Activity::relaxing},
      {at(20), Activity::domestic_work},    {at(22, 30), Activity::relaxing},
      {at(24), Activity::sleeping},
  };
  return plan;
}

inline const DayPlan& organized_weekend() {
  static const DayPlan plan = {
      {at(8, 30), Activity::sleeping}, {at(10), Activity::domestic_work},
      {at(13), Activity::relaxing},    {at(14), Activity::domestic_work},
      {at(18), Activity::relaxing},    {at(19, 30), Activity::domestic_work},
      {at(23), Activity::relaxing},    {at(24), Activity::sleeping},
  };
  return plan;
}

// Base routine the intermediate occupant loosely follows: late riser,
// long domestic stretches, evening relaxation.
inline const DayPlan& intermediate_base() {
  static const DayPlan plan = {
      {at(8), Activity::sleeping},        {at(9), Activity::relaxing},
      {at(12), Activity::domestic_work},  {at(13), Activity::relaxing},
      {at(16), Activity::work_from_home}, {at(18, 30), Activity::domestic_work},
      {at(23), Activity::relaxing},       {at(24), Activity::sleeping},
  };
  return plan;
}

inline Activity plan_lookup(const DayPlan& plan, std::size_t tick_in_day) {
  for (const auto& b : plan) {
    if (tick_in_day < b.end_tick) return b.activity;
  }
  return plan.back().activity;
}

inline std::uint64_t day_seed(std::uint64_t seed, std::size_t day) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(day) + 0x51ed2701ULL));
}

}  // namespace detail

/// Seeded activity generator with random access by tick.
struct ActivityProfile {
  ProfileKind kind = ProfileKind::organized;
  std::uint64_t seed = 0;

  /// Activities of one whole day.
  std::array<Activity, kTicksPerDay> day(std::size_t day_index) const {
    std::array<Activity, kTicksPerDay> out{};
    switch (kind) {
      case ProfileKind::organized: {
        const bool weekend = day_index % 7 >= 5;
        const auto& plan = weekend ? detail::organized_weekend() : detail::organized_weekday();
        for (std::size_t t = 0; t < kTicksPerDay; ++t) out[t] = detail::plan_lookup(plan, t);
        break;
      }
      case ProfileKind::intermediate: {
        Rng rng(detail::day_seed(seed, day_index));
        detail::DayPlan plan = detail::intermediate_base();
        for (std::size_t b = 0; b + 1 < plan.size(); ++b) {
          // shift each boundary by up to +-1.5 h
          const auto jitter = static_cast<long>(rng.below(31)) - 15;
          const long end = static_cast<long>(plan[b].end_tick) + jitter;
          const long lo = b == 0 ? 1 : static_cast<long>(plan[b - 1].end_tick) + 1;
          plan[b].end_tick = static_cast<std::size_t>(std::clamp(end, lo, 239L));
          if (rng.bernoulli(0.25)) {
            plan[b].activity = static_cast<Activity>(rng.below(kNumActivities));
          }
        }
        for (std::size_t t = 0; t < kTicksPerDay; ++t) out[t] = detail::plan_lookup(plan, t);
        break;
      }
      case ProfileKind::random: {
        Rng rng(detail::day_seed(seed, day_index));
        std::size_t t = 0;
        auto current = static_cast<Activity>(rng.below(kNumActivities));
        while (t < kTicksPerDay) {
          // sleep comes in long stretches, everything else 18 min to 3 h
          const std::size_t len = current == Activity::sleeping ? 20 + rng.below(41)
                                                                : 3 + rng.below(28);
          for (std::size_t k = 0; k < len && t < kTicksPerDay; ++k, ++t) out[t] = current;
          auto next = static_cast<Activity>(rng.below(kNumActivities - 1));
          if (static_cast<int>(next) >= static_cast<int>(current)) {
            next = static_cast<Activity>(static_cast<int>(next) + 1);
          }
          current = next;
        }
        break;
      }
    }
    return out;
  }
};

inline Activity activity_at(const ActivityProfile& profile, std::size_t tick) {
  return profile.day(tick / kTicksPerDay)[tick % kTicksPerDay];
}

/// Materialized schedule: schedule[tick][human].
using Schedule = std::vector<std::vector<Activity>>;

inline Schedule build_schedule(const std::vector<ActivityProfile>& profiles, std::size_t ticks) {
  Schedule s(ticks, std::vector<Activity>(profiles.size()));
  const std::size_t days = (ticks + kTicksPerDay - 1) / kTicksPerDay;
  for (std::size_t h = 0; h < profiles.size(); ++h) {
    for (std::size_t d = 0; d < days; ++d) {
      const auto acts = profiles[h].day(d);
      for (std::size_t k = 0; k < kTicksPerDay; ++k) {
        const std::size_t t = d * kTicksPerDay + k;
        if (t < ticks) s[t][h] = acts[k];
      }
    }
  }
  return s;
}

/// One seeded profile per human, cycling through `kinds`.
inline Schedule generate_schedule(const std::vector<ProfileKind>& kinds, std::size_t humans,
                                  std::size_t ticks, std::uint64_t seed) {
  std::vector<ActivityProfile> profiles;
  for (std::size_t i = 0; i < humans; ++i) {
    const ProfileKind kind = kinds.empty() ? ProfileKind::random : kinds[i % kinds.size()];
    profiles.push_back({kind, Rng::stream(seed, "activity/" + std::to_string(i)).next_u64()});
  }
  return build_schedule(profiles, ticks);
}

/// CSV with header `tick,human,activity`.
inline void write_schedule_csv(const Schedule& schedule, std::ostream& os) {
  os << "tick,human,activity\n";
  for (std::size_t t = 0; t < schedule.size(); ++t) {
    for (std::size_t h = 0; h < schedule[t].size(); ++h) {
      os << t << ',' << h << ',' << to_string(schedule[t][h]) << '\n';
    }
  }
}

inline Schedule read_schedule_csv(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)) && line == "tick,human,activity", "io",
          "schedule CSV must start with 'tick,human,activity'");
  Schedule s;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tick, human, act;
    require(std::getline(row, tick, ',') && std::getline(row, human, ',') &&
                std::getline(row, act),
            "io", "malformed schedule row: " + line);
    const auto t = static_cast<std::size_t>(std::stoul(tick));
    const auto h = static_cast<std::size_t>(std::stoul(human));
    if (s.size() <= t) s.resize(t + 1);
    if (s[t].size() <= h) s[t].resize(h + 1);
    s[t][h] = parse_activity(act);
  }
  return s;
}

}  // namespace fairo
