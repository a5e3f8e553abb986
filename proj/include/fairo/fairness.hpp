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

// Satisfaction ledgers and the fairness state derived from them.
//
// Every human owns a 2-D unit vector (u, v): u accumulates unsatisfied
// outcomes, v satisfied ones. The closeness L_i of human i is the mean cosine
// between its vector and everybody else's. All-ones means every human has the
// same satisfaction history direction.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fairo/common.hpp"

namespace fairo {

struct SatisfactionRecord {
  double u = 0.0;  // unsatisfied mass
  double v = 0.0;  // satisfied mass

  double norm() const { return std::hypot(u, v); }
};

class SatisfactionLedger {
 public:
  SatisfactionLedger(std::vector<SatisfactionRecord> records, double delta)
      : records_(std::move(records)), delta_(delta) {
    require(records_.size() >= 2, "domain", "ledger needs at least two humans");
    require(delta_ > 0.0 && delta_ < 1.0, "domain", "ledger increment must lie in (0,1)");
    for (const auto& r : records_) {
      require(r.u >= 0.0 && r.v >= 0.0 && (r.u > 0.0 || r.v > 0.0), "domain",
              "ledger records must be nonnegative and nonzero");
    }
  }

  std::size_t size() const { return records_.size(); }
  double delta() const { return delta_; }
  const SatisfactionRecord& operator[](std::size_t i) const { return records_[i]; }
  std::span<const SatisfactionRecord> records() const { return records_; }

  /// Satisfied share v/(u+v) of human i.
  double satisfaction(std::size_t i) const {
    const auto& r = records_[i];
    return r.v / (r.u + r.v);
  }

  friend SatisfactionLedger update_ledger(const SatisfactionLedger& ledger,
                                          const std::vector<bool>& satisfied);

 private:
  std::vector<SatisfactionRecord> records_;
  double delta_;
};

/// All records start on the diagonal, so the initial fairness state is all ones.
inline SatisfactionLedger init_ledger(std::size_t n, double delta) {
  require(n >= 2, "domain", "ledger needs at least two humans");
  const double c = 1.0 / std::sqrt(2.0);
  return SatisfactionLedger(std::vector<SatisfactionRecord>(n, {c, c}), delta);
}

inline SatisfactionLedger update_ledger(const SatisfactionLedger& ledger,
                                        const std::vector<bool>& satisfied) {
  require(satisfied.size() == ledger.size(), "dimension",
          "satisfaction flags do not match ledger size");
  SatisfactionLedger next = ledger;
  for (std::size_t i = 0; i < next.records_.size(); ++i) {
    auto& r = next.records_[i];
    (satisfied[i] ? r.v : r.u) += ledger.delta_;
    const double n = r.norm();
    r.u /= n;
    r.v /= n;
  }
  return next;
}

using FairnessState = std::vector<double>;

/// L_i = 1/(N-1) * sum_{j != i} cos(c_i, c_j).
inline FairnessState fairness_state(const SatisfactionLedger& ledger) {
  const std::size_t n = ledger.size();
  FairnessState state(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = ledger[i];
    const double na = a.norm();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto& b = ledger[j];
      sum += (a.u * b.u + a.v * b.v) / (na * b.norm());
    }
    state[i] = std::min(1.0, sum / static_cast<double>(n - 1));
  }
  return state;
}

/// Index of the option whose initiation set contains `state` (lowest index on ties).
inline std::size_t active_option(std::span<const double> state) {
  return static_cast<std::size_t>(std::min_element(state.begin(), state.end()) - state.begin());
}

/// Option i terminates once L_i is strictly above the minimum.
inline bool is_terminated(std::size_t i, std::span<const double> state) {
  return state[i] > *std::min_element(state.begin(), state.end());
}

/// The running option keeps control until it terminates; only then does the
/// lowest-index minimum take over.
inline std::size_t next_option(std::optional<std::size_t> current, std::span<const double> state) {
  if (current && *current < state.size() && !is_terminated(*current, state)) return *current;
  return active_option(state);
}

struct AugmentedState {
  FairnessState closeness;
  int favored_flag = 0;

  /// Network input: closeness values followed by the flag.
  std::vector<double> as_input() const {
    std::vector<double> x = closeness;
    x.push_back(static_cast<double>(favored_flag));
    return x;
  }
};

/// Flag is 1 when human i's satisfied component is the largest in the ledger,
/// i.e. its low closeness comes from favorable treatment.
inline AugmentedState augment_state(const FairnessState& state, const SatisfactionLedger& ledger,
                                    std::size_t i) {
  double vmax = 0.0;
  for (const auto& r : ledger.records()) vmax = std::max(vmax, r.v);
  return {state, ledger[i].v >= vmax ? 1 : 0};
}

/// Staircase magnitude for a per-tick change in closeness.
inline double improvement_step(double abs_change) {
  if (abs_change <= 0.001) return 0.0;
  if (abs_change <= 0.005) return 0.25;
  if (abs_change <= 0.01) return 0.5;
  if (abs_change <= 0.015) return 0.75;
  return 1.0;
}

/// Absolute fairness (2L - 1) plus a signed improvement bonus, clamped to [-1, 1].
inline double fairness_reward_term(double l_prev, double l_cur) {
  const double diff = l_cur - l_prev;
  const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
  const double raw = (2.0 * l_cur - 1.0) + sign * improvement_step(std::abs(diff));
  return std::clamp(raw, -1.0, 1.0);
}

}  // namespace fairo
