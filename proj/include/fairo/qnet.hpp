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

// Small fully-connected Q-value approximator: input -> tanh hidden -> linear
// head with one output per weight adjustment (raise, lower, hold). Gradients
// are derived by hand for this fixed architecture.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fairo/common.hpp"

namespace fairo {

inline constexpr std::size_t kNumAdjustments = 3;

enum class Adjustment : int { raise = 0, lower = 1, hold = 2 };

inline int direction_of(Adjustment a) {
  switch (a) {
    case Adjustment::raise: return +1;
    case Adjustment::lower: return -1;
    case Adjustment::hold: return 0;
  }
  return 0;
}

inline const char* to_string(Adjustment a) {
  switch (a) {
    case Adjustment::raise: return "raise";
    case Adjustment::lower: return "lower";
    case Adjustment::hold: return "hold";
  }
  return "?";
}

struct TrainConfig {
  double alpha = 1e-3;
  double gamma = 0.9;
  double epsilon_start = 0.2;
  double epsilon_end = 0.01;
  std::size_t epsilon_decay_steps = 10000;
  double grad_clip = 1.0;  // <= 0 disables clipping

  /// Linearly decayed exploration rate after `step` training steps.
  double epsilon_at(std::size_t step) const {
    if (epsilon_decay_steps == 0 || step >= epsilon_decay_steps) return epsilon_end;
    const double frac = static_cast<double>(step) / static_cast<double>(epsilon_decay_steps);
    return epsilon_start + (epsilon_end - epsilon_start) * frac;
  }

  void validate() const {
    require(alpha >= 0.0, "config", "alpha must be nonnegative");
    require(gamma >= 0.0 && gamma < 1.0, "config", "gamma must lie in [0,1)");
    require(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 &&
                epsilon_end <= 1.0,
            "config", "epsilon must lie in [0,1]");
  }
};

using QValues = std::array<double, kNumAdjustments>;

class QNetwork {
 public:
  QNetwork() = default;

  /// Uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)] from `seed`.
  QNetwork(std::size_t input_dim, std::size_t hidden, std::uint64_t seed)
      : input_dim_(input_dim), hidden_(hidden), seed_(seed) {
    require(input_dim > 0 && hidden > 0, "domain", "network dimensions must be positive");
    params_.resize(parameter_count());
    Rng rng(seed);
    const double b1 = 1.0 / std::sqrt(static_cast<double>(input_dim_));
    const double b2 = 1.0 / std::sqrt(static_cast<double>(hidden_));
    for (std::size_t k = 0; k < w2_offset(); ++k) params_[k] = rng.uniform(-b1, b1);
    for (std::size_t k = w2_offset(); k < params_.size(); ++k) params_[k] = rng.uniform(-b2, b2);
  }

  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden() const { return hidden_; }
  std::uint64_t seed() const { return seed_; }

  std::size_t parameter_count() const {
    return hidden_ * input_dim_ + hidden_ + kNumAdjustments * hidden_ + kNumAdjustments;
  }
  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }

  void zero_head() {
    std::fill(params_.begin() + static_cast<std::ptrdiff_t>(w2_offset()), params_.end(), 0.0);
  }

  QValues predict(std::span<const double> x) const {
    std::vector<double> h;
    return forward(x, h);
  }

  /// dQ(x, action)/dtheta, laid out like parameters().
  std::vector<double> gradient(std::span<const double> x, std::size_t action) const {
    std::vector<double> h;
    forward(x, h);
    std::vector<double> g(params_.size(), 0.0);
    const double* w2 = params_.data() + w2_offset();
    for (std::size_t j = 0; j < hidden_; ++j) {
      g[w2_offset() + action * hidden_ + j] = h[j];
      const double back = w2[action * hidden_ + j] * (1.0 - h[j] * h[j]);
      for (std::size_t k = 0; k < input_dim_; ++k) g[j * input_dim_ + k] = back * x[k];
      g[b1_offset() + j] = back;
    }
    g[b2_offset() + action] = 1.0;
    return g;
  }

 private:
  std::size_t b1_offset() const { return hidden_ * input_dim_; }
  std::size_t w2_offset() const { return b1_offset() + hidden_; }
  std::size_t b2_offset() const { return w2_offset() + kNumAdjustments * hidden_; }

  QValues forward(std::span<const double> x, std::vector<double>& h) const {
    require(x.size() == input_dim_, "dimension",
            "network input has " + std::to_string(x.size()) + " values, expected " +
                std::to_string(input_dim_));
    h.assign(hidden_, 0.0);
    const double* w1 = params_.data();
    const double* b1 = params_.data() + b1_offset();
    for (std::size_t j = 0; j < hidden_; ++j) {
      double a = b1[j];
      for (std::size_t k = 0; k < input_dim_; ++k) a += w1[j * input_dim_ + k] * x[k];
      h[j] = std::tanh(a);
    }
    const double* w2 = params_.data() + w2_offset();
    const double* b2 = params_.data() + b2_offset();
    QValues q{};
    for (std::size_t a = 0; a < kNumAdjustments; ++a) {
      double s = b2[a];
      for (std::size_t j = 0; j < hidden_; ++j) s += w2[a * hidden_ + j] * h[j];
      q[a] = s;
    }
    return q;
  }

  std::size_t input_dim_ = 0;
  std::size_t hidden_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> params_;
};

inline QValues predict_q(const QNetwork& net, std::span<const double> state) {
  return net.predict(state);
}

inline std::size_t greedy_action(const QValues& q) {
  return static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
}

/// Epsilon-greedy choice; the exploration draw is taken from `rng` every call
/// so that the stream position does not depend on the network output.
inline std::size_t select_action(const QNetwork& net, std::span<const double> state,
                                 double epsilon, Rng& rng) {
  const double draw = rng.uniform();
  const auto random_action = static_cast<std::size_t>(rng.below(kNumAdjustments));
  if (draw < epsilon) return random_action;
  return greedy_action(net.predict(state));
}

/// One semi-gradient step on 0.5*(target - Q(s,a))^2 with the bootstrap target
/// held constant. Returns the TD error measured before the step.
inline double td_update(QNetwork& net, std::span<const double> s, std::size_t action,
                        double reward, std::span<const double> s_next,
                        const TrainConfig& config) {
  const QValues next = net.predict(s_next);
  const double target = reward + config.gamma * *std::max_element(next.begin(), next.end());
  const double q = net.predict(s)[action];
  const double td_error = target - q;
  require(std::isfinite(td_error) && std::isfinite(0.5 * td_error * td_error), "numeric",
          "non-finite temporal-difference loss");
  if (config.alpha == 0.0) return td_error;
  const std::vector<double> g = net.gradient(s, action);
  auto params = net.parameters();
  for (std::size_t k = 0; k < params.size(); ++k) {
    double step = -td_error * g[k];  // dLoss/dtheta
    if (config.grad_clip > 0.0) step = std::clamp(step, -config.grad_clip, config.grad_clip);
    params[k] -= config.alpha * step;
  }
  return td_error;
}

// Snapshot format: "FQN1", u32 input_dim, u32 hidden, u32 outputs, u64 seed,
// u64 parameter count, then little-endian float64 parameters.

namespace detail {

template <typename T>
void write_le(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  is.read(reinterpret_cast<char*>(bytes), sizeof(T));
  require(static_cast<bool>(is), "io", "truncated network snapshot");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace detail

inline void save_snapshot(const QNetwork& net, std::ostream& os) {
  os.write("FQN1", 4);
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(net.input_dim()));
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(net.hidden()));
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(kNumAdjustments));
  detail::write_le<std::uint64_t>(os, net.seed());
  detail::write_le<std::uint64_t>(os, net.parameter_count());
  for (double p : net.parameters()) detail::write_le<double>(os, p);
}

inline QNetwork load_snapshot(std::istream& is) {
  char magic[4] = {};
  is.read(magic, 4);
  require(is && std::string(magic, 4) == "FQN1", "io", "not a network snapshot");
  const auto input = detail::read_le<std::uint32_t>(is);
  const auto hidden = detail::read_le<std::uint32_t>(is);
  const auto outputs = detail::read_le<std::uint32_t>(is);
  const auto seed = detail::read_le<std::uint64_t>(is);
  const auto count = detail::read_le<std::uint64_t>(is);
  require(outputs == kNumAdjustments, "io", "snapshot has unsupported output width");
  QNetwork net(input, hidden, seed);
  require(count == net.parameter_count(), "io", "snapshot parameter count mismatch");
  for (auto& p : net.parameters()) p = detail::read_le<double>(is);
  return net;
}

}  // namespace fairo
