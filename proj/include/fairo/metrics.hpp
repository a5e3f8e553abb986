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

// Evaluation quantities over run traces.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fairo/common.hpp"

namespace fairo {

/// Per-human share of ticks on which they hold the extreme value.
using ProbabilityProfile = std::vector<double>;

namespace detail {

template <class Better>
ProbabilityProfile extreme_probs(std::span<const std::vector<double>> trace, std::size_t window,
                                 Better better) {
  require(!trace.empty() && window > 0, "domain", "probability window is empty");
  const std::size_t w = std::min(window, trace.size());
  const std::size_t n = trace.front().size();
  require(n > 0, "dimension", "trace rows are empty");
  ProbabilityProfile p(n, 0.0);
  for (std::size_t t = trace.size() - w; t < trace.size(); ++t) {
    const auto& row = trace[t];
    require(row.size() == n, "dimension", "ragged trace");
    double best = row[0];
    for (double x : row) {
      if (better(x, best)) best = x;
    }
    std::size_t ties = 0;
    for (double x : row) ties += x == best;
    for (std::size_t i = 0; i < n; ++i) {
      if (row[i] == best) p[i] += 1.0 / static_cast<double>(ties);
    }
  }
  for (auto& x : p) x /= static_cast<double>(w);
  return p;
}

}  // namespace detail

/// How often each human holds the maximum over the last `window` rows.
/// Tied humans share the tick equally.
inline ProbabilityProfile opportunity_probs(std::span<const std::vector<double>> trace,
                                            std::size_t window) {
  return detail::extreme_probs(trace, window, [](double a, double b) { return a > b; });
}

/// Same as opportunity_probs for the minimum.
inline ProbabilityProfile odds_probs(std::span<const std::vector<double>> trace, std::size_t window) {
  return detail::extreme_probs(trace, window, [](double a, double b) { return a < b; });
}

inline double avg_abs_pairwise_diff(std::span<const double> p) {
  require(p.size() >= 2, "dimension", "need at least two probabilities");
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      sum += std::abs(p[i] - p[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> counts;

  Histogram(double lo_, double hi_, std::size_t bins) : lo(lo_), hi(hi_), counts(bins, 0.0) {
    require(bins > 0 && hi > lo, "domain", "histogram needs bins and a nonempty range");
  }

  std::size_t bins() const { return counts.size(); }

  /// Values outside the range land in the end bins.
  void add(double x) {
    require(std::isfinite(x), "numeric", "non-finite histogram sample");
    const double pos = (x - lo) / (hi - lo) * static_cast<double>(bins());
    const auto k = static_cast<std::ptrdiff_t>(std::floor(pos));
    const auto last = static_cast<std::ptrdiff_t>(bins()) - 1;
    counts[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, last))] += 1.0;
  }

  double total() const {
    double s = 0.0;
    for (double c : counts) s += c;
    return s;
  }

  bool same_edges(const Histogram& o) const {
    return lo == o.lo && hi == o.hi && bins() == o.bins();
  }
};

inline constexpr std::size_t kHistogramBins = 20;

inline Histogram make_histogram(std::span<const double> samples, double lo, double hi,
                                std::size_t bins = kHistogramBins) {
  Histogram h(lo, hi, bins);
  for (double x : samples) h.add(x);
  return h;
}

inline constexpr double kJsdSmoothing = 1e-9;

/// Jensen-Shannon divergence in bits. `smoothing` is added to every bin first.
inline double jsd(const Histogram& a, const Histogram& b, double smoothing = kJsdSmoothing) {
  require(a.same_edges(b), "domain", "histograms have different bin edges");
  require(a.total() > 0.0 && b.total() > 0.0, "domain", "histogram has zero mass");
  require(smoothing >= 0.0, "domain", "smoothing must be nonnegative");
  const std::size_t k = a.bins();
  const double za = a.total() + smoothing * static_cast<double>(k);
  const double zb = b.total() + smoothing * static_cast<double>(k);
  double d = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double p = (a.counts[i] + smoothing) / za;
    const double q = (b.counts[i] + smoothing) / zb;
    const double m = 0.5 * (p + q);
    if (p > 0.0) d += 0.5 * p * std::log2(p / m);
    if (q > 0.0) d += 0.5 * q * std::log2(q / m);
  }
  return std::clamp(d, 0.0, 1.0);
}

struct GaussianFit {
  double mu = 0.0;
  double sigma2 = 0.0;
};

/// Mean and population variance.
inline GaussianFit gaussian_fit(std::span<const double> x) {
  require(x.size() >= 2, "domain", "gaussian fit needs at least two samples");
  double mu = 0.0;
  for (double v : x) mu += v;
  mu /= static_cast<double>(x.size());
  double s2 = 0.0;
  for (double v : x) s2 += (v - mu) * (v - mu);
  return {mu, s2 / static_cast<double>(x.size())};
}

inline double satisfaction_metric(double u, double v) {
  require(u + v > 0.0, "domain", "satisfaction record has no mass");
  return v / (u + v);
}

/// Time-weighted utility (1/t) * sum_{j=0..t} (j/t) * w_j. Needs t + 1 weights.
inline double fairiot_utility(std::span<const double> weights, std::size_t t) {
  require(t >= 1, "domain", "utility horizon must be at least 1");
  require(weights.size() >= t + 1, "dimension", "weight trace shorter than the horizon");
  const double td = static_cast<double>(t);
  double s = 0.0;
  for (std::size_t j = 0; j <= t; ++j) s += (static_cast<double>(j) / td) * weights[j];
  return s / td;
}

inline double coefficient_of_variation(std::span<const double> u) {
  require(u.size() >= 2, "domain", "cv needs at least two utilities");
  double mean = 0.0;
  for (double x : u) mean += x;
  mean /= static_cast<double>(u.size());
  require(mean != 0.0, "domain", "cv undefined for zero mean");
  double s = 0.0;
  for (double x : u) s += (x - mean) * (x - mean) / (mean * mean);
  return std::sqrt(s / static_cast<double>(u.size() - 1));
}

/// Fraction of samples strictly above a threshold.
inline double fraction_above(std::span<const double> x, double threshold) {
  require(!x.empty(), "domain", "no samples");
  std::size_t k = 0;
  for (double v : x) k += v > threshold;
  return static_cast<double>(k) / static_cast<double>(x.size());
}

/// (base - value) / base; 0 when both are zero.
inline double reduction(double base, double value) {
  if (base == 0.0) return value == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return (base - value) / base;
}

// ---------------------------------------------------------------------------
// Report rows: (metric, scope, human/pair, value)

struct MetricRow {
  std::string metric;
  std::string scope;
  std::string key;
  double value = 0.0;
};

inline void write_metrics_csv(std::span<const MetricRow> rows, std::ostream& os) {
  os << "metric,scope,human_or_pair,value\n";
  os << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.metric << ',' << r.scope << ',' << r.key << ',' << r.value << '\n';
  }
}

inline void write_metrics_text(std::span<const MetricRow> rows, std::ostream& os) {
  std::size_t wm = 6, ws = 5, wk = 3;
  for (const auto& r : rows) {
    wm = std::max(wm, r.metric.size());
    ws = std::max(ws, r.scope.size());
    wk = std::max(wk, r.key.size());
  }
  os << std::left << std::setw(static_cast<int>(wm) + 2) << "metric"
     << std::setw(static_cast<int>(ws) + 2) << "scope" << std::setw(static_cast<int>(wk) + 2)
     << "key" << "value\n";
  os << std::fixed << std::setprecision(6);
  for (const auto& r : rows) {
    os << std::setw(static_cast<int>(wm) + 2) << r.metric << std::setw(static_cast<int>(ws) + 2)
       << r.scope << std::setw(static_cast<int>(wk) + 2) << r.key << r.value << '\n';
  }
  os.unsetf(std::ios::fixed);
  os << std::right;
}

}  // namespace fairo
