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

// Reference implementations written independently of the library (polar
// forms, bisection, entropy identities, long-double sums), plus the
// randomized property checks shared by the unit tests and the acceptance run.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fairo/fairo.hpp"

namespace fairo::oracle {

// ---------------------------------------------------------------------------
// Oracles

/// Closeness from record angles: cos(c_i, c_j) = cos(theta_i - theta_j).
inline std::vector<double> closeness(const std::vector<SatisfactionRecord>& recs) {
  const std::size_t n = recs.size();
  std::vector<long double> theta(n);
  for (std::size_t i = 0; i < n; ++i) theta[i] = std::atan2((long double)recs[i].v, (long double)recs[i].u);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double s = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) s += std::cos(theta[i] - theta[j]);
    }
    out[i] = static_cast<double>(s / (long double)(n - 1));
  }
  return out;
}

/// Record after one tick, via its polar angle.
inline SatisfactionRecord ledger_step(SatisfactionRecord r, bool satisfied, double delta) {
  const long double u = (long double)r.u + (satisfied ? 0.0L : delta);
  const long double v = (long double)r.v + (satisfied ? delta : 0.0L);
  const long double phi = std::atan2(v, u);
  return {static_cast<double>(std::cos(phi)), static_cast<double>(std::sin(phi))};
}

/// Water-filling: out_i = max(floor, lambda * raw_i) with lambda found by bisection.
inline std::vector<double> floor_normalize(const std::vector<double>& raw, double floor) {
  auto mass = [&](long double lambda) {
    long double s = 0;
    for (double x : raw) s += std::max<long double>(floor, lambda * x);
    return s;
  };
  long double lo = 0, hi = 1;
  while (mass(hi) < 1) hi *= 2;
  for (int k = 0; k < 400; ++k) {
    const long double mid = (lo + hi) / 2;
    (mass(mid) < 1 ? lo : hi) = mid;
  }
  std::vector<double> out;
  for (double x : raw) out.push_back(static_cast<double>(std::max<long double>(floor, hi * x)));
  return out;
}

inline std::vector<double> adjust(const std::vector<double>& w, std::size_t i, int dir,
                                  double step, double floor) {
  if (dir == 0) return w;
  std::vector<double> raw = w;
  raw[i] = std::min(1.0, std::max(floor, raw[i] + dir * step));
  return floor_normalize(raw, floor);
}

inline double weighted_sum(const std::vector<double>& w, const std::vector<double>& d) {
  long double s = 0;
  for (std::size_t k = w.size(); k-- > 0;) s += (long double)w[k] * d[k];
  return static_cast<double>(s);
}

/// First index whose weighted effect no other index strictly beats.
inline std::size_t weighted_argmax(const std::vector<double>& w, const std::vector<double>& k) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    bool beaten = false;
    for (std::size_t j = 0; j < w.size(); ++j) beaten = beaten || w[j] * k[j] > w[i] * k[i];
    if (!beaten) return i;
  }
  return 0;
}

inline double mix(double zeta, double f, double p) { return p + zeta * (f - p); }

/// Staircase by counting the band edges the change exceeds.
inline double fairness_term(double prev, double cur) {
  const double edges[] = {0.001, 0.005, 0.01, 0.015};
  const double a = std::abs(cur - prev);
  int k = 0;
  for (double e : edges) k += a > e;
  const double z = 0.25 * k;
  const double bonus = cur > prev ? z : (cur < prev ? -z : 0.0);
  return std::min(1.0, std::max(-1.0, 2.0 * cur - 1.0 + bonus));
}

inline double balance(double supply, double reserve, double demand) {
  return demand == 0.0 ? 1.0 : (supply + reserve) / demand;
}

inline double learning_experience(int prev, int cur) {
  auto value = [](int s) { return 0.5 * (s - 1) / 7.0; };
  return std::min(1.0, std::max(-1.0, (value(cur) - value(prev)) + value(cur)));
}

/// JSD as H(m) - (H(p) + H(q)) / 2, entropies in nats converted to bits.
inline double jsd(const std::vector<double>& a, const std::vector<double>& b, double smoothing) {
  long double za = 0, zb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    za += a[i] + smoothing;
    zb += b[i] + smoothing;
  }
  auto h = [](long double x) { return x > 0 ? -x * std::log(x) : 0.0L; };
  long double hp = 0, hq = 0, hm = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double p = (a[i] + smoothing) / za;
    const long double q = (b[i] + smoothing) / zb;
    hp += h(p);
    hq += h(q);
    hm += h((p + q) / 2);
  }
  const double d = static_cast<double>((hm - (hp + hq) / 2) / std::numbers::ln2_v<long double>);
  return std::min(1.0, std::max(0.0, d));
}

/// Welford running mean and variance.
inline GaussianFit gaussian(const std::vector<double>& x) {
  long double mean = 0, m2 = 0;
  std::size_t n = 0;
  for (double v : x) {
    ++n;
    const long double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }
  return {static_cast<double>(mean), static_cast<double>(m2 / n)};
}

inline double utility(const std::vector<double>& w, std::size_t t) {
  long double s = 0;
  for (std::size_t j = t + 1; j-- > 0;) s += (long double)j * w[j];
  return static_cast<double>(s / ((long double)t * t));
}

/// Sample standard deviation over |mean|.
inline double cv(const std::vector<double>& u) {
  long double mean = 0;
  for (double x : u) mean += x;
  mean /= u.size();
  long double ss = 0;
  for (double x : u) ss += (x - mean) * (x - mean);
  return static_cast<double>(std::sqrt(ss / (u.size() - 1)) / std::abs(mean));
}

/// Tie-split argmax/argmin shares by explicit counting.
inline std::vector<double> extreme_shares(const std::vector<std::vector<double>>& trace,
                                          std::size_t window, bool want_max) {
  const std::size_t n = trace.front().size();
  const std::size_t w = std::min(window, trace.size());
  std::vector<double> p(n, 0.0);
  for (std::size_t t = trace.size() - w; t < trace.size(); ++t) {
    std::vector<std::size_t> best;
    for (std::size_t i = 0; i < n; ++i) {
      bool beaten = false;
      for (std::size_t j = 0; j < n; ++j) {
        beaten = beaten || (want_max ? trace[t][j] > trace[t][i] : trace[t][j] < trace[t][i]);
      }
      if (!beaten) best.push_back(i);
    }
    for (std::size_t i : best) p[i] += 1.0 / best.size();
  }
  for (auto& x : p) x /= w;
  return p;
}

// ---------------------------------------------------------------------------
// Random instances

struct Gen {
  Rng rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uni(double lo, double hi) { return rng.uniform(lo, hi); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng.below(n)); }

  std::vector<double> vec(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uni(lo, hi);
    return v;
  }

  std::vector<SatisfactionRecord> records(std::size_t n) {
    std::vector<SatisfactionRecord> r(n);
    for (auto& x : r) {
      x = {uni(0.0, 1.0), uni(0.0, 1.0)};
      if (below(8) == 0) (below(2) ? x.u : x.v) = 0.0;  // axis records
      if (x.u == 0.0 && x.v == 0.0) x.v = 1.0;
    }
    return r;
  }

  /// A valid weight vector with the given floor.
  std::vector<double> weights(std::size_t n, double floor) {
    return floor_normalize(vec(n, 0.0, 1.0), floor);
  }
};

// ---------------------------------------------------------------------------
// Formula oracle suite

struct OracleReport {
  std::string name;
  std::size_t cases = 0;
  double max_err = 0.0;
};

namespace detail {

inline void track(OracleReport& r, double a, double b) {
  const double e = std::abs(a - b);
  r.max_err = std::max(r.max_err, std::isfinite(e) ? e : INFINITY);
}

}  // namespace detail

/// Each library function against its oracle on `cases` random instances.
inline std::vector<OracleReport> run_formula_oracles(std::uint64_t seed, std::size_t cases) {
  using detail::track;
  Gen g(seed);
  std::vector<OracleReport> out;
  auto add = [&](std::string name, const std::function<void(OracleReport&)>& body) {
    OracleReport r{std::move(name), 0, 0.0};
    for (std::size_t k = 0; k < cases; ++k, ++r.cases) body(r);
    out.push_back(r);
  };

  add("fairness_state", [&](OracleReport& r) {
    const auto recs = g.records(2 + g.below(5));
    const auto got = fairness_state(SatisfactionLedger(recs, 0.01));
    const auto want = closeness(recs);
    for (std::size_t i = 0; i < recs.size(); ++i) track(r, got[i], std::min(1.0, want[i]));
  });
  add("update_ledger", [&](OracleReport& r) {
    const auto recs = g.records(2 + g.below(5));
    const double delta = g.uni(0.001, 0.5);
    std::vector<bool> sat(recs.size());
    for (std::size_t i = 0; i < sat.size(); ++i) sat[i] = g.below(2);
    const auto next = update_ledger(SatisfactionLedger(recs, delta), sat);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto want = ledger_step(recs[i], sat[i], delta);
      track(r, next[i].u, want.u);
      track(r, next[i].v, want.v);
    }
  });
  add("adjust_weights", [&](OracleReport& r) {
    const std::size_t n = 2 + g.below(5);
    const double floor = g.below(4) == 0 ? 0.0 : g.uni(0.0, 0.5 / n);
    const auto w = g.weights(n, floor);
    const std::size_t i = g.below(n);
    const int dir = static_cast<int>(g.below(3)) - 1;
    const double step = g.uni(0.001, 0.6);
    const auto got = adjust_weights(WeightVector(w, floor), i, dir, step);
    const auto want = adjust(w, i, dir, step, floor);
    for (std::size_t k = 0; k < n; ++k) track(r, got[k], want[k]);
  });
  add("global_action_type1", [&](OracleReport& r) {
    const std::size_t n = 2 + g.below(6);
    const auto w = g.weights(n, 0.0);
    const auto d = g.vec(n, 55.0, 85.0);
    track(r, global_action_type1(w, d), weighted_sum(w, d));
  });
  add("global_allocation_type2", [&](OracleReport& r) {
    const std::size_t n = 2 + g.below(6);
    const auto w = g.weights(n, 0.0);
    const double res = g.uni(0.0, 100.0);
    const auto s = global_allocation_type2(w, res);
    for (std::size_t i = 0; i < n; ++i) track(r, s[i], static_cast<double>((long double)w[i] * res));
  });
  add("global_action_type3", [&](OracleReport& r) {
    const std::size_t n = 2 + g.below(6);
    const auto w = g.weights(n, 0.0);
    auto k = g.vec(n, -1.0, 1.0);
    if (g.below(4) == 0) k.assign(n, 0.25);  // full tie
    std::vector<int> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<int>(g.below(3));
    const std::size_t j = weighted_argmax(w, k);
    track(r, static_cast<double>(global_choice_type3(w, k)), static_cast<double>(j));
    track(r, global_action_type3<int>(w, k, d), d[j]);
  });
  add("option_reward", [&](OracleReport& r) {
    const double z = g.uni(0.0, 1.0), f = g.uni(-1.0, 1.0), p = g.uni(-1.0, 1.0);
    track(r, option_reward(z, f, p), mix(z, f, p));
  });
  add("fairness_reward_term", [&](OracleReport& r) {
    const double prev = g.uni(0.5, 1.0);
    const double cur = g.below(5) == 0 ? prev : std::min(1.0, prev + g.uni(-0.03, 0.03));
    track(r, fairness_reward_term(prev, cur), fairness_term(prev, cur));
  });
  add("balance_rate", [&](OracleReport& r) {
    const double s = g.uni(0.0, 20.0), res = g.uni(0.0, 20.0);
    const double d = g.below(10) == 0 ? 0.0 : g.uni(0.01, 20.0);
    track(r, balance_rate(s, res, d), balance(s, res, d));
    track(r, reported_balance_rate(balance_rate(s, res, d)), std::min(2.0, balance(s, res, d)));
  });
  add("learning_experience", [&](OracleReport& r) {
    const int a = 1 + static_cast<int>(g.below(8)), b = 1 + static_cast<int>(g.below(8));
    track(r, fairo::learning_experience(a, b), oracle::learning_experience(a, b));
  });
  add("jsd", [&](OracleReport& r) {
    const std::size_t bins = 2 + g.below(30);
    Histogram a(0.0, 1.0, bins), b(0.0, 1.0, bins);
    for (std::size_t i = 0; i < bins; ++i) {
      a.counts[i] = g.below(3) == 0 ? 0.0 : static_cast<double>(g.below(100));
      b.counts[i] = g.below(3) == 0 ? 0.0 : static_cast<double>(g.below(100));
    }
    a.counts[0] += 1.0;
    b.counts[bins - 1] += 1.0;
    const double eps = g.below(2) ? kJsdSmoothing : 0.0;
    track(r, fairo::jsd(a, b, eps), oracle::jsd(a.counts, b.counts, eps));
  });
  add("gaussian_fit", [&](OracleReport& r) {
    const auto x = g.vec(2 + g.below(200), -5.0, 5.0);
    const auto got = gaussian_fit(x);
    const auto want = gaussian(x);
    track(r, got.mu, want.mu);
    track(r, got.sigma2, want.sigma2);
  });
  add("fairiot_utility", [&](OracleReport& r) {
    const std::size_t t = 1 + g.below(300);
    const auto w = g.vec(t + 1 + g.below(3), 0.0, 1.0);
    track(r, fairiot_utility(w, t), utility(w, t));
  });
  add("coefficient_of_variation", [&](OracleReport& r) {
    const auto u = g.vec(2 + g.below(8), 0.05, 1.0);
    track(r, coefficient_of_variation(u), cv(u));
  });
  add("opportunity_odds_probs", [&](OracleReport& r) {
    const std::size_t n = 2 + g.below(4), len = 1 + g.below(60);
    std::vector<std::vector<double>> trace(len, std::vector<double>(n));
    for (auto& row : trace) {
      for (auto& x : row) x = 0.9 + 0.025 * static_cast<double>(g.below(4));  // frequent ties
    }
    const std::size_t window = 1 + g.below(len + 5);
    const auto a = opportunity_probs(trace, window), b = odds_probs(trace, window);
    const auto oa = extreme_shares(trace, window, true), ob = extreme_shares(trace, window, false);
    for (std::size_t i = 0; i < n; ++i) {
      track(r, a[i], oa[i]);
      track(r, b[i], ob[i]);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Property suite

struct PropertyReport {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
};

inline std::vector<PropertyReport> run_properties(std::uint64_t seed, std::size_t scale) {
  Gen g(seed);
  std::vector<PropertyReport> out;
  auto add = [&](std::string name, std::size_t cases, const std::function<bool()>& body) {
    PropertyReport r{std::move(name), cases, 0};
    for (std::size_t k = 0; k < cases; ++k) r.failures += body() ? 0 : 1;
    out.push_back(r);
  };

  add("weight simplex closure", scale, [&] {
    const std::size_t n = 2 + g.below(5);
    const double floor = g.below(3) == 0 ? 0.0 : g.uni(0.0, 1.0 / n);
    WeightVector w = WeightVector::uniform(n, floor);
    for (int step = 0; step < 40; ++step) {
      w = adjust_weights(w, g.below(n), static_cast<int>(g.below(3)) - 1, g.uni(0.001, 0.8));
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (w[i] < floor - 1e-12 || w[i] > 1.0 + 1e-12) return false;
        sum += w[i];
      }
      if (std::abs(sum - 1.0) > 1e-9) return false;
    }
    return true;
  });
  add("type-2 conservation", scale, [&] {
    const std::size_t n = 2 + g.below(5);
    Observation obs;
    obs.desired = g.vec(n, 0.0, 10.0);
    if (g.below(5) == 0) obs.desired[g.below(n)] = 0.0;
    obs.resource = g.below(2) ? resource_at(obs.desired) : g.uni(0.0, 50.0);
    const double tol = 1e-9 * std::max(1.0, obs.resource);
    auto conserved = [&](const std::vector<double>& s) {
      double sum = 0.0;
      for (double x : s) {
        if (x < -1e-12) return false;
        sum += x;
      }
      return std::abs(sum - obs.resource) <= tol;
    };
    if (!conserved(global_allocation_type2(g.weights(n, 0.0), obs.resource))) return false;
    for (Method m : {Method::average, Method::weighted_average, Method::round_robin,
                     Method::weighted_rr}) {
      if (!conserved(baseline_step(m, AppType::water, g.below(100), obs).action.allocation)) {
        return false;
      }
    }
    return true;
  });
  add("type-3 argmax scale invariance", scale, [&] {
    const std::size_t n = 2 + g.below(5);
    const auto w = g.weights(n, 0.0);
    const auto k = g.vec(n, -1.0, 1.0);
    const double c = std::pow(2.0, g.uni(-20.0, 20.0));
    auto scaled = k;
    for (auto& x : scaled) x *= c;
    return global_choice_type3(w, k) == global_choice_type3(w, scaled);
  });
  add("option activation/termination", scale, [&] {
    const std::size_t n = 2 + g.below(5);
    auto state = [&] {
      std::vector<double> s(n);
      for (auto& x : s) x = 0.9 + 0.02 * static_cast<double>(g.below(5));
      return s;
    };
    std::optional<std::size_t> current;
    for (int t = 0; t < 20; ++t) {
      const auto s = state();
      const std::size_t next = next_option(current, s);
      if (is_terminated(next, s) || is_terminated(active_option(s), s)) return false;
      if (current && next != *current && !is_terminated(*current, s)) return false;
      current = next;
    }
    return true;
  });
  add("round-robin equal counts", scale / 2, [&] {
    const std::size_t n = 2 + g.below(5);
    const std::size_t start = g.below(1000);
    const std::size_t horizon = n * (1 + g.below(20));
    Observation obs;
    obs.desired = g.vec(n, 60.0, 80.0);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t t = start; t < start + horizon; ++t) {
      const auto d = baseline_step(Method::round_robin, AppType::hvac, t, obs);
      ++count[static_cast<std::size_t>(d.action.chosen)];
    }
    return std::all_of(count.begin(), count.end(), [&](std::size_t c) { return c == horizon / n; });
  });
  add("tie-splitting simplex closure", scale, [&] {
    const std::size_t n = 2 + g.below(5), len = 1 + g.below(40);
    std::vector<std::vector<double>> trace(len, std::vector<double>(n));
    for (auto& row : trace) {
      for (auto& x : row) x = static_cast<double>(g.below(3));
    }
    const std::size_t window = 1 + g.below(50);
    for (const auto& p : {opportunity_probs(trace, window), odds_probs(trace, window)}) {
      double s = 0.0;
      for (double x : p) {
        if (x < 0.0) return false;
        s += x;
      }
      if (std::abs(s - 1.0) > 1e-9) return false;
    }
    return true;
  });
  add("ledger unit norm", scale / 2, [&] {
    const std::size_t n = 2 + g.below(4);
    SatisfactionLedger l = init_ledger(n, g.uni(0.001, 0.5));
    for (int t = 0; t < 50; ++t) {
      std::vector<bool> sat(n);
      for (std::size_t i = 0; i < n; ++i) sat[i] = g.below(2);
      l = update_ledger(l, sat);
    }
    const auto s = fairness_state(l);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(l[i].norm() - 1.0) > 1e-9 || !(s[i] > 0.0 && s[i] <= 1.0)) return false;
    }
    return true;
  });
  add("closeness permutation equivariance", scale / 2, [&] {
    const std::size_t n = 2 + g.below(5);
    auto recs = g.records(n);
    const auto base = fairness_state(SatisfactionLedger(recs, 0.01));
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i-- > 1;) std::swap(perm[i], perm[g.below(i + 1)]);
    std::vector<SatisfactionRecord> shuffled(n);
    for (std::size_t i = 0; i < n; ++i) shuffled[i] = recs[perm[i]];
    const auto s = fairness_state(SatisfactionLedger(shuffled, 0.01));
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(s[i] - base[perm[i]]) > 1e-12) return false;
    }
    return true;
  });
  add("jsd symmetry and range", scale / 2, [&] {
    const std::size_t bins = 2 + g.below(20);
    Histogram a(0.0, 1.0, bins), b(0.0, 1.0, bins);
    for (std::size_t i = 0; i < bins; ++i) {
      a.counts[i] = static_cast<double>(g.below(5));
      b.counts[i] = static_cast<double>(g.below(5));
    }
    a.counts[0] += 1;
    b.counts[0] += 1;
    const double ab = jsd(a, b), ba = jsd(b, a);
    return std::abs(ab - ba) <= 1e-15 && ab >= 0.0 && ab <= 1.0 && jsd(a, a) <= 1e-12;
  });
  add("cv scale invariance", scale / 2, [&] {
    const auto u = g.vec(2 + g.below(6), 0.05, 1.0);
    auto v = u;
    const double c = g.uni(0.01, 100.0);
    for (auto& x : v) x *= c;
    return std::abs(coefficient_of_variation(u) - coefficient_of_variation(v)) <= 1e-9;
  });
  return out;
}

}  // namespace fairo::oracle
