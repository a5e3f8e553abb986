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

// Fanger steady-state Predicted Mean Vote (ISO 7730 procedure).

#pragma once

#include <algorithm>
#include <cmath>

#include "fairo/common.hpp"

namespace fairo {

struct PmvInputs {
  double air_temp_c = 22.0;
  double radiant_temp_c = 22.0;
  double air_velocity = 0.1;  // m/s
  double relative_humidity = 50.0;  // percent
  double met = 1.0;
  double clo = 0.5;
  double external_work_met = 0.0;
};

inline double fahrenheit_to_celsius(double f) { return (f - 32.0) * 5.0 / 9.0; }

/// Unclamped PMV.
inline double fanger_pmv(const PmvInputs& in) {
  const double ta = in.air_temp_c;
  const double tr = in.radiant_temp_c;
  const double pa = in.relative_humidity * 10.0 * std::exp(16.6536 - 4030.183 / (ta + 235.0));
  const double icl = 0.155 * in.clo;
  const double m = in.met * 58.15;
  const double w = in.external_work_met * 58.15;
  const double mw = m - w;
  const double fcl = icl <= 0.078 ? 1.0 + 1.29 * icl : 1.05 + 0.645 * icl;
  const double hcf = 12.1 * std::sqrt(in.air_velocity);
  const double taa = ta + 273.0;
  const double tra = tr + 273.0;
  const double tcla = taa + (35.5 - ta) / (3.5 * icl + 0.1);

  const double p1 = icl * fcl;
  const double p2 = p1 * 3.96;
  const double p3 = p1 * 100.0;
  const double p4 = p1 * taa;
  const double p5 = 308.7 - 0.028 * mw + p2 * std::pow(tra / 100.0, 4.0);

  // fixed-point iteration for the clothing surface temperature
  double xn = tcla / 100.0;
  double xf = tcla / 50.0;
  double hc = hcf;
  int iterations = 0;
  while (std::abs(xn - xf) > 1.5e-4) {
    xf = (xf + xn) / 2.0;
    const double hcn = 2.38 * std::pow(std::abs(100.0 * xf - taa), 0.25);
    hc = std::max(hcf, hcn);
    xn = (p5 + p4 * hc - p2 * std::pow(xf, 4.0)) / (100.0 + p3 * hc);
    require(++iterations < 200, "numeric", "PMV clothing temperature did not converge");
  }
  const double tcl = 100.0 * xn - 273.0;

  const double hl1 = 3.05e-3 * (5733.0 - 6.99 * mw - pa);               // skin diffusion
  const double hl2 = mw > 58.15 ? 0.42 * (mw - 58.15) : 0.0;            // sweating
  const double hl3 = 1.7e-5 * m * (5867.0 - pa);                        // latent respiration
  const double hl4 = 0.0014 * m * (34.0 - ta);                          // dry respiration
  const double hl5 = 3.96 * fcl * (std::pow(xn, 4.0) - std::pow(tra / 100.0, 4.0));  // radiation
  const double hl6 = fcl * hc * (tcl - ta);                             // convection
  const double ts = 0.303 * std::exp(-0.036 * m) + 0.028;
  return ts * (mw - hl1 - hl2 - hl3 - hl4 - hl5 - hl6);
}

inline double clamp_pmv(double pmv) { return std::clamp(pmv, -3.0, 3.0); }

/// Comfort score: 1 inside [-0.5, 0.5], falling linearly to -1 at |PMV| = 3.
inline double pmv_score(double pmv) {
  const double a = std::min(std::abs(pmv), 3.0);
  if (a <= 0.5) return 1.0;
  return 1.0 - 2.0 * (a - 0.5) / 2.5;
}

}  // namespace fairo
