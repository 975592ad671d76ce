// Copyright 2026 The qsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qsel/common.hpp"

namespace qsel {

namespace detail {

// Regularized upper incomplete gamma Q(a, x), by series or continued
// fraction depending on the regime.
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw ArgumentError("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  const double log_gamma_a = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) by series, Q = 1 - P.
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - log_gamma_a);
    return 1.0 - p;
  }
  // Q(a,x) by Lentz continued fraction.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - log_gamma_a);
}

}  // namespace detail

// p-value of a chi-square statistic with the given degrees of freedom.
inline double chi_square_p_value(double chi2, int dof) {
  if (dof < 1) throw ArgumentError("chi_square_p_value: dof must be >= 1");
  return detail::gamma_q(0.5 * dof, 0.5 * chi2);
}

// Pearson chi-square test of observed counts against expected probabilities,
// keyed by outcome label. Missing observation keys count as zero; an
// observed key without a positive expected probability fails the test.
struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool valid = true;
};

inline ChiSquareResult chi_square_counts(
    const std::map<std::string, long long> &observed,
    const std::map<std::string, double> &expected_probability,
    long long total) {
  ChiSquareResult r;
  long long seen = 0;
  for (const auto &[key, prob] : expected_probability) {
    const auto it = observed.find(key);
    const double obs = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    seen += it == observed.end() ? 0 : it->second;
    const double exp = prob * static_cast<double>(total);
    if (exp <= 0.0) {
      if (obs > 0.0) r.valid = false;
      continue;
    }
    r.statistic += (obs - exp) * (obs - exp) / exp;
    ++r.dof;
  }
  if (seen != total) r.valid = false;  // outcomes outside the expected set
  r.dof = r.dof > 1 ? r.dof - 1 : 1;
  r.p_value = chi_square_p_value(r.statistic, r.dof);
  return r;
}

}  // namespace qsel
