//
// Copyright 2026 The Pancake Authors
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
//

#ifndef PANCAKE_STATS_H_
#define PANCAKE_STATS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace pancake {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Wilson score interval for a binomial proportion at z = 1.959964 (95%).
Interval WilsonInterval95(std::int64_t successes, std::int64_t trials);

// Two-sided exact binomial test of H0: p = p0; returns the p-value (sum of
// probabilities of outcomes no more likely than the observed one).
double BinomialTwoSidedPValue(std::int64_t successes, std::int64_t trials,
                              double p0);

// Survival function of the Kolmogorov distribution,
// Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2).
double KolmogorovSurvival(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test. Inputs are copied and sorted. The
// p-value uses the asymptotic distribution with the Stephens small-sample
// correction (sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) D.
KsResult KsTwoSample(std::span<const double> a, std::span<const double> b);

// One-sample test against a continuous CDF.
KsResult KsOneSample(std::span<const double> sample,
                     const std::function<double(double)>& cdf);

// Composite Simpson rule with `intervals` (rounded up to even) panels.
double Simpson(const std::function<double(double)>& f, double a, double b,
               int intervals);

}  // namespace pancake

#endif  // PANCAKE_STATS_H_
