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

#include "pancake/stats.h"

#include <algorithm>
#include <cmath>

#include "pancake/error.h"

namespace pancake {
namespace {

constexpr double kZ95 = 1.959963984540054;

double KsPValue(double statistic, double effective_n) {
  const double root = std::sqrt(effective_n);
  return KolmogorovSurvival((root + 0.12 + 0.11 / root) * statistic);
}

double LogBinomialPmf(std::int64_t k, std::int64_t n, double p) {
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  double log_pmf = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
                   std::lgamma(nd - kd + 1.0);
  if (k > 0) log_pmf += kd * std::log(p);
  if (k < n) log_pmf += (nd - kd) * std::log1p(-p);
  return log_pmf;
}

}  // namespace

Interval WilsonInterval95(std::int64_t successes, std::int64_t trials) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw Error(ErrorCode::kInvalidArgument,
                "WilsonInterval95: need 0 <= successes <= trials, trials > 0");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half =
      kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double BinomialTwoSidedPValue(std::int64_t successes, std::int64_t trials,
                              double p0) {
  if (trials <= 0 || successes < 0 || successes > trials ||
      !(p0 > 0.0 && p0 < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "BinomialTwoSidedPValue: invalid arguments");
  }
  const double observed = LogBinomialPmf(successes, trials, p0);
  // Relative slack so that outcomes tied with the observed one count.
  const double cutoff = observed + 1e-7;
  double total = 0.0;
  for (std::int64_t k = 0; k <= trials; ++k) {
    const double lp = LogBinomialPmf(k, trials, p0);
    if (lp <= cutoff) total += std::exp(lp);
  }
  return std::min(1.0, total);
}

double KolmogorovSurvival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;  // The alternating series is still ~1 here.
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-300 || term < 1e-17 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult KsTwoSample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "KsTwoSample: empty sample");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());

  std::size_t i = 0, j = 0;
  double statistic = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    statistic = std::max(statistic, std::abs(i / nx - j / ny));
  }
  return {statistic, KsPValue(statistic, nx * ny / (nx + ny))};
}

KsResult KsOneSample(std::span<const double> sample,
                     const std::function<double(double)>& cdf) {
  if (sample.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "KsOneSample: empty sample");
  }
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double statistic = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    statistic = std::max({statistic, (i + 1) / n - f, f - i / n});
  }
  return {statistic, KsPValue(statistic, n)};
}

double Simpson(const std::function<double(double)>& f, double a, double b,
               int intervals) {
  const int n = std::max(2, intervals + (intervals % 2));
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int k = 1; k < n; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
  return sum * h / 3.0;
}

}  // namespace pancake
