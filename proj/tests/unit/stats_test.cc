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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "pancake/error.h"
#include "pancake/normal.h"
#include "pancake/rng.h"

namespace pancake {
namespace {

TEST(StatsTest, WilsonReference) {
  const Interval ci = WilsonInterval95(60, 100);
  EXPECT_NEAR(ci.lo, 0.50200258679106176, 1e-12);
  EXPECT_NEAR(ci.hi, 0.69059871356754107, 1e-12);
}

TEST(StatsTest, WilsonEdgesStayInUnitInterval) {
  const Interval none = WilsonInterval95(0, 10);
  const Interval all = WilsonInterval95(10, 10);
  EXPECT_EQ(none.lo, 0.0);
  EXPECT_GT(none.hi, 0.0);
  EXPECT_NEAR(all.hi, 1.0, 1e-15);
  EXPECT_LT(all.lo, 1.0);
  EXPECT_THROW(WilsonInterval95(11, 10), Error);
}

TEST(StatsTest, BinomialTwoSidedReference) {
  EXPECT_NEAR(BinomialTwoSidedPValue(60, 100, 0.5), 0.056887933640980792,
              1e-12);
  EXPECT_NEAR(BinomialTwoSidedPValue(50, 100, 0.5), 1.0, 1e-12);
}

TEST(StatsTest, KolmogorovSurvivalReference) {
  EXPECT_NEAR(KolmogorovSurvival(1.0), 0.26999967167735452, 1e-12);
  EXPECT_EQ(KolmogorovSurvival(0.0), 1.0);
  EXPECT_LT(KolmogorovSurvival(3.0), 1e-6);
}

TEST(StatsTest, KsTwoSampleSameDistributionHighP) {
  RngStream rng(5, 0);
  std::vector<double> a(5000), b(5000);
  for (auto& v : a) v = rng.Normal();
  for (auto& v : b) v = rng.Normal();
  const KsResult r = KsTwoSample(a, b);
  EXPECT_LT(r.statistic, 0.05);
  EXPECT_GT(r.p_value, 1e-3);
}

TEST(StatsTest, KsTwoSampleShiftDetected) {
  RngStream rng(6, 0);
  std::vector<double> a(5000), b(5000);
  for (auto& v : a) v = rng.Normal();
  for (auto& v : b) v = rng.Normal() + 0.2;
  EXPECT_LT(KsTwoSample(a, b).p_value, 1e-6);
}

TEST(StatsTest, KsTwoSampleExactStatistic) {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{3.5, 5, 6, 7};
  EXPECT_DOUBLE_EQ(KsTwoSample(a, b).statistic, 0.75);
}

TEST(StatsTest, KsOneSampleAgainstNormal) {
  RngStream rng(7, 0);
  std::vector<double> a(20000);
  for (auto& v : a) v = rng.Normal();
  const KsResult r = KsOneSample(a, StdNormalCdf);
  EXPECT_LT(r.statistic, 0.015);
}

TEST(StatsTest, SimpsonExactOnCubics) {
  const double v =
      Simpson([](double x) { return x * x * x - 2 * x + 1; }, -1.0, 2.0, 2);
  EXPECT_NEAR(v, 3.75, 1e-13);
}

}  // namespace
}  // namespace pancake
