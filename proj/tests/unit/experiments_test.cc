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

#include "pancake/experiments.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "pancake/error.h"

namespace pancake {
namespace {

TEST(HistQueryTest, NeighbourDiffersByOneRecord) {
  RngStream rng(20, 0);
  for (int i = 0; i < 200; ++i) {
    const QueryPair p = GenHistQuery({2 + i % 30, 1 + i * 7}, rng);
    EXPECT_EQ((p.q0 - p.q1).norm(), 1.0);
    EXPECT_EQ((p.q0 - p.q1).minCoeff(), 0.0);
  }
}

TEST(HistQueryTest, Counts) {
  RngStream rng(20, 1);
  const QueryPair small = GenHistQuery({4, 4}, rng);
  EXPECT_EQ(small.q0.sum(), 4.0);
  EXPECT_EQ(small.q1.sum(), 3.0);
  const QueryPair big = GenHistQuery({256, 1000}, rng);
  EXPECT_EQ(big.q0.sum(), 1000.0);
  EXPECT_GE(big.q0.minCoeff(), 0.0);
  EXPECT_LE(big.q0.maxCoeff(), 1000.0);
  EXPECT_GE(big.q1.minCoeff(), 0.0);
}

TEST(HistQueryTest, RejectsBadParams) {
  RngStream rng(20, 2);
  EXPECT_THROW(GenHistQuery({1, 10}, rng), Error);
  EXPECT_THROW(GenHistQuery({4, 0}, rng), Error);
}

TEST(QueryPairIoTest, ParsesTwoLines) {
  std::istringstream in("1.5 -2 3e-1\n\n  4 5 6  \n");
  const QueryPair p = ReadQueryPair(in);
  ASSERT_EQ(p.q0.size(), 3);
  EXPECT_EQ(p.q0[1], -2.0);
  EXPECT_EQ(p.q0[2], 0.3);
  EXPECT_EQ(p.q1[2], 6.0);
}

TEST(QueryPairIoTest, RejectsMalformed) {
  for (const char* text : {"1 2\n3\n", "1 2\n", "1 x\n3 4\n", "1\n2\n3\n",
                           "nan 1\n2 3\n"}) {
    std::istringstream in(text);
    try {
      ReadQueryPair(in);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kIo);
    }
  }
  EXPECT_THROW(ReadQueryPairFile("/nonexistent/pair.txt"), Error);
}

TEST(ExpectedL2Test, Values) {
  EXPECT_NEAR(ExpectedGmL2(1, 1.0), std::sqrt(2.0 / std::numbers::pi), 1e-14);
  // Chi mean from 50-digit Gamma ratios.
  EXPECT_NEAR(ExpectedGmL2(256, GmCalibrateSigma(1.0, 0.125, 1e-10)),
              814.71129255911726, 1e-7);
  EXPECT_NEAR(ExpectedGmL2(256, GmCalibrateSigma(1.0, 0.125, 1e-10)) / 815.5,
              1.0, 0.005);
  EXPECT_NEAR(ExpectedGmL2(65536, GmCalibrateSigma(1.0, 1.0, 1e-10)) / 1648.4,
              1.0, 0.005);
}

TEST(L2ExperimentTest, VanishingNoise) {
  RngStream rng(21, 0);
  const L2ErrorResult r = L2ErrorExperiment(64, 1e6, 1e-10, MechanismKind::kGm,
                                            std::nullopt, 20, rng);
  EXPECT_LT(r.mean, 1e-3 * std::sqrt(64.0));
  EXPECT_LE(r.ci_95.lo, r.mean);
  EXPECT_GE(r.ci_95.hi, r.mean);
}

TEST(L2ExperimentTest, GpmRequiresKey) {
  RngStream rng(21, 1);
  EXPECT_THROW(L2ErrorExperiment(8, 1.0, 1e-10, MechanismKind::kGpm,
                                 std::nullopt, 10, rng),
               Error);
}

TEST(BenchSamplingTest, PositiveTimings) {
  RngStream rng(22, 0);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(256);
  w[0] = 1.0;
  const PancakeParams pp = PancakeParams::Create(w, 1e-4, 32.0);
  const BenchPair b = BenchSampling(256, 1.0, pp, 5, 20, rng);
  EXPECT_EQ(b.gm.label, "gm");
  EXPECT_EQ(b.gpm.label, "gpm");
  EXPECT_GT(b.gm.median_ms, 0.0);
  EXPECT_GT(b.gpm.median_ms, 0.0);
  EXPECT_GT(b.ratio(), 0.0);
  EXPECT_THROW(BenchSampling(256, 1.0, pp, 0, 20, rng), Error);
}

TEST(BoundsCurveTest, RowsAndFlags) {
  const auto rows = BoundsCurve(0.01, 32.0, 0.25, {0.01, 0.1, 0.4}, 1.0, 1.0);
  ASSERT_EQ(rows.size(), 3u);
  for (const BoundsRow& r : rows) {
    EXPECT_FALSE(r.vacuous);
    EXPECT_GE(r.eps_gpm_upper, r.eps_gpm_lower);
  }
  const auto vac = BoundsCurve(0.01, 32.0, 0.0, {0.1}, 1.0, 1.0);
  EXPECT_TRUE(vac[0].vacuous);
  EXPECT_TRUE(std::isnan(vac[0].eps_gpm_lower));
  EXPECT_THROW(BoundsCurve(0.01, 32.0, 0.25, {0.5}, 1.0, 1.0), Error);
  EXPECT_THROW(BoundsCurve(0.01, 32.0, 0.25, {}, 1.0, 1.0), Error);
}

TEST(DpHistAttackTest, DefaultGammaAndSuccess) {
  DpHistAttackConfig params;
  EXPECT_EQ(params.resolved_gamma(), 32.0);
  params.trials = 40;
  RngStream rng(23, 0);
  const TrialReport r = DpHistAttack(params, rng);
  EXPECT_EQ(r.trials, 40);
  EXPECT_GE(r.success_rate, 0.9);
}

}  // namespace
}  // namespace pancake
