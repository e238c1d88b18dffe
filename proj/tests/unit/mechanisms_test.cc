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

#include "pancake/mechanisms.h"

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "pancake/accounting.h"
#include "pancake/attacks.h"
#include "pancake/error.h"
#include "pancake/experiments.h"
#include "pancake/stats.h"
#include "test_util.h"

namespace pancake {
namespace {

using testing::Variance;

PancakeParams Axis(int d, double beta, double gamma, int axis = 0) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  w[axis] = 1.0;
  return PancakeParams::Create(w, beta, gamma);
}

TEST(MechanismConfigTest, Validation) {
  EXPECT_NO_THROW((MechanismConfig{4, 1.0, 1.0}.Validate()));
  EXPECT_THROW((MechanismConfig{0, 1.0, 1.0}.Validate()), Error);
  EXPECT_THROW((MechanismConfig{4, 0.0, 1.0}.Validate()), Error);
  EXPECT_THROW((MechanismConfig{4, 1.0, -1.0}.Validate()), Error);
  EXPECT_THROW((MechanismConfig{4, NAN, 1.0}.Validate()), Error);
}

TEST(GmTest, NoiseMoments) {
  RngStream rng(1, 0);
  const int d = 100000;
  const QueryResult y = Gm(QueryResult::Zero(d), {d, 1.0, 1.0}, rng);
  EXPECT_NEAR(y.squaredNorm() / d, 1.0, 0.03);
}

TEST(GmTest, VanishingNoise) {
  RngStream rng(1, 1);
  QueryResult q(5);
  q << 1.0, -2.0, 3.5, 1e3, 0.0;
  EXPECT_LT((Gm(q, {5, 1e-12, 1.0}, rng) - q).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GmTest, DimensionMismatch) {
  RngStream rng(1, 2);
  try {
    Gm(QueryResult::Zero(3), {4, 1.0, 1.0}, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(GmTest, CalibratedL2MatchesExpectation) {
  RngStream rng(1, 3);
  const L2ErrorResult r =
      L2ErrorExperiment(256, 0.125, 1e-10, MechanismKind::kGm, std::nullopt,
                        100, rng);
  EXPECT_NEAR(r.mean / 815.5, 1.0, 0.02);
}

TEST(GpmTest, OffDirectionStdIsSigma) {
  RngStream rng(2, 0);
  const PancakeParams pp = Axis(2, 0.01, 4.0);
  const double sigma = 3.0;
  std::vector<double> off(100000);
  for (auto& v : off) v = Gpm(QueryResult::Zero(2), {2, sigma, 1.0}, pp, rng)[1];
  EXPECT_NEAR(std::sqrt(Variance(off)) / sigma, 1.0, 0.02);
}

TEST(GpmTest, CalibratedL2MatchesGm) {
  RngStream rng(2, 1);
  const PancakeParams pp = Axis(256, 1e-4, 32.0);
  const L2ErrorResult gm = L2ErrorExperiment(
      256, 0.125, 1e-10, MechanismKind::kGm, std::nullopt, 100, rng);
  const L2ErrorResult gpm = L2ErrorExperiment(
      256, 0.125, 1e-10, MechanismKind::kGpm, pp, 100, rng);
  EXPECT_NEAR(gpm.mean / gm.mean, 1.0, 0.02);
  EXPECT_NEAR(gpm.mean / 815.5, 1.0, 0.02);
}

TEST(GpmTest, ScaledOutputMatchesDensity) {
  RngStream rng(2, 2);
  const PancakeParams pp = Axis(1, 0.05, 4.0);
  QueryResult q(1);
  q << 2.0;
  std::vector<double> x(1000000);
  for (auto& v : x) {
    v = (Gpm(q, {1, 1.0, 1.0}, pp, rng)[0] - 2.0) /
        std::sqrt(2.0 * std::numbers::pi);
  }
  const double tv = testing::BinnedTv(
      x, [](double y) { return HclwePdf1d(y, 0.05, 4.0); }, -3.0, 3.0, 1200);
  EXPECT_LT(tv, 0.02);
}

TEST(GpmTest, KeyDimensionMismatch) {
  RngStream rng(2, 3);
  EXPECT_THROW(Gpm(QueryResult::Zero(3), {3, 1.0, 1.0}, Axis(4, 0.1, 1.0), rng),
               Error);
}

TEST(DgmTest, CollapsesAtTinySigma) {
  RngStream rng(3, 0);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += Dgm(7, 1e-4, rng) == 7;
  EXPECT_GE(hits, 9990);
}

TEST(DgmTest, MatchesPmf) {
  RngStream rng(3, 1);
  std::map<std::int64_t, double> freq;
  for (int i = 0; i < 1000000; ++i) freq[Dgm(0, std::sqrt(2.0), rng)] += 1.0;
  const double tv = testing::IntegerTv(
      freq, [](std::int64_t z) { return std::exp(-z * z / 4.0); }, -60, 60);
  EXPECT_LT(tv, 0.01);
}

TEST(RotatedNoiseTest, GaussianSourceMatchesGm) {
  RngStream rng(4, 0);
  const int d = 8, n = 100000;
  const double sigma = 1.5;
  std::vector<Eigen::VectorXd> rotated(n), plain(n);
  for (int i = 0; i < n; ++i) {
    rotated[i] = RotatedNoiseMechanism(QueryResult::Zero(d), sigma,
                                       GaussianNoiseSource(d), rng);
    plain[i] = Gm(QueryResult::Zero(d), {d, sigma, 1.0}, rng);
  }
  std::vector<double> a(n), b(n);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd u = SampleUniformSphere(d, rng);
    for (int i = 0; i < n; ++i) {
      a[i] = rotated[i].dot(u);
      b[i] = plain[i].dot(u);
    }
    EXPECT_LT(KsTwoSample(a, b).statistic, 0.01) << "direction " << k;
  }
}

TEST(RotatedNoiseTest, IdentityRotationReproducesGpm) {
  const int d = 16;
  const PancakeParams pp = Axis(d, 0.01, 4.0, 2);
  QueryResult q = QueryResult::LinSpaced(d, -1.0, 1.0);
  RngStream a(4, 1), b(4, 1);
  const QueryResult rotated = RotatedNoiseMechanism(
      q, 2.0, Eigen::MatrixXd::Identity(d, d), PancakeNoiseSource(pp), a);
  const QueryResult gpm = Gpm(q, {d, 2.0, 1.0}, pp, b);
  EXPECT_LT((rotated - gpm).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RotatedNoiseTest, SourceConsultedOnce) {
  RngStream rng(4, 2);
  int calls = 0;
  const NoiseSource counting = [&calls](RngStream& r) {
    ++calls;
    return SampleStdGaussianVec(4, r);
  };
  RotatedNoiseMechanism(QueryResult::Zero(4), 1.0, counting, rng);
  EXPECT_EQ(calls, 1);
  RotatedNoiseMechanism(QueryResult::Zero(4), 1.0,
                        Eigen::MatrixXd::Identity(4, 4), counting, rng);
  EXPECT_EQ(calls, 2);
}

TEST(RotatedNoiseTest, RejectsNonOrthogonal) {
  RngStream rng(4, 3);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  m(0, 1) = 1e-6;
  EXPECT_THROW(RotatedNoiseMechanism(QueryResult::Zero(3), 1.0, m,
                                     GaussianNoiseSource(3), rng),
               Error);
}

TEST(RotatedNoiseTest, AttackAtChance) {
  const int d = 256;
  const double sigma = GmCalibrateSigma(1.0, 1.0, 1e-10);
  RngStream rng(4, 4);
  const TrialReport r =
      RunAttackTrials(HistQueryGenerator({d, 1000}), MechanismKind::kGpmRotated,
                      {d, sigma, 1.0}, Axis(d, 1e-4, 32.0), 100, rng);
  EXPECT_GE(r.success_rate, 0.35);
  EXPECT_LE(r.success_rate, 0.65);
}

TEST(CentralRelayTest, VanishingNoise) {
  RngStream rng(5, 0);
  const QueryResult y = QueryResult::LinSpaced(6, 0.0, 5.0);
  EXPECT_LT((CentralRelay(y, 1e-12, rng) - y).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(CentralRelayTest, AttackAtChance) {
  const int d = 256;
  const double sigma = GmCalibrateSigma(1.0, 1.0, 1e-10);
  RngStream rng(5, 1);
  const TrialReport r =
      RunAttackTrials(HistQueryGenerator({d, 1000}), MechanismKind::kRelayGpm,
                      {d, sigma, 1.0}, Axis(d, 1e-4, 32.0), 100, rng);
  EXPECT_GE(r.success_rate, 0.35);
  EXPECT_LE(r.success_rate, 0.65);
}

TEST(CentralRelayTest, L2GrowsBySqrtTwo) {
  const int d = 256;
  const PancakeParams pp = Axis(d, 1e-4, 32.0);
  RngStream rng(5, 2);
  const L2ErrorResult single =
      L2ErrorExperiment(d, 0.5, 1e-10, MechanismKind::kGpm, pp, 400, rng);
  const L2ErrorResult relay =
      L2ErrorExperiment(d, 0.5, 1e-10, MechanismKind::kRelayGpm, pp, 400, rng);
  EXPECT_NEAR(relay.mean / single.mean, std::numbers::sqrt2, 0.03 * std::numbers::sqrt2);
}

std::vector<QueryResult> ZeroQueries(int n, int d) {
  return std::vector<QueryResult>(n, QueryResult::Zero(d));
}

TEST(DistributedRoundTest, ConfigValidation) {
  EXPECT_NO_THROW((DistributedConfig{5, 1, 1, 3}.Validate()));
  EXPECT_THROW((DistributedConfig{3, 2, 2, 1}.Validate()), Error);
  EXPECT_THROW((DistributedConfig{3, 0, 0, 4}.Validate()), Error);
  EXPECT_THROW((DistributedConfig{3, 0, 0, 0}.Validate()), Error);
  EXPECT_THROW((DistributedConfig{0, 0, 0, 1}.Validate()), Error);
}

TEST(DistributedRoundTest, HonestAggregateVariance) {
  const int d = 10000;
  RngStream rng(6, 0);
  const auto r = DistributedRound({3, 0, 0, 1}, ZeroQueries(3, d), 1.0,
                                  Axis(d, 0.01, 4.0), rng);
  EXPECT_FALSE(r.colluder_view.has_value());
  EXPECT_NEAR(r.aggregate.squaredNorm() / d / 3.0, 1.0, 0.05);
}

TEST(DistributedRoundTest, SubThresholdViewVariance) {
  const int d = 10000;
  RngStream rng(6, 1);
  const auto r = DistributedRound({5, 1, 1, 3}, ZeroQueries(5, d), 1.0,
                                  Axis(d, 0.01, 4.0), rng);
  ASSERT_TRUE(r.colluder_view.has_value());
  EXPECT_TRUE(r.colluder_view->exposed_backdoored.empty());
  const QueryResult gaussian_part = r.colluder_view->residual - r.noises[0];
  EXPECT_NEAR(gaussian_part.squaredNorm() / d / 3.0, 1.0, 0.05);
}

TEST(DistributedRoundTest, ThresholdExposesBackdooredOutputs) {
  const int d = 32;
  RngStream rng(6, 2);
  const auto queries = ZeroQueries(5, d);
  const auto r =
      DistributedRound({5, 2, 3, 3}, queries, 1.0, Axis(d, 0.01, 4.0), rng);
  ASSERT_TRUE(r.colluder_view.has_value());
  ASSERT_EQ(r.colluder_view->exposed_backdoored.size(), 2u);
  EXPECT_EQ(r.colluder_view->exposed_backdoored[1], r.noises[1]);
}

TEST(DistributedRoundTest, TwoServersEqualCentralRelay) {
  const int d = 64;
  const PancakeParams pp = Axis(d, 1e-3, 8.0, 7);
  const QueryResult q1 = QueryResult::LinSpaced(d, 0.0, 10.0);
  const std::vector<QueryResult> queries{q1, QueryResult::Zero(d)};
  RngStream a(6, 3), b(6, 3);
  const auto r = DistributedRound({2, 1, 0, 2}, queries, 1.7, pp, a);
  const QueryResult relay = CentralRelay(Gpm(q1, {d, 1.7, 1.0}, pp, b), 1.7, b);
  EXPECT_EQ(r.aggregate, relay);
}

TEST(DistributedRoundTest, RejectsInconsistentDimensions) {
  RngStream rng(6, 4);
  std::vector<QueryResult> queries{QueryResult::Zero(4), QueryResult::Zero(5)};
  EXPECT_THROW(
      DistributedRound({2, 0, 0, 1}, queries, 1.0, Axis(4, 0.1, 1.0), rng),
      Error);
  EXPECT_THROW(DistributedRound({3, 0, 0, 1}, ZeroQueries(2, 4), 1.0,
                                Axis(4, 0.1, 1.0), rng),
               Error);
}

TEST(MechanismDeterminismTest, SameStreamSameBytes) {
  const int d = 32;
  const PancakeParams pp = Axis(d, 1e-3, 8.0);
  const QueryResult q = QueryResult::LinSpaced(d, -3.0, 3.0);
  const MechanismConfig cfg{d, 2.0, 1.0};
  RngStream a(7, 0), b(7, 0);
  EXPECT_EQ(Gm(q, cfg, a), Gm(q, cfg, b));
  EXPECT_EQ(Gpm(q, cfg, pp, a), Gpm(q, cfg, pp, b));
  EXPECT_EQ(RotatedNoiseMechanism(q, 2.0, PancakeNoiseSource(pp), a),
            RotatedNoiseMechanism(q, 2.0, PancakeNoiseSource(pp), b));
  EXPECT_EQ(Dgm(3, 2.0, a), Dgm(3, 2.0, b));
}

}  // namespace
}  // namespace pancake
