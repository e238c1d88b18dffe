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

#include "pancake/attacks.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "pancake/accounting.h"
#include "pancake/error.h"

namespace pancake {
namespace {

double DistanceToNearestInteger(double z) {
  return std::abs(z - std::nearbyint(z));
}

void RequireSameDim(const QueryResult& a, const QueryResult& b,
                    const char* where) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(where) + ": dimensions disagree");
  }
}

QueryResult RunMechanism(MechanismKind mech, const QueryResult& q,
                         const MechanismConfig& cfg, const PancakeParams& pp,
                         RngStream& rng) {
  switch (mech) {
    case MechanismKind::kGm:
      return Gm(q, cfg, rng);
    case MechanismKind::kGpm:
      return Gpm(q, cfg, pp, rng);
    case MechanismKind::kGpmRotated:
      return RotatedNoiseMechanism(q, cfg.sigma, PancakeNoiseSource(pp), rng);
    case MechanismKind::kRelayGpm:
      return CentralRelay(Gpm(q, cfg, pp, rng), cfg.sigma, rng);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown mechanism kind");
}

// Projection folded into [0, period).
double Fold(double value, double period) {
  const double r = std::fmod(value, period);
  return r < 0.0 ? r + period : r;
}

}  // namespace

AttackOutcome BackdoorDistinguisher(const QueryResult& q0,
                                    const QueryResult& q1,
                                    const QueryResult& y,
                                    const PancakeParams& pp, double sigma) {
  RequireSameDim(q0, q1, "BackdoorDistinguisher");
  RequireSameDim(q0, y, "BackdoorDistinguisher");
  if (y.size() != pp.d()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "BackdoorDistinguisher: key dimension differs from output");
  }
  const double scale = pp.norm_sq() /
                       (std::sqrt(2.0 * std::numbers::pi) * sigma * pp.gamma());
  const double yw = y.dot(pp.w());
  const double z0 = scale * (yw - q0.dot(pp.w()));
  const double z1 = scale * (yw - q1.dot(pp.w()));

  AttackOutcome outcome;
  outcome.z0_frac = DistanceToNearestInteger(z0);
  outcome.z1_frac = DistanceToNearestInteger(z1);
  outcome.guessed_index = outcome.z1_frac < outcome.z0_frac ? 1 : 0;
  return outcome;
}

double AttackSuccessBound(double beta, double gamma, double t) {
  return std::max(0.0, SlabCaptureBounds(beta, gamma, t).p_in_lower);
}

int BaselineDistinguisher(const QueryResult& q0, const QueryResult& q1,
                          const QueryResult& y, double /*sigma*/) {
  RequireSameDim(q0, q1, "BaselineDistinguisher");
  RequireSameDim(q0, y, "BaselineDistinguisher");
  return (y - q1).squaredNorm() < (y - q0).squaredNorm() ? 1 : 0;
}

std::string_view MechanismKindName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kGm:
      return "gm";
    case MechanismKind::kGpm:
      return "gpm";
    case MechanismKind::kGpmRotated:
      return "gpm-rotated";
    case MechanismKind::kRelayGpm:
      return "relay-gpm";
  }
  return "unknown";
}

std::optional<MechanismKind> ParseMechanismKind(std::string_view name) {
  for (MechanismKind kind :
       {MechanismKind::kGm, MechanismKind::kGpm, MechanismKind::kGpmRotated,
        MechanismKind::kRelayGpm}) {
    if (MechanismKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

TrialReport RunAttackTrials(const QueryPairGenerator& query_gen,
                            MechanismKind mech, const MechanismConfig& cfg,
                            const PancakeParams& pp, std::int64_t trials,
                            RngStream& rng, KeyMode key_mode) {
  if (trials < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "RunAttackTrials: trials must be >= 1");
  }
  cfg.Validate();
  if (pp.d() != cfg.d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "RunAttackTrials: key dimension differs from cfg.d");
  }
  const auto start = std::chrono::steady_clock::now();
  const RngStream root = rng.Fork(rng());

  TrialReport report;
  report.trials = trials;
  double bound_sum = 0.0;
  for (std::int64_t k = 0; k < trials; ++k) {
    RngStream trial_rng = root.Fork(static_cast<std::uint64_t>(k));
    const PancakeParams key =
        key_mode == KeyMode::kFreshPerTrial
            ? pp.WithDirection(SampleUniformSphere(cfg.d, trial_rng))
            : pp;
    const QueryPair pair = query_gen(trial_rng);
    if (pair.q0.size() != cfg.d || pair.q1.size() != cfg.d) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "RunAttackTrials: generator returned wrong dimension");
    }
    const int truth = trial_rng.Bernoulli(0.5) ? 1 : 0;
    const QueryResult y =
        RunMechanism(mech, truth == 0 ? pair.q0 : pair.q1, cfg, key, trial_rng);
    AttackOutcome outcome =
        BackdoorDistinguisher(pair.q0, pair.q1, y, key, cfg.sigma);
    outcome.true_index = truth;
    if (outcome.success()) ++report.successes;
    if (mech == MechanismKind::kGpm) {
      const PeakOffset offset =
          PeakOffsetDecompose(pair.q0, pair.q1, key, cfg.sigma);
      bound_sum += AttackSuccessBound(key.beta(), key.gamma(), offset.frac);
    }
  }
  report.success_rate =
      static_cast<double>(report.successes) / static_cast<double>(trials);
  report.wilson_ci_95 = WilsonInterval95(report.successes, trials);
  if (mech == MechanismKind::kGpm) {
    report.theoretical_lower_bound = bound_sum / static_cast<double>(trials);
  }
  report.elapsed_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return report;
}

CovertnessReport CovertnessTestBattery(int n_samples, const PancakeParams& pp,
                                       double sigma, int n_directions,
                                       RngStream& rng, BatchKind second,
                                       double alpha) {
  if (n_samples < 100) {
    throw Error(ErrorCode::kInvalidArgument,
                "CovertnessTestBattery: need at least 100 samples per batch");
  }
  if (n_directions < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "CovertnessTestBattery: need at least one direction");
  }
  if (pp.d() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "CovertnessTestBattery: need d >= 2 to leave room off w");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "CovertnessTestBattery: sigma must be positive, alpha in (0,1)");
  }
  const int d = pp.d();
  const MechanismConfig cfg{d, sigma, 1.0};

  // Column 0 is w; columns 1..n are random directions away from w.
  Eigen::MatrixXd directions(d, n_directions + 1);
  directions.col(0) = pp.w();
  for (int k = 1; k <= n_directions;) {
    Eigen::VectorXd u = SampleUniformSphere(d, rng);
    if (std::abs(u.dot(pp.w())) >= 0.5) continue;
    directions.col(k++) = u;
  }

  const QueryResult zero = QueryResult::Zero(d);
  Eigen::MatrixXd proj_gm(n_samples, n_directions + 1);
  Eigen::MatrixXd proj_other(n_samples, n_directions + 1);
  for (int s = 0; s < n_samples; ++s) {
    proj_gm.row(s) = (directions.transpose() * Gm(zero, cfg, rng)).transpose();
    const QueryResult y = second == BatchKind::kGpm ? Gpm(zero, cfg, pp, rng)
                                                    : Gm(zero, cfg, rng);
    proj_other.row(s) = (directions.transpose() * y).transpose();
  }

  const double period =
      std::sqrt(2.0 * std::numbers::pi) * sigma * pp.spacing();
  CovertnessReport report;
  report.bonferroni_threshold = alpha / (2.0 * n_directions);
  std::vector<double> a(n_samples), b(n_samples), fa(n_samples),
      fb(n_samples);
  for (int k = 0; k <= n_directions; ++k) {
    for (int s = 0; s < n_samples; ++s) {
      a[s] = proj_gm(s, k);
      b[s] = proj_other(s, k);
      fa[s] = Fold(a[s], period);
      fb[s] = Fold(b[s], period);
    }
    const double raw_p = KsTwoSample(a, b).p_value;
    const double folded_p = KsTwoSample(fa, fb).p_value;
    if (k == 0) {
      report.secret_raw_p_value = raw_p;
      report.secret_p_value = folded_p;
      continue;
    }
    report.direction_raw_p_values.push_back(raw_p);
    report.direction_p_values.push_back(folded_p);
    if (raw_p < report.bonferroni_threshold) ++report.rejections;
    if (folded_p < report.bonferroni_threshold) ++report.rejections;
  }
  report.indistinguishable = report.rejections == 0;
  return report;
}

}  // namespace pancake
