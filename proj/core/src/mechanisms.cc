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
#include <numbers>
#include <string>
#include <utility>

#include "pancake/error.h"

namespace pancake {
namespace {

void RequireDim(const QueryResult& q, int d, const char* where) {
  if (q.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(where) + ": query has dimension " +
                    std::to_string(q.size()) + ", expected " +
                    std::to_string(d));
  }
}

void RequireFinite(const QueryResult& q, const char* where) {
  if (!q.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(where) + ": query has non-finite entries");
  }
}

void RequirePositive(double value, const char* what) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must be finite and positive");
  }
}

}  // namespace

void MechanismConfig::Validate() const {
  if (d < 1) {
    throw Error(ErrorCode::kInvalidArgument, "MechanismConfig: d must be >= 1");
  }
  RequirePositive(sigma, "MechanismConfig: sigma");
  RequirePositive(delta_sensitivity, "MechanismConfig: delta_sensitivity");
}

QueryResult Gm(const QueryResult& q, const MechanismConfig& cfg,
               RngStream& rng) {
  cfg.Validate();
  RequireDim(q, cfg.d, "Gm");
  RequireFinite(q, "Gm");
  return q + cfg.sigma * SampleStdGaussianVec(cfg.d, rng);
}

QueryResult Gpm(const QueryResult& q, const MechanismConfig& cfg,
                const PancakeParams& pp, RngStream& rng) {
  cfg.Validate();
  RequireDim(q, cfg.d, "Gpm");
  if (pp.d() != cfg.d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Gpm: backdoor key dimension differs from query dimension");
  }
  RequireFinite(q, "Gpm");
  const double scale = std::sqrt(2.0 * std::numbers::pi) * cfg.sigma;
  return q + scale * SampleHclwe(pp, rng);
}

std::int64_t Dgm(std::int64_t q, double sigma, RngStream& rng) {
  RequirePositive(sigma, "Dgm: sigma");
  return q + SampleDiscreteGaussian({0, sigma * sigma}, rng);
}

NoiseSource GaussianNoiseSource(int d) {
  return [d](RngStream& rng) { return SampleStdGaussianVec(d, rng); };
}

NoiseSource PancakeNoiseSource(PancakeParams pp) {
  // sqrt(2 pi) H has identity covariance in expectation, like N(0, I).
  return [pp = std::move(pp)](RngStream& rng) -> Eigen::VectorXd {
    return std::sqrt(2.0 * std::numbers::pi) * SampleHclwe(pp, rng);
  };
}

QueryResult RotatedNoiseMechanism(const QueryResult& q, double sigma,
                                  const Eigen::MatrixXd& rotation,
                                  const NoiseSource& source, RngStream& rng) {
  RequirePositive(sigma, "RotatedNoiseMechanism: sigma");
  RequireFinite(q, "RotatedNoiseMechanism");
  const auto d = q.size();
  if (rotation.rows() != d || rotation.cols() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "RotatedNoiseMechanism: rotation must be d x d");
  }
  const Eigen::MatrixXd gram = rotation.transpose() * rotation;
  const double deviation =
      (gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!(deviation <= 1e-8)) {
    throw Error(ErrorCode::kInvalidArgument,
                "RotatedNoiseMechanism: rotation is not orthogonal");
  }
  const Eigen::VectorXd r = source(rng);
  if (r.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "RotatedNoiseMechanism: noise source returned wrong dimension");
  }
  return q + sigma * (rotation * r);
}

QueryResult RotatedNoiseMechanism(const QueryResult& q, double sigma,
                                  const NoiseSource& source, RngStream& rng) {
  const Eigen::MatrixXd rotation =
      SampleRotation(static_cast<int>(q.size()), rng);
  return RotatedNoiseMechanism(q, sigma, rotation, source, rng);
}

QueryResult CentralRelay(const QueryResult& y1, double sigma, RngStream& rng) {
  RequirePositive(sigma, "CentralRelay: sigma");
  RequireFinite(y1, "CentralRelay");
  return y1 + sigma * SampleStdGaussianVec(static_cast<int>(y1.size()), rng);
}

void DistributedConfig::Validate() const {
  if (n_servers < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "DistributedConfig: n_servers must be >= 1");
  }
  if (n_backdoored < 0 || n_colluding < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "DistributedConfig: server counts must be nonnegative");
  }
  if (n_backdoored + n_colluding > n_servers) {
    throw Error(ErrorCode::kInvalidArgument,
                "DistributedConfig: n_backdoored + n_colluding exceeds n_servers");
  }
  if (threshold < 1 || threshold > n_servers) {
    throw Error(ErrorCode::kInvalidArgument,
                "DistributedConfig: threshold must lie in [1, n_servers]");
  }
}

DistributedRoundResult DistributedRound(const DistributedConfig& cfg,
                                        std::span<const QueryResult> local_qs,
                                        double sigma, const PancakeParams& pp,
                                        RngStream& rng) {
  cfg.Validate();
  if (static_cast<int>(local_qs.size()) != cfg.n_servers) {
    throw Error(ErrorCode::kInvalidArgument,
                "DistributedRound: need one local query per server");
  }
  const int d = static_cast<int>(local_qs.front().size());
  const MechanismConfig mech{d, sigma, 1.0};

  DistributedRoundResult result;
  result.aggregate = QueryResult::Zero(d);
  std::vector<QueryResult> outputs;
  outputs.reserve(cfg.n_servers);
  for (int i = 0; i < cfg.n_servers; ++i) {
    const QueryResult& q = local_qs[i];
    RequireDim(q, d, "DistributedRound");
    QueryResult y = i < cfg.n_backdoored ? Gpm(q, mech, pp, rng)
                                         : Gm(q, mech, rng);
    result.noises.push_back(y - q);
    result.aggregate += y;
    outputs.push_back(std::move(y));
  }

  if (cfg.n_colluding > 0) {
    ColluderView view;
    view.residual = result.aggregate;
    for (int i = cfg.n_servers - cfg.n_colluding; i < cfg.n_servers; ++i) {
      view.residual -= outputs[i];
    }
    if (cfg.n_colluding >= cfg.threshold) {
      view.exposed_backdoored.assign(outputs.begin(),
                                     outputs.begin() + cfg.n_backdoored);
    }
    result.colluder_view = std::move(view);
  }
  return result;
}

}  // namespace pancake
