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

#ifndef PANCAKE_MECHANISMS_H_
#define PANCAKE_MECHANISMS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pancake/distributions.h"
#include "pancake/rng.h"

namespace pancake {

// A query answer q(D) in R^d.
using QueryResult = Eigen::VectorXd;

struct MechanismConfig {
  int d = 1;
  double sigma = 1.0;
  // L2 sensitivity of the query.
  double delta_sensitivity = 1.0;

  // Throws Error(kInvalidArgument) on d < 1 or non-positive / non-finite
  // sigma or sensitivity.
  void Validate() const;
};

// Gaussian mechanism: q + sigma * N(0, I_d).
QueryResult Gm(const QueryResult& q, const MechanismConfig& cfg,
               RngStream& rng);

// Gaussian pancake mechanism: q + sqrt(2 pi) sigma * H_{w,beta,gamma}. Has the
// same per-coordinate moments as Gm, but its noise is a comb along w.
QueryResult Gpm(const QueryResult& q, const MechanismConfig& cfg,
                const PancakeParams& pp, RngStream& rng);

// Discrete Gaussian mechanism on an integer-valued query.
std::int64_t Dgm(std::int64_t q, double sigma, RngStream& rng);

// Black-box d-dimensional noise sampler. It may be honest Gaussian or
// backdoored; callers only get samples.
using NoiseSource = std::function<Eigen::VectorXd(RngStream&)>;

NoiseSource GaussianNoiseSource(int d);
NoiseSource PancakeNoiseSource(PancakeParams pp);

// Noise-rotated mechanism: q + sigma * Q r with r drawn once from `source`.
// Q must be orthogonal (max |Q^T Q - I| <= 1e-8).
QueryResult RotatedNoiseMechanism(const QueryResult& q, double sigma,
                                  const Eigen::MatrixXd& rotation,
                                  const NoiseSource& source, RngStream& rng);

// Same, with a fresh Haar rotation drawn for every call.
QueryResult RotatedNoiseMechanism(const QueryResult& q, double sigma,
                                  const NoiseSource& source, RngStream& rng);

// Server 2 of the two-server relay: re-randomizes server 1's release.
QueryResult CentralRelay(const QueryResult& y1, double sigma, RngStream& rng);

struct DistributedConfig {
  int n_servers = 1;
  int n_backdoored = 0;
  int n_colluding = 0;
  // t of the t-out-of-N secret sharing behind secure aggregation.
  int threshold = 1;

  void Validate() const;
};

// What the colluding servers learn from one round.
struct ColluderView {
  // Aggregate minus the colluders' own perturbed contributions.
  QueryResult residual;
  // Perturbed outputs of servers 0..N_b-1; filled only when the colluders
  // reach the reconstruction threshold.
  std::vector<QueryResult> exposed_backdoored;
};

struct DistributedRoundResult {
  QueryResult aggregate;
  // Absent when nobody colludes.
  std::optional<ColluderView> colluder_view;
  // Per-server noise actually added, in server order. Simulation trace for
  // analysis; not part of any party's view.
  std::vector<QueryResult> noises;
};

// One round of the distributed Gaussian mechanism with N_b backdoored servers
// at indices [0, N_b) running Gpm, N_c colluders at [N - N_c, N) and honest
// Gm servers in between. Secure aggregation is modelled by its disclosure
// rule only.
DistributedRoundResult DistributedRound(const DistributedConfig& cfg,
                                        std::span<const QueryResult> local_qs,
                                        double sigma, const PancakeParams& pp,
                                        RngStream& rng);

}  // namespace pancake

#endif  // PANCAKE_MECHANISMS_H_
