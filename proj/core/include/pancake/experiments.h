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

#ifndef PANCAKE_EXPERIMENTS_H_
#define PANCAKE_EXPERIMENTS_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "pancake/accounting.h"
#include "pancake/attacks.h"
#include "pancake/distributions.h"
#include "pancake/mechanisms.h"
#include "pancake/rng.h"
#include "pancake/stats.h"

namespace pancake {

// Histogram over d classes of n records drawn uniformly; the neighbour drops
// one uniformly chosen record, so ||q0 - q1|| = 1 exactly.
struct HistQueryParams {
  int d = 2;
  std::int64_t n = 1000;
};

QueryPair GenHistQuery(const HistQueryParams& params, RngStream& rng);

QueryPairGenerator HistQueryGenerator(HistQueryParams params);

// Replays one fixed pair on every trial (externally supplied queries such as
// dumped gradients).
QueryPairGenerator FixedQueryGenerator(QueryPair pair);

// Two lines of whitespace-separated decimals with equal lengths. Throws
// Error(kIo) on malformed input.
QueryPair ReadQueryPair(std::istream& in);
QueryPair ReadQueryPairFile(const std::string& path);

// E||N(0, sigma^2 I_d)|| = sigma sqrt(2) Gamma((d+1)/2) / Gamma(d/2).
double ExpectedGmL2(int d, double sigma);

struct L2ErrorResult {
  double mean = 0.0;
  Interval ci_95;
  double sigma = 0.0;
  std::int64_t trials = 0;
};

// Mean ||M(0) - 0|| over `trials` releases of the zero query with sigma
// calibrated from (eps_star, delta_star) at sensitivity 1.
L2ErrorResult L2ErrorExperiment(int d, double eps_star, double delta_star,
                                MechanismKind mech,
                                const std::optional<PancakeParams>& pp,
                                std::int64_t trials, RngStream& rng);

struct BenchReport {
  std::string label;
  int d = 0;
  double median_ms = 0.0;
  double mean_ms = 0.0;
  int batch_size = 0;
};

struct BenchPair {
  BenchReport gm;
  BenchReport gpm;
  double ratio() const { return gpm.median_ms / gm.median_ms; }
};

// Times only the noise draws: each batch samples `batch_size` noise vectors.
BenchPair BenchSampling(int d, double sigma, const PancakeParams& pp,
                        int batches, int batch_size, RngStream& rng);

struct BoundsRow {
  double delta = 0.0;
  double eps_gm = 0.0;
  // NaN when the lower bound is vacuous at this delta.
  double eps_gpm_lower = 0.0;
  double eps_gpm_upper = 0.0;
  bool vacuous = false;
};

// GM epsilon against GPM's lower and upper bounds over a delta grid in
// (0, 0.5).
std::vector<BoundsRow> BoundsCurve(double beta, double gamma, double t,
                                   const std::vector<double>& delta_grid,
                                   double delta_sensitivity, double sigma);

struct DpHistAttackConfig {
  int d = 256;
  double beta = 1e-4;
  // Non-positive means the default 2 sqrt(d).
  double gamma = 0.0;
  double eps_star = 1.0;
  double delta_star = 1e-10;
  std::int64_t n_records = 1000;
  std::int64_t trials = 100;
  MechanismKind mech = MechanismKind::kGpm;

  double resolved_gamma() const;
};

// One DP-hist cell: calibrate sigma, then run RunAttackTrials on histogram
// neighbours with a fresh key per trial.
TrialReport DpHistAttack(const DpHistAttackConfig& params, RngStream& rng);

}  // namespace pancake

#endif  // PANCAKE_EXPERIMENTS_H_
