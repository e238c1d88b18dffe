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

#ifndef PANCAKE_ATTACKS_H_
#define PANCAKE_ATTACKS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "pancake/distributions.h"
#include "pancake/mechanisms.h"
#include "pancake/rng.h"
#include "pancake/stats.h"

namespace pancake {

// Answers on a pair of neighbouring databases (D0, D1).
struct QueryPair {
  QueryResult q0;
  QueryResult q1;
};

using QueryPairGenerator = std::function<QueryPair(RngStream&)>;

struct AttackOutcome {
  int guessed_index = 0;
  int true_index = 0;
  // Distance of z_i to the nearest integer, in [0, 0.5].
  double z0_frac = 0.0;
  double z1_frac = 0.0;

  bool success() const { return guessed_index == true_index; }
};

// Key-holder's distinguisher. For each candidate i it measures the output's
// offset from q_i along w in slab-spacing units,
//   z_i = (beta^2 + gamma^2) (y - q_i)^T w / (sqrt(2 pi) sigma gamma),
// and picks the candidate whose z_i is closest to an integer (ties -> 0).
// Only `guessed_index` and the fractional distances are filled.
AttackOutcome BackdoorDistinguisher(const QueryResult& q0,
                                    const QueryResult& q1,
                                    const QueryResult& y,
                                    const PancakeParams& pp, double sigma);

// Guaranteed success probability max(0, 1 - 2 Phi(-x)) at offset t.
double AttackSuccessBound(double beta, double gamma, double t);

// Key-less reference attacker: nearest candidate in L2 (ties -> 0), the
// likelihood-ratio test under the Gaussian model.
int BaselineDistinguisher(const QueryResult& q0, const QueryResult& q1,
                          const QueryResult& y, double sigma);

enum class MechanismKind {
  kGm,
  kGpm,
  kGpmRotated,
  kRelayGpm,
};

std::string_view MechanismKindName(MechanismKind kind);
std::optional<MechanismKind> ParseMechanismKind(std::string_view name);

enum class KeyMode {
  // A new w ~ U(S^{d-1}) per trial; success rates average over the key.
  kFreshPerTrial,
  // The key in the supplied PancakeParams is used for every trial.
  kFixed,
};

struct TrialReport {
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double success_rate = 0.0;
  Interval wilson_ci_95;
  // Mean over trials of AttackSuccessBound at each trial's offset; only for
  // the unmitigated GPM.
  std::optional<double> theoretical_lower_bound;
  double elapsed_ms = 0.0;
};

// Monte-Carlo estimate of Pr[guess = i] with i a fair coin. Trial k draws
// everything from rng.Fork(k), so reports do not depend on execution order.
// Against kGm the attacker still runs the key-holder's test with the sampled
// key, which carries no signal.
TrialReport RunAttackTrials(const QueryPairGenerator& query_gen,
                            MechanismKind mech, const MechanismConfig& cfg,
                            const PancakeParams& pp, std::int64_t trials,
                            RngStream& rng,
                            KeyMode key_mode = KeyMode::kFreshPerTrial);

struct CovertnessReport {
  // Two-sample KS p-values of the slab-folded projections on random
  // directions, and on the secret direction.
  std::vector<double> direction_p_values;
  double secret_p_value = 1.0;
  // Same tests on the raw (unfolded) projections.
  std::vector<double> direction_raw_p_values;
  double secret_raw_p_value = 1.0;
  // alpha / (2 n_directions), covering both families.
  double bonferroni_threshold = 0.0;
  int rejections = 0;
  bool indistinguishable = true;
};

enum class BatchKind { kGm, kGpm };

// Empirical covertness check: draws `n_samples` noise vectors from GM and
// from `second` (GPM by default), projects both batches onto random unit
// directions (each with |<u, w>| < 0.5) and onto w itself, and compares the
// 1-D projections with two-sample KS tests. Each projection is tested raw and
// folded modulo the slab period sqrt(2 pi) sigma gamma / (beta^2 + gamma^2);
// the period is a public parameter, only w is secret. The verdict counts
// rejections on the random directions only, at alpha = 0.05 with Bonferroni
// correction.
CovertnessReport CovertnessTestBattery(int n_samples, const PancakeParams& pp,
                                       double sigma, int n_directions,
                                       RngStream& rng,
                                       BatchKind second = BatchKind::kGpm,
                                       double alpha = 0.05);

}  // namespace pancake

#endif  // PANCAKE_ATTACKS_H_
