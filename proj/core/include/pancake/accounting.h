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

#ifndef PANCAKE_ACCOUNTING_H_
#define PANCAKE_ACCOUNTING_H_

#include <cstdint>
#include <string_view>

#include "pancake/distributions.h"
#include "pancake/mechanisms.h"
#include "pancake/normal.h"
#include "pancake/rng.h"

namespace pancake {

enum class PrivacyKind {
  kGmExact,
  // GPM is *not* (epsilon', delta)-DP for any epsilon' below this epsilon.
  kGpmLower,
  // GPM is (epsilon', delta)-DP for every epsilon' at or above this epsilon.
  kGpmUpper,
};

std::string_view PrivacyKindName(PrivacyKind kind);

struct PrivacyPoint {
  double epsilon = 0.0;
  double delta = 0.0;
  PrivacyKind kind = PrivacyKind::kGmExact;
};

// Offset between two neighbouring answers measured along w in units of the
// output-space slab spacing sqrt(2 pi) sigma gamma / (beta^2 + gamma^2),
// split as T + t with T integral and t in [-0.5, 0.5).
struct PeakOffset {
  std::int64_t whole = 0;
  double frac = 0.0;
};

// epsilon = D^2 / (2 sigma^2) - (D / sigma) PhiInv(delta), exact for the
// Gaussian mechanism.
PrivacyPoint GmEpsilon(double delta_sensitivity, double sigma, double delta);

// Inverts GmEpsilon in sigma by bisection over [D 1e-6, D 1e12], on the
// branch where epsilon decreases in sigma. Throws Error(kCalibration) when the
// target has no root in the bracket.
double GmCalibrateSigma(double delta_sensitivity, double eps_target,
                        double delta_target);

PeakOffset PeakOffsetDecompose(const QueryResult& q0, const QueryResult& q1,
                               const PancakeParams& pp, double sigma);

// Splits an offset s (already in spacing units) into T + t, t in [-0.5, 0.5).
PeakOffset SplitOffset(double s);

// Argument x = (gamma |t| / beta) sqrt(pi / (2 (beta^2 + gamma^2))) of the
// slab-capture probability 1 - 2 Phi(-x).
double SlabCaptureArgument(double beta, double gamma, double t);

struct SlabBounds {
  // Lower bound on P[Y in A(t)] for Y ~ H_{1,beta,gamma}.
  double p_in_lower = 0.0;
  // Upper bound on P[Y' in A(t)] for the shifted copy Y'.
  double p_shifted_upper = 0.0;
};

SlabBounds SlabCaptureBounds(double beta, double gamma, double t);

// True iff y lies in the open interval of half-width gamma |t| / (2 b2)
// around its nearest slab centre gamma z / b2, b2 = beta^2 + gamma^2.
bool InSlabSet(double y, double beta, double gamma, double t);

// Lower bound on GPM's epsilon at offset t: log((1 - delta) / (2 Phi(-x)) - 1).
// Requires 0 < delta < 0.5. Throws Error(kVacuousBound) when the log argument
// is not positive (for instance t = 0). Evaluated in the log domain so that
// x in the hundreds does not overflow.
PrivacyPoint GpmEpsilonLower(double beta, double gamma, double t, double delta);

// Upper bound from treating GPM as a Gaussian mechanism whose sensitivity is
// inflated by sqrt(beta^2 + gamma^2) / beta.
PrivacyPoint GpmEpsilonUpper(double beta, double gamma,
                             double delta_sensitivity, double sigma,
                             double delta);

struct OffsetFrequencyResult {
  double frequency = 0.0;
  std::int64_t trials = 0;
  // Set when gamma is not much larger than sqrt(d) sigma / Delta (factor 10),
  // outside the regime where t is asymptotically uniform.
  bool precondition_warning = false;
};

// Monte-Carlo estimate of P[|t| >= 0.25] over w uniform on S^{d-1} for a
// neighbour gap of norm Delta along the first axis.
OffsetFrequencyResult OffsetFrequencyMonteCarlo(int d, double delta_sensitivity,
                                                double sigma, double beta,
                                                double gamma,
                                                std::int64_t trials,
                                                RngStream& rng);

}  // namespace pancake

#endif  // PANCAKE_ACCOUNTING_H_
