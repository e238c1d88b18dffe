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

#include "pancake/accounting.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pancake/error.h"

namespace pancake {
namespace {

void RequirePositive(double value, const char* what) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must be finite and positive");
  }
}

void RequireOpenUnit(double delta, const char* where) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kDomain,
                std::string(where) + ": delta must lie in (0, 1)");
  }
}

double GmEpsilonValue(double sens, double sigma, double phi_inv_delta) {
  const double ratio = sens / sigma;
  return 0.5 * ratio * ratio - ratio * phi_inv_delta;
}

}  // namespace

std::string_view PrivacyKindName(PrivacyKind kind) {
  switch (kind) {
    case PrivacyKind::kGmExact:
      return "gm_exact";
    case PrivacyKind::kGpmLower:
      return "gpm_lower";
    case PrivacyKind::kGpmUpper:
      return "gpm_upper";
  }
  return "unknown";
}

PrivacyPoint GmEpsilon(double delta_sensitivity, double sigma, double delta) {
  RequirePositive(delta_sensitivity, "GmEpsilon: delta_sensitivity");
  RequirePositive(sigma, "GmEpsilon: sigma");
  RequireOpenUnit(delta, "GmEpsilon");
  return {GmEpsilonValue(delta_sensitivity, sigma, StdNormalInvCdf(delta)),
          delta, PrivacyKind::kGmExact};
}

double GmCalibrateSigma(double delta_sensitivity, double eps_target,
                        double delta_target) {
  RequirePositive(delta_sensitivity, "GmCalibrateSigma: delta_sensitivity");
  RequirePositive(eps_target, "GmCalibrateSigma: eps_target");
  RequireOpenUnit(delta_target, "GmCalibrateSigma");

  const double c = StdNormalInvCdf(delta_target);
  double lo = delta_sensitivity * 1e-6;
  double hi = delta_sensitivity * 1e12;
  // epsilon(sigma) is decreasing only while D / sigma > c.
  if (c > 0.0) hi = std::min(hi, delta_sensitivity / c);

  auto excess = [&](double sigma) {
    return GmEpsilonValue(delta_sensitivity, sigma, c) - eps_target;
  };
  if (!(excess(lo) >= 0.0 && excess(hi) <= 0.0)) {
    throw Error(ErrorCode::kCalibration,
                "GmCalibrateSigma: no sigma in [1e-6, 1e12] * sensitivity "
                "reaches the target epsilon");
  }
  for (int iter = 0; iter < 400 && hi - lo > 1e-16 * hi; ++iter) {
    const double mid = std::sqrt(lo * hi);
    const double mid_safe = (mid > lo && mid < hi) ? mid : 0.5 * (lo + hi);
    if (excess(mid_safe) > 0.0) {
      lo = mid_safe;
    } else {
      hi = mid_safe;
    }
  }
  return std::abs(excess(lo)) < std::abs(excess(hi)) ? lo : hi;
}

PeakOffset SplitOffset(double s) {
  // s - round(s) is exact (Sterbenz for |s| >= 1, trivially below), so the
  // half-open adjustment never misplaces values next to +-0.5.
  double whole = std::round(s);
  double frac = s - whole;
  if (frac >= 0.5) {
    whole += 1.0;
    frac -= 1.0;
  }
  return {static_cast<std::int64_t>(whole), frac};
}

PeakOffset PeakOffsetDecompose(const QueryResult& q0, const QueryResult& q1,
                               const PancakeParams& pp, double sigma) {
  if (q0.size() != q1.size() || q0.size() != pp.d()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "PeakOffsetDecompose: dimensions disagree");
  }
  RequirePositive(sigma, "PeakOffsetDecompose: sigma");
  const double unit = std::sqrt(2.0 * std::numbers::pi) * sigma * pp.spacing();
  return SplitOffset(pp.w().dot(q1 - q0) / unit);
}

double SlabCaptureArgument(double beta, double gamma, double t) {
  RequirePositive(beta, "beta");
  RequirePositive(gamma, "gamma");
  const double b2 = beta * beta + gamma * gamma;
  return (gamma * std::abs(t) / beta) *
         std::sqrt(std::numbers::pi / (2.0 * b2));
}

SlabBounds SlabCaptureBounds(double beta, double gamma, double t) {
  const double tail = 2.0 * StdNormalCdf(-SlabCaptureArgument(beta, gamma, t));
  return {1.0 - tail, tail};
}

bool InSlabSet(double y, double beta, double gamma, double t) {
  const double b2 = beta * beta + gamma * gamma;
  const double z = std::nearbyint(y * b2 / gamma);
  const double centre = gamma * z / b2;
  const double half_width = gamma * std::abs(t) / (2.0 * b2);
  return std::abs(y - centre) < half_width;
}

PrivacyPoint GpmEpsilonLower(double beta, double gamma, double t,
                             double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorCode::kDomain,
                "GpmEpsilonLower: delta must lie in (0, 0.5)");
  }
  const double x = SlabCaptureArgument(beta, gamma, t);
  // log((1 - delta) / (2 Phi(-x)) - 1) = log(1 - delta - 2 Phi(-x)) - log(2 Phi(-x))
  const double log_two_tail = std::numbers::ln2 + LogStdNormalCdf(-x);
  const double numerator = 1.0 - delta - std::exp(log_two_tail);
  if (!(numerator > 0.0)) {
    throw Error(ErrorCode::kVacuousBound,
                "GpmEpsilonLower: bound is vacuous at this offset");
  }
  const double epsilon = std::log(numerator) - log_two_tail;
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kVacuousBound,
                "GpmEpsilonLower: bound is vacuous at this offset");
  }
  return {epsilon, delta, PrivacyKind::kGpmLower};
}

PrivacyPoint GpmEpsilonUpper(double beta, double gamma,
                             double delta_sensitivity, double sigma,
                             double delta) {
  RequirePositive(beta, "GpmEpsilonUpper: beta");
  RequirePositive(gamma, "GpmEpsilonUpper: gamma");
  const double inflation = std::sqrt(beta * beta + gamma * gamma) / beta;
  PrivacyPoint point = GmEpsilon(inflation * delta_sensitivity, sigma, delta);
  point.kind = PrivacyKind::kGpmUpper;
  return point;
}

OffsetFrequencyResult OffsetFrequencyMonteCarlo(int d, double delta_sensitivity,
                                                double sigma, double beta,
                                                double gamma,
                                                std::int64_t trials,
                                                RngStream& rng) {
  if (trials <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "OffsetFrequencyMonteCarlo: trials must be positive");
  }
  if (d < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "OffsetFrequencyMonteCarlo: d must be >= 1");
  }
  RequirePositive(delta_sensitivity, "delta_sensitivity");
  RequirePositive(sigma, "sigma");
  RequirePositive(beta, "beta");
  RequirePositive(gamma, "gamma");

  OffsetFrequencyResult result;
  result.trials = trials;
  result.precondition_warning =
      !(gamma >= 10.0 * std::sqrt(static_cast<double>(d)) * sigma /
                     delta_sensitivity);

  const double b2 = beta * beta + gamma * gamma;
  const double unit = std::sqrt(2.0 * std::numbers::pi) * sigma * gamma / b2;
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const Eigen::VectorXd w = SampleUniformSphere(d, rng);
    // q(D') - q(D) = Delta e_0, so w^T (q(D') - q(D)) = Delta w_0.
    const PeakOffset offset = SplitOffset(delta_sensitivity * w[0] / unit);
    if (std::abs(offset.frac) >= 0.25) ++hits;
  }
  result.frequency = static_cast<double>(hits) / static_cast<double>(trials);
  return result;
}

}  // namespace pancake
