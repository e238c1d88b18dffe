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

#include "pancake/distributions.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pancake/error.h"

namespace pancake {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void RequirePositiveDim(int d, const char* where) {
  if (d < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(where) + ": dimension must be >= 1");
  }
}

// Discrete Laplace with p.m.f. proportional to exp(-|x| / scale).
std::int64_t SampleDiscreteLaplace(std::int64_t scale, RngStream& rng) {
  const double inv_e = std::exp(-1.0);
  while (true) {
    const auto u = static_cast<std::int64_t>(
        rng.UniformInt(static_cast<std::uint64_t>(scale)));
    if (!rng.Bernoulli(std::exp(-static_cast<double>(u) / scale))) continue;
    std::int64_t v = 0;
    while (rng.Bernoulli(inv_e)) ++v;
    const std::int64_t x = u + scale * v;
    const bool negative = rng.Bernoulli(0.5);
    if (negative && x == 0) continue;
    return negative ? -x : x;
  }
}

}  // namespace

PancakeParams PancakeParams::Create(Eigen::VectorXd w, double beta,
                                    double gamma) {
  if (w.size() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "PancakeParams: empty direction");
  }
  if (!w.allFinite() || !std::isfinite(beta) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidArgument,
                "PancakeParams: non-finite component");
  }
  if (!(beta > 0.0) || !(gamma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "PancakeParams: beta and gamma must be positive");
  }
  if (std::abs(w.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::kInvalidArgument,
                "PancakeParams: w must be a unit vector");
  }
  return PancakeParams(std::move(w), beta, gamma);
}

PancakeParams PancakeParams::FromDirection(const Eigen::VectorXd& direction,
                                           double beta, double gamma) {
  const double norm = direction.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kInvalidArgument,
                "PancakeParams: direction must be finite and nonzero");
  }
  return Create(direction / norm, beta, gamma);
}

PancakeParams PancakeParams::WithDirection(Eigen::VectorXd w) const {
  return Create(std::move(w), beta_, gamma_);
}

Eigen::VectorXd SampleStdGaussianVec(int d, RngStream& rng) {
  RequirePositiveDim(d, "SampleStdGaussianVec");
  Eigen::VectorXd out(d);
  for (int i = 0; i < d; ++i) out[i] = rng.Normal();
  return out;
}

std::int64_t SampleDiscreteGaussian(const DiscreteGaussianParams& params,
                                    RngStream& rng) {
  const double sigma_sq = params.scale_sq;
  if (!std::isfinite(sigma_sq) || !(sigma_sq > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "SampleDiscreteGaussian: scale_sq must be finite and positive");
  }
  const double sigma = std::sqrt(sigma_sq);
  const auto scale = static_cast<std::int64_t>(std::floor(sigma)) + 1;
  const double centre = sigma_sq / static_cast<double>(scale);
  while (true) {
    const std::int64_t y = SampleDiscreteLaplace(scale, rng);
    const double gap = std::abs(static_cast<double>(y)) - centre;
    if (rng.Bernoulli(std::exp(-gap * gap / (2.0 * sigma_sq)))) {
      return params.location + y;
    }
  }
}

double HclweComponentWeight(std::int64_t z, double beta, double gamma) {
  const double zd = static_cast<double>(z);
  return std::exp(-std::numbers::pi * zd * zd / (beta * beta + gamma * gamma));
}

Eigen::VectorXd SampleHclwe(const PancakeParams& params, RngStream& rng) {
  const int d = params.d();
  const double b2 = params.norm_sq();
  const std::int64_t z = SampleDiscreteGaussian({0, b2 / kTwoPi}, rng);

  Eigen::VectorXd g = SampleStdGaussianVec(d, rng);
  const Eigen::VectorXd& w = params.w();
  // Shrink the w-component of g so its variance drops from 1 to beta^2 / b2.
  const double shrink = 1.0 - params.beta() / std::sqrt(b2);
  const double along = w.dot(g);
  g.noalias() -= (shrink * along) * w;
  g *= 1.0 / std::sqrt(kTwoPi);
  g.noalias() += (params.gamma() * static_cast<double>(z) / b2) * w;
  return g;
}

std::int64_t HclweSeriesCutoff(double beta, double gamma) {
  // exp(-pi z^2 / b2) < 1e-17 is well inside the 1e-15 relative budget, since
  // the total weight is about sqrt(b2) >= 1 and the tail decays geometrically.
  const double b2 = beta * beta + gamma * gamma;
  return static_cast<std::int64_t>(
             std::ceil(std::sqrt(b2 * 17.0 * std::numbers::ln10 /
                                 std::numbers::pi))) +
         1;
}

double HclwePdf1d(double y, double beta, double gamma) {
  const double b2 = beta * beta + gamma * gamma;
  const double spacing = gamma / b2;
  const double var = beta * beta / (kTwoPi * b2);
  const double norm_const = 1.0 / std::sqrt(kTwoPi * var);
  const std::int64_t cutoff = HclweSeriesCutoff(beta, gamma);

  double total_weight = 0.0;
  double density = 0.0;
  for (std::int64_t z = -cutoff; z <= cutoff; ++z) {
    const double a = HclweComponentWeight(z, beta, gamma);
    total_weight += a;
    const double diff = y - spacing * static_cast<double>(z);
    density += a * std::exp(-0.5 * diff * diff / var);
  }
  return norm_const * density / total_weight;
}

Eigen::VectorXd SampleUniformSphere(int d, RngStream& rng) {
  RequirePositiveDim(d, "SampleUniformSphere");
  while (true) {
    Eigen::VectorXd g = SampleStdGaussianVec(d, rng);
    const double norm = g.norm();
    if (norm > 0.0) return g / norm;
  }
}

Eigen::MatrixXd SampleRotation(int d, RngStream& rng) {
  RequirePositiveDim(d, "SampleRotation");
  Eigen::MatrixXd gaussian(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) gaussian(i, j) = rng.Normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& packed = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    if (packed(j, j) < 0.0) q.col(j) *= -1.0;
  }
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

double SphereCoordDensity(double t, int d) {
  if (d < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "SphereCoordDensity: requires d >= 2");
  }
  if (!(std::abs(t) <= 1.0)) {
    throw Error(ErrorCode::kDomain, "SphereCoordDensity: |t| must be <= 1");
  }
  const double dd = static_cast<double>(d);
  const double log_norm = std::lgamma(0.5 * dd) -
                          0.5 * std::log(std::numbers::pi) -
                          std::lgamma(0.5 * (dd - 1.0));
  const double one_minus = 1.0 - t * t;
  const double exponent = 0.5 * (dd - 3.0);
  if (one_minus == 0.0) {
    if (exponent > 0.0) return 0.0;
    if (exponent == 0.0) return std::exp(log_norm);
    return std::numeric_limits<double>::infinity();
  }
  return std::exp(log_norm + exponent * std::log(one_minus));
}

}  // namespace pancake
