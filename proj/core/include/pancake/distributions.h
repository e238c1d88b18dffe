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

#ifndef PANCAKE_DISTRIBUTIONS_H_
#define PANCAKE_DISTRIBUTIONS_H_

#include <cstdint>

#include <Eigen/Dense>

#include "pancake/rng.h"

namespace pancake {

// Backdoor key and shape of the homogeneous CLWE ("Gaussian pancake")
// distribution H_{w,beta,gamma}: a unit direction w plus width beta and
// spacing gamma. Along w the density is a comb of Gaussian slabs spaced
// gamma / (beta^2 + gamma^2) apart.
class PancakeParams {
 public:
  // Validates: w finite with unit norm (1e-12 relative), beta > 0, gamma > 0.
  static PancakeParams Create(Eigen::VectorXd w, double beta, double gamma);
  // Same, normalizing `direction` first.
  static PancakeParams FromDirection(const Eigen::VectorXd& direction,
                                     double beta, double gamma);

  const Eigen::VectorXd& w() const { return w_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  int d() const { return static_cast<int>(w_.size()); }

  // beta^2 + gamma^2, the denominator that recurs in every formula.
  double norm_sq() const { return beta_ * beta_ + gamma_ * gamma_; }
  // Distance between adjacent slab centres along w, in hCLWE units.
  double spacing() const { return gamma_ / norm_sq(); }

  PancakeParams WithDirection(Eigen::VectorXd w) const;

 private:
  PancakeParams(Eigen::VectorXd w, double beta, double gamma)
      : w_(std::move(w)), beta_(beta), gamma_(gamma) {}

  Eigen::VectorXd w_;
  double beta_;
  double gamma_;
};

// Discrete Gaussian N_Z(location, scale_sq) with p.m.f. proportional to
// exp(-(z - location)^2 / (2 scale_sq)).
struct DiscreteGaussianParams {
  std::int64_t location = 0;
  double scale_sq = 1.0;
};

Eigen::VectorXd SampleStdGaussianVec(int d, RngStream& rng);

// Exact rejection sampler from a discrete Laplace proposal (Canonne, Kamath,
// Steinke 2020). Never rounds a continuous draw.
std::int64_t SampleDiscreteGaussian(const DiscreteGaussianParams& params,
                                    RngStream& rng);

// Mixture weight exp(-pi z^2 / (beta^2 + gamma^2)) of slab z.
double HclweComponentWeight(std::int64_t z, double beta, double gamma);

// Draws from H_{w,beta,gamma} through its Gaussian-mixture form: a discrete
// Gaussian slab index, then a Gaussian centred on that slab with covariance
// (1/2pi)(I - gamma^2/(beta^2+gamma^2) w w^T).
Eigen::VectorXd SampleHclwe(const PancakeParams& params, RngStream& rng);

// Normalized density of the one-dimensional pancake distribution H_{1,beta,gamma}.
double HclwePdf1d(double y, double beta, double gamma);

// Largest |z| kept when summing the mixture series; the dropped tail carries
// less than 1e-15 of the total weight.
std::int64_t HclweSeriesCutoff(double beta, double gamma);

Eigen::VectorXd SampleUniformSphere(int d, RngStream& rng);

// Haar-uniform element of SO(d): QR of a Gaussian matrix, columns signed so
// that diag(R) > 0, then the first column negated if det(Q) = -1.
Eigen::MatrixXd SampleRotation(int d, RngStream& rng);

// Density of one coordinate of a uniform point on S^{d-1}:
// Gamma(d/2) / (sqrt(pi) Gamma((d-1)/2)) (1 - t^2)^((d-3)/2).
double SphereCoordDensity(double t, int d);

}  // namespace pancake

#endif  // PANCAKE_DISTRIBUTIONS_H_
