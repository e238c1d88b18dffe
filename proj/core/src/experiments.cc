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

#include "pancake/experiments.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "pancake/error.h"

namespace pancake {
namespace {

std::vector<double> ParseDecimalLine(const std::string& line, int line_no) {
  std::vector<double> values;
  std::istringstream fields(line);
  std::string token;
  while (fields >> token) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(value)) {
      throw Error(ErrorCode::kIo, "query pair line " + std::to_string(line_no) +
                                      ": bad decimal '" + token + "'");
    }
    values.push_back(value);
  }
  return values;
}

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

QueryPair GenHistQuery(const HistQueryParams& params, RngStream& rng) {
  if (params.d < 2) {
    throw Error(ErrorCode::kInvalidArgument, "GenHistQuery: need d >= 2");
  }
  if (params.n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "GenHistQuery: need n >= 1");
  }
  std::vector<std::int64_t> counts(params.d, 0);
  std::vector<int> records(params.n);
  for (auto& r : records) {
    r = static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(params.d)));
    ++counts[r];
  }
  const int removed =
      records[rng.UniformInt(static_cast<std::uint64_t>(params.n))];

  QueryPair pair{QueryResult(params.d), QueryResult(params.d)};
  for (int i = 0; i < params.d; ++i) {
    pair.q0[i] = static_cast<double>(counts[i]);
    pair.q1[i] = static_cast<double>(counts[i] - (i == removed ? 1 : 0));
  }
  return pair;
}

QueryPairGenerator HistQueryGenerator(HistQueryParams params) {
  return [params](RngStream& rng) { return GenHistQuery(params, rng); };
}

QueryPairGenerator FixedQueryGenerator(QueryPair pair) {
  return [pair = std::move(pair)](RngStream&) { return pair; };
}

QueryPair ReadQueryPair(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(ParseDecimalLine(line, line_no));
  }
  if (rows.size() != 2) {
    throw Error(ErrorCode::kIo, "query pair input must contain exactly two "
                                "non-empty lines, found " +
                                    std::to_string(rows.size()));
  }
  if (rows[0].size() != rows[1].size() || rows[0].empty()) {
    throw Error(ErrorCode::kIo,
                "query pair lines must be non-empty and of equal length");
  }
  QueryPair pair{QueryResult(rows[0].size()), QueryResult(rows[1].size())};
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    pair.q0[static_cast<Eigen::Index>(i)] = rows[0][i];
    pair.q1[static_cast<Eigen::Index>(i)] = rows[1][i];
  }
  return pair;
}

QueryPair ReadQueryPairFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open query pair file " + path);
  return ReadQueryPair(in);
}

double ExpectedGmL2(int d, double sigma) {
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "ExpectedGmL2: d >= 1");
  const double dd = static_cast<double>(d);
  return sigma * std::numbers::sqrt2 *
         std::exp(std::lgamma(0.5 * (dd + 1.0)) - std::lgamma(0.5 * dd));
}

L2ErrorResult L2ErrorExperiment(int d, double eps_star, double delta_star,
                                MechanismKind mech,
                                const std::optional<PancakeParams>& pp,
                                std::int64_t trials, RngStream& rng) {
  if (trials < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "L2ErrorExperiment: trials must be >= 1");
  }
  if (mech != MechanismKind::kGm && !pp) {
    throw Error(ErrorCode::kInvalidArgument,
                "L2ErrorExperiment: pancake parameters required for GPM");
  }
  L2ErrorResult result;
  result.sigma = GmCalibrateSigma(1.0, eps_star, delta_star);
  result.trials = trials;
  const MechanismConfig cfg{d, result.sigma, 1.0};
  const QueryResult zero = QueryResult::Zero(d);

  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t k = 0; k < trials; ++k) {
    QueryResult y;
    switch (mech) {
      case MechanismKind::kGm:
        y = Gm(zero, cfg, rng);
        break;
      case MechanismKind::kGpm:
        y = Gpm(zero, cfg, *pp, rng);
        break;
      case MechanismKind::kGpmRotated:
        y = RotatedNoiseMechanism(zero, cfg.sigma, PancakeNoiseSource(*pp), rng);
        break;
      case MechanismKind::kRelayGpm:
        y = CentralRelay(Gpm(zero, cfg, *pp, rng), cfg.sigma, rng);
        break;
    }
    const double norm = y.norm();
    sum += norm;
    sum_sq += norm * norm;
  }
  const double n = static_cast<double>(trials);
  result.mean = sum / n;
  const double var =
      trials > 1 ? std::max(0.0, (sum_sq - n * result.mean * result.mean) / (n - 1))
                 : 0.0;
  const double half = 1.959963984540054 * std::sqrt(var / n);
  result.ci_95 = {result.mean - half, result.mean + half};
  return result;
}

BenchPair BenchSampling(int d, double sigma, const PancakeParams& pp,
                        int batches, int batch_size, RngStream& rng) {
  if (batch_size < 1 || batches < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "BenchSampling: batches and batch_size must be >= 1");
  }
  if (pp.d() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "BenchSampling: key dimension differs from d");
  }
  const double pancake_scale = std::sqrt(2.0 * std::numbers::pi) * sigma;
  using Clock = std::chrono::steady_clock;
  std::vector<double> gm_ms, gpm_ms;
  // Accumulating into a sink keeps the sampled vectors observable.
  double sink = 0.0;
  for (int b = 0; b < batches; ++b) {
    auto start = Clock::now();
    for (int i = 0; i < batch_size; ++i) {
      const Eigen::VectorXd noise = sigma * SampleStdGaussianVec(d, rng);
      sink += noise[0];
    }
    gm_ms.push_back(
        std::chrono::duration<double, std::milli>(Clock::now() - start).count());

    start = Clock::now();
    for (int i = 0; i < batch_size; ++i) {
      const Eigen::VectorXd noise = pancake_scale * SampleHclwe(pp, rng);
      sink += noise[0];
    }
    gpm_ms.push_back(
        std::chrono::duration<double, std::milli>(Clock::now() - start).count());
  }
  volatile double keep = sink;
  (void)keep;

  auto summarize = [&](std::string label, const std::vector<double>& ms) {
    BenchReport r;
    r.label = std::move(label);
    r.d = d;
    r.batch_size = batch_size;
    r.median_ms = Median(ms);
    double total = 0.0;
    for (double v : ms) total += v;
    r.mean_ms = total / static_cast<double>(ms.size());
    return r;
  };
  return {summarize("gm", gm_ms), summarize("gpm", gpm_ms)};
}

std::vector<BoundsRow> BoundsCurve(double beta, double gamma, double t,
                                   const std::vector<double>& delta_grid,
                                   double delta_sensitivity, double sigma) {
  if (delta_grid.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "BoundsCurve: empty delta grid");
  }
  std::vector<BoundsRow> rows;
  rows.reserve(delta_grid.size());
  for (double delta : delta_grid) {
    if (!(delta > 0.0 && delta < 0.5)) {
      throw Error(ErrorCode::kDomain,
                  "BoundsCurve: grid points must lie in (0, 0.5)");
    }
    BoundsRow row;
    row.delta = delta;
    row.eps_gm = GmEpsilon(delta_sensitivity, sigma, delta).epsilon;
    row.eps_gpm_upper =
        GpmEpsilonUpper(beta, gamma, delta_sensitivity, sigma, delta).epsilon;
    try {
      row.eps_gpm_lower = GpmEpsilonLower(beta, gamma, t, delta).epsilon;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kVacuousBound) throw;
      row.eps_gpm_lower = std::numeric_limits<double>::quiet_NaN();
      row.vacuous = true;
    }
    rows.push_back(row);
  }
  return rows;
}

double DpHistAttackConfig::resolved_gamma() const {
  return gamma > 0.0 ? gamma : 2.0 * std::sqrt(static_cast<double>(d));
}

TrialReport DpHistAttack(const DpHistAttackConfig& params, RngStream& rng) {
  const double sigma = GmCalibrateSigma(1.0, params.eps_star, params.delta_star);
  const MechanismConfig cfg{params.d, sigma, 1.0};
  Eigen::VectorXd placeholder = Eigen::VectorXd::Zero(params.d);
  placeholder[0] = 1.0;
  const PancakeParams pp =
      PancakeParams::Create(placeholder, params.beta, params.resolved_gamma());
  return RunAttackTrials(HistQueryGenerator({params.d, params.n_records}), params.mech,
                         cfg, pp, params.trials, rng, KeyMode::kFreshPerTrial);
}

}  // namespace pancake
