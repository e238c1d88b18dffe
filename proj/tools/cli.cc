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

#include "cli.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pancake/accounting.h"
#include "pancake/attacks.h"
#include "pancake/distributions.h"
#include "pancake/error.h"
#include "pancake/experiments.h"
#include "pancake/mechanisms.h"

namespace pancake::cli {
namespace {

constexpr int kSchemaVersion = 1;

const std::vector<std::string>& Subcommands() {
  static const std::vector<std::string> names{
      "calibrate", "sample", "attack",      "bounds",
      "l2",        "bench",  "covert-test", "distributed"};
  return names;
}

// Shortest text that reads back to the same double.
std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void Require(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) throw ConfigError("invalid value for " + field + ": " + rule);
}

bool Positive(double v) { return v > 0.0 && std::isfinite(v); }

void Validate(const RunConfig& c) {
  Require(c.d >= 1, "d", "must be >= 1");
  Require(Positive(c.eps_star), "eps_star", "must be positive and finite");
  Require(c.delta_star > 0.0 && c.delta_star < 1.0, "delta_star",
          "must lie in (0, 1)");
  Require(Positive(c.delta_sens), "delta_sens", "must be positive and finite");
  Require(Positive(c.beta), "beta", "must be positive and finite");
  if (c.gamma) Require(Positive(*c.gamma), "gamma", "must be positive and finite");
  if (c.sigma) Require(Positive(*c.sigma), "sigma", "must be positive and finite");
  Require(std::isfinite(c.t), "t", "must be finite");
  Require(!c.delta_grid.empty(), "delta_grid", "must not be empty");
  for (double v : c.delta_grid) {
    Require(v > 0.0 && v < 0.5, "delta_grid", "entries must lie in (0, 0.5)");
  }
  Require(c.trials >= 1, "trials", "must be >= 1");
  Require(ParseMechanismKind(c.mech).has_value(), "mech",
          "must be one of gm, gpm, gpm-rotated, relay-gpm");
  Require(c.mitigation == "none" || c.mitigation == "rotation" ||
              c.mitigation == "relay",
          "mitigation", "must be one of none, rotation, relay");
  Require(c.mitigation == "none" || c.mech == "gpm", "mitigation",
          "applies only with mech = gpm");
  Require(c.key_mode == "fresh" || c.key_mode == "fixed", "key_mode",
          "must be fresh or fixed");
  Require(c.n_records >= 1, "n_records", "must be >= 1");
  Require(c.n_samples >= 1, "n_samples", "must be >= 1");
  Require(c.n_directions >= 1, "n_directions", "must be >= 1");
  Require(c.batches >= 1, "batches", "must be >= 1");
  Require(c.batch_size >= 1, "batch_size", "must be >= 1");
  Require(c.n_servers >= 1, "n_servers", "must be >= 1");
  Require(c.n_backdoored >= 0, "n_backdoored", "must be >= 0");
  Require(c.n_colluding >= 0, "n_colluding", "must be >= 0");
  Require(c.n_backdoored + c.n_colluding <= c.n_servers, "n_colluding",
          "n_backdoored + n_colluding must not exceed n_servers");
  Require(c.threshold >= 1 && c.threshold <= c.n_servers, "threshold",
          "must lie in [1, n_servers]");
  if (c.subcommand == "attack" && c.d < 2 && c.query_file.empty()) {
    Require(false, "d", "histogram queries need d >= 2");
  }
  if (c.subcommand == "covert-test") {
    Require(c.d >= 2, "d", "covert-test needs d >= 2");
    Require(c.n_samples >= 100, "n_samples", "covert-test needs >= 100");
  }
}

MechanismKind EffectiveMechanism(const RunConfig& c) {
  if (c.mitigation == "rotation") return MechanismKind::kGpmRotated;
  if (c.mitigation == "relay") return MechanismKind::kRelayGpm;
  return *ParseMechanismKind(c.mech);
}

class CsvSink {
 public:
  CsvSink(const RunConfig& cfg, std::ostream& fallback) : fallback_(fallback) {
    std::string path = cfg.output;
    if (path.empty()) {
      if (const char* dir = std::getenv("PANCAKE_OUTPUT_DIR"); dir && *dir) {
        path = (std::filesystem::path(dir) / (cfg.subcommand + ".csv")).string();
      }
    }
    if (!path.empty()) {
      final_path_ = path;
      partial_path_ = path + ".partial";
      file_.open(partial_path_, std::ios::out | std::ios::trunc);
      if (!file_) {
        throw Error(ErrorCode::kIo, "cannot open output file " + path);
      }
    }
    stream() << "# pancake-csv schema_version=" << kSchemaVersion << "\n"
             << "# config=" << ConfigJson(cfg) << "\n"
             << "# seed=" << cfg.seed << "\n";
  }

  ~CsvSink() {
    if (!committed_ && !partial_path_.empty()) {
      file_.close();
      std::error_code ignored;
      std::filesystem::remove(partial_path_, ignored);
    }
  }

  std::ostream& stream() { return partial_path_.empty() ? fallback_ : file_; }

  void Row(const std::vector<std::string>& cells) {
    std::ostream& os = stream();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  }

  void Commit() {
    stream().flush();
    if (!stream()) throw Error(ErrorCode::kIo, "write failed");
    if (!partial_path_.empty()) {
      file_.close();
      std::error_code ec;
      std::filesystem::rename(partial_path_, final_path_, ec);
      if (ec) {
        throw Error(ErrorCode::kIo, "cannot move output into place at " +
                                        final_path_ + ": " + ec.message());
      }
    }
    committed_ = true;
  }

 private:
  std::ostream& fallback_;
  std::ofstream file_;
  std::string final_path_;
  std::string partial_path_;
  bool committed_ = false;
};

PancakeParams FreshKey(const RunConfig& c, int d, RngStream& rng) {
  return PancakeParams::Create(SampleUniformSphere(d, rng), c.beta,
                               c.resolved_gamma());
}

void RunCalibrate(const RunConfig& c, CsvSink& sink) {
  sink.Row({"delta_sens", "eps_star", "delta_star", "sigma"});
  const double sigma = GmCalibrateSigma(c.delta_sens, c.eps_star, c.delta_star);
  sink.Row({Num(c.delta_sens), Num(c.eps_star), Num(c.delta_star), Num(sigma)});
}

void RunSample(const RunConfig& c, CsvSink& sink) {
  RngStream rng(c.seed, 0);
  const MechanismConfig mc{c.d, c.resolved_sigma(), c.delta_sens};
  const PancakeParams pp = FreshKey(c, c.d, rng);
  const MechanismKind kind = EffectiveMechanism(c);
  const QueryResult zero = QueryResult::Zero(c.d);
  sink.Row({"sample", "coord", "value"});
  for (int s = 0; s < c.n_samples; ++s) {
    QueryResult y;
    switch (kind) {
      case MechanismKind::kGm: y = Gm(zero, mc, rng); break;
      case MechanismKind::kGpm: y = Gpm(zero, mc, pp, rng); break;
      case MechanismKind::kGpmRotated:
        y = RotatedNoiseMechanism(zero, mc.sigma, PancakeNoiseSource(pp), rng);
        break;
      case MechanismKind::kRelayGpm:
        y = CentralRelay(Gpm(zero, mc, pp, rng), mc.sigma, rng);
        break;
    }
    for (int j = 0; j < c.d; ++j) {
      sink.Row({std::to_string(s), std::to_string(j), Num(y[j])});
    }
  }
}

void RunAttack(const RunConfig& c, CsvSink& sink) {
  RngStream rng(c.seed, 0);
  int d = c.d;
  QueryPairGenerator gen;
  if (!c.query_file.empty()) {
    QueryPair pair = ReadQueryPairFile(c.query_file);
    d = static_cast<int>(pair.q0.size());
    gen = FixedQueryGenerator(std::move(pair));
  } else {
    gen = HistQueryGenerator({d, c.n_records});
  }
  const double gamma = c.resolved_gamma();
  const MechanismConfig mc{d, c.resolved_sigma(), c.delta_sens};
  Eigen::VectorXd axis = Eigen::VectorXd::Zero(d);
  axis[0] = 1.0;
  const PancakeParams pp =
      c.key_mode == "fixed" ? FreshKey(c, d, rng)
                            : PancakeParams::Create(axis, c.beta, gamma);
  const TrialReport r = RunAttackTrials(
      gen, EffectiveMechanism(c), mc, pp, c.trials, rng,
      c.key_mode == "fixed" ? KeyMode::kFixed : KeyMode::kFreshPerTrial);
  sink.Row({"d", "beta", "gamma", "eps_star", "delta_star", "trials",
            "successes", "rate", "ci_lo", "ci_hi", "theory_bound_mean"});
  sink.Row({std::to_string(d), Num(c.beta), Num(gamma), Num(c.eps_star),
            Num(c.delta_star), std::to_string(r.trials),
            std::to_string(r.successes), Num(r.success_rate),
            Num(r.wilson_ci_95.lo), Num(r.wilson_ci_95.hi),
            r.theoretical_lower_bound ? Num(*r.theoretical_lower_bound) : ""});
}

void RunBounds(const RunConfig& c, CsvSink& sink) {
  const double sigma = c.sigma.value_or(1.0);
  const auto rows = BoundsCurve(c.beta, c.resolved_gamma(), c.t, c.delta_grid,
                                c.delta_sens, sigma);
  sink.Row({"delta", "eps_gm", "eps_gpm_lower", "eps_gpm_upper",
            "vacuous_flag"});
  for (const BoundsRow& r : rows) {
    sink.Row({Num(r.delta), Num(r.eps_gm), Num(r.eps_gpm_lower),
              Num(r.eps_gpm_upper), r.vacuous ? "1" : "0"});
  }
}

void RunL2(const RunConfig& c, CsvSink& sink) {
  RngStream rng(c.seed, 0);
  const PancakeParams pp = FreshKey(c, c.d, rng);
  sink.Row({"mech", "d", "eps_star", "delta_star", "sigma", "trials",
            "mean_l2", "ci_lo", "ci_hi", "expect"});
  std::vector<MechanismKind> kinds{MechanismKind::kGm, MechanismKind::kGpm};
  if (c.mitigation != "none") kinds.push_back(EffectiveMechanism(c));
  std::uint64_t index = 0;
  for (MechanismKind kind : kinds) {
    RngStream cell = rng.Fork(index++);
    const L2ErrorResult r = L2ErrorExperiment(c.d, c.eps_star, c.delta_star,
                                              kind, pp, c.trials, cell);
    sink.Row({std::string(MechanismKindName(kind)), std::to_string(c.d),
              Num(c.eps_star), Num(c.delta_star), Num(r.sigma),
              std::to_string(r.trials), Num(r.mean), Num(r.ci_95.lo),
              Num(r.ci_95.hi), Num(ExpectedGmL2(c.d, r.sigma))});
  }
}

void RunBench(const RunConfig& c, CsvSink& sink) {
  RngStream rng(c.seed, 0);
  const PancakeParams pp = FreshKey(c, c.d, rng);
  const BenchPair b = BenchSampling(c.d, c.sigma.value_or(1.0), pp, c.batches,
                                    c.batch_size, rng);
  sink.Row({"label", "d", "batch_size", "median_ms", "mean_ms",
            "ratio_to_gm"});
  for (const BenchReport* r : {&b.gm, &b.gpm}) {
    sink.Row({r->label, std::to_string(r->d), std::to_string(r->batch_size),
              Num(r->median_ms), Num(r->mean_ms),
              Num(r->median_ms / b.gm.median_ms)});
  }
}

void RunCovertTest(const RunConfig& c, CsvSink& sink) {
  RngStream rng(c.seed, 0);
  const PancakeParams pp = FreshKey(c, c.d, rng);
  const BatchKind second =
      c.mech == "gm" ? BatchKind::kGm : BatchKind::kGpm;
  const CovertnessReport r = CovertnessTestBattery(
      c.n_samples, pp, c.sigma.value_or(1.0), c.n_directions, rng, second);
  sink.Row({"direction", "is_secret", "p_raw", "p_folded", "rejected"});
  for (std::size_t k = 0; k < r.direction_p_values.size(); ++k) {
    const bool rejected = r.direction_raw_p_values[k] < r.bonferroni_threshold ||
                          r.direction_p_values[k] < r.bonferroni_threshold;
    sink.Row({std::to_string(k + 1), "0", Num(r.direction_raw_p_values[k]),
              Num(r.direction_p_values[k]), rejected ? "1" : "0"});
  }
  const bool secret_rejected =
      r.secret_raw_p_value < r.bonferroni_threshold ||
      r.secret_p_value < r.bonferroni_threshold;
  sink.Row({"0", "1", Num(r.secret_raw_p_value), Num(r.secret_p_value),
            secret_rejected ? "1" : "0"});
  sink.stream() << "# verdict="
                << (r.indistinguishable ? "indistinguishable" : "distinguishable")
                << " rejections=" << r.rejections
                << " bonferroni_threshold=" << Num(r.bonferroni_threshold)
                << "\n";
}

void RunDistributed(const RunConfig& c, CsvSink& sink) {
  RngStream rng(c.seed, 0);
  const PancakeParams pp = FreshKey(c, c.d, rng);
  const DistributedConfig dc{c.n_servers, c.n_backdoored, c.n_colluding,
                             c.threshold};
  const std::vector<QueryResult> queries(c.n_servers, QueryResult::Zero(c.d));
  const double sigma = c.sigma.value_or(1.0);
  const DistributedRoundResult r = DistributedRound(dc, queries, sigma, pp, rng);
  const double d = static_cast<double>(c.d);
  sink.Row({"quantity", "value"});
  sink.Row({"aggregate_noise_var", Num(r.aggregate.squaredNorm() / d)});
  sink.Row({"colluder_view_present", r.colluder_view ? "1" : "0"});
  if (r.colluder_view) {
    QueryResult gaussian = r.colluder_view->residual;
    for (int i = 0; i < c.n_backdoored; ++i) gaussian -= r.noises[i];
    sink.Row({"residual_var", Num(r.colluder_view->residual.squaredNorm() / d)});
    sink.Row({"residual_gaussian_var", Num(gaussian.squaredNorm() / d)});
    sink.Row({"expected_gaussian_var",
              Num((c.n_servers - c.n_backdoored - c.n_colluding) * sigma * sigma)});
    sink.Row({"exposed_backdoored",
              std::to_string(r.colluder_view->exposed_backdoored.size())});
  }
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDimensionMismatch:
      return kExitConfig;
    case ErrorCode::kDomain:
    case ErrorCode::kVacuousBound:
    case ErrorCode::kCalibration:
      return kExitNumeric;
    case ErrorCode::kIo:
      return kExitIo;
  }
  return kExitNumeric;
}

}  // namespace

double RunConfig::resolved_gamma() const {
  return gamma.value_or(2.0 * std::sqrt(static_cast<double>(d)));
}

double RunConfig::resolved_sigma() const {
  return sigma ? *sigma : GmCalibrateSigma(delta_sens, eps_star, delta_star);
}

std::optional<RunConfig> ParseConfig(int argc, const char* const* argv,
                                     std::ostream& out) {
  RunConfig c;
  CLI::App app{"Gaussian and backdoored pancake mechanism lab", "pancake"};
  app.add_option("subcommand", c.subcommand, "What to run")
      ->required()
      ->check(CLI::IsMember(Subcommands()));
  // Every option also answers to its underscore spelling, which is the key
  // used in config files.
  auto opt = [&app](const std::string& name, auto& target,
                    const std::string& help) {
    std::string alt = name;
    std::replace(alt.begin(), alt.end(), '-', '_');
    std::string names = "--" + name;
    if (alt != name) names += ",--" + alt;
    return app.add_option(names, target, help);
  };
  opt("d", c.d, "Output dimension");
  opt("eps-star", c.eps_star, "Target epsilon for calibration");
  opt("delta-star", c.delta_star, "Target delta for calibration");
  opt("delta-sens", c.delta_sens, "L2 sensitivity of the query");
  opt("beta", c.beta, "Pancake width parameter");
  opt("gamma", c.gamma, "Pancake spacing parameter (default 2 sqrt(d))");
  opt("sigma", c.sigma, "Noise scale (default: calibrated)");
  opt("t", c.t, "Peak offset for bound tables");
  opt("delta-grid", c.delta_grid, "Delta values for bound tables")
      ->delimiter(',');
  opt("trials", c.trials, "Monte-Carlo trials");
  opt("seed", c.seed, "Root RNG seed");
  opt("output", c.output, "Output CSV path");
  opt("mech", c.mech, "gm, gpm, gpm-rotated or relay-gpm");
  opt("mitigation", c.mitigation, "none, rotation or relay");
  opt("key-mode", c.key_mode, "fresh (per trial) or fixed");
  opt("query-file", c.query_file, "Two-line query pair file");
  opt("n-records", c.n_records, "Records per histogram dataset");
  opt("n-samples", c.n_samples, "Samples to draw");
  opt("n-directions", c.n_directions, "Random projection directions");
  opt("batches", c.batches, "Benchmark batches");
  opt("batch-size", c.batch_size, "Noise vectors per benchmark batch");
  opt("n-servers", c.n_servers, "Servers in a distributed round");
  opt("n-backdoored", c.n_backdoored, "Backdoored servers");
  opt("n-colluding", c.n_colluding, "Colluding servers");
  opt("threshold", c.threshold, "Secure-aggregation reconstruction threshold");
  app.set_config("--config", "", "Flat key = value configuration file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  Validate(c);
  return c;
}

std::string ConfigJson(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["subcommand"] = c.subcommand;
  j["d"] = c.d;
  j["eps_star"] = c.eps_star;
  j["delta_star"] = c.delta_star;
  j["delta_sens"] = c.delta_sens;
  j["beta"] = c.beta;
  j["gamma"] = c.resolved_gamma();
  if (c.sigma) {
    j["sigma"] = *c.sigma;
  } else {
    j["sigma"] = nullptr;
  }
  j["t"] = c.t;
  j["delta_grid"] = c.delta_grid;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["mech"] = c.mech;
  j["mitigation"] = c.mitigation;
  j["key_mode"] = c.key_mode;
  j["query_file"] = c.query_file;
  j["n_records"] = c.n_records;
  j["n_samples"] = c.n_samples;
  j["n_directions"] = c.n_directions;
  j["batches"] = c.batches;
  j["batch_size"] = c.batch_size;
  j["n_servers"] = c.n_servers;
  j["n_backdoored"] = c.n_backdoored;
  j["n_colluding"] = c.n_colluding;
  j["threshold"] = c.threshold;
  return j.dump();
}

int Dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::function<void(const RunConfig&, CsvSink&)>>
      handlers{{"calibrate", RunCalibrate}, {"sample", RunSample},
               {"attack", RunAttack},       {"bounds", RunBounds},
               {"l2", RunL2},               {"bench", RunBench},
               {"covert-test", RunCovertTest},
               {"distributed", RunDistributed}};
  try {
    CsvSink sink(cfg, out);
    handlers.at(cfg.subcommand)(cfg, sink);
    sink.Commit();
    return kExitOk;
  } catch (const Error& e) {
    err << "pancake: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  }
}

int RunMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  std::optional<RunConfig> cfg;
  try {
    cfg = ParseConfig(argc, argv, out);
  } catch (const ConfigError& e) {
    err << "pancake: " << e.what() << "\n";
    return kExitConfig;
  }
  if (!cfg) return kExitOk;
  try {
    return Dispatch(*cfg, out, err);
  } catch (const std::exception& e) {
    err << "pancake: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace pancake::cli
