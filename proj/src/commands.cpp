// Copyright 2026 The mblshadow Authors
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

#include "mblshadow/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <limits>

#include "mblshadow/error.hpp"
#include "mblshadow/oracle.hpp"
#include "mblshadow/pheno.hpp"
#include "mblshadow/pipeline.hpp"
#include "mblshadow/shadow_norm.hpp"

namespace mbls {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

/// Header keys that must agree between a snapshot file and the estimating run.
constexpr const char* kDynamicsKeys[] = {"model",   "n",       "j",          "delta",
                                         "w",       "delta_j", "dqim_fields", "chi_max",
                                         "cutoff",  "tau",     "evolution_time", "disorder_seed"};

MatrixXc dense_hamiltonian_of(const RunConfig& c) {
  oracle::check_size(c.n);
  if (c.model == ModelKind::kDqim) {
    const DqimParams p = c.dqim();
    return oracle::dense_dqim(c.n, sample_dqim_couplings(p), p.fields);
  }
  const XxzParams p = c.xxz();
  return oracle::dense_xxz(p, sample_disorder(p));
}

class Run {
 public:
  Run(const RunConfig& config, const LogSink& log, DispatchResult& result)
      : config_(config), log_(log), result_(result) {}

  void execute() {
    switch (config_.command) {
      case Command::kShadowNorm: shadow_norm(); break;
      case Command::kFit: fit(); break;
      case Command::kPheno: pheno(); break;
      case Command::kSample: sample(); break;
      case Command::kEstimate: estimate(); break;
      case Command::kOracle: golden(); break;
      case Command::kVerify: verify(); break;
    }
  }

 private:
  std::filesystem::path output(std::string_view name) const {
    const std::filesystem::path dir(config_.out_dir);
    std::filesystem::create_directories(dir);
    return dir / name;
  }

  std::ofstream open(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
    result_.artifacts.push_back(path.string());
    return out;
  }

  std::ifstream read(const std::filesystem::path& path) const {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::kIo, fmt::format("cannot read {}", path.string()));
    return in;
  }

  void say(const std::string& line) const {
    if (log_) log_(line);
  }

  void warn(const std::string& line) {
    result_.warnings.push_back(line);
    say("warning: " + line);
  }

  void shadow_norm() {
    ShadowNormOptions opt;
    opt.policy = config_.policy;
    opt.tau = config_.tau;
    opt.checkpoints = config_.times;
    opt.k_max = config_.k_max;
    opt.placement = config_.placement;
    const ShadowNormTable table = run_shadow_norm(config_.schedule(), config_.xxz(), opt);
    for (const std::string& w : table.warnings) warn(w);
    {
      std::ofstream out = open(output(artifacts::kShadowNorm));
      io::write_shadow_norm_csv(out, config_, table);
    }
    if (config_.effective_fit_k_max() - config_.fit_k_min >= 2) {
      std::ofstream out = open(output(artifacts::kFit));
      io::write_fit_json(out, config_,
                         fit_table(table, config_.fit_k_min, config_.effective_fit_k_max()));
    }
    say(fmt::format("{} entries, max bond {}", table.entries.size(), table.max_bond_dim));
  }

  void fit() {
    require(!config_.input_csv.empty(), ErrorCode::kConfig, "fit needs input_csv");
    std::ifstream in = read(config_.input_csv);
    const ShadowNormTable table = io::read_shadow_norm_csv(in);
    const auto fits = fit_table(table, config_.fit_k_min, config_.effective_fit_k_max());
    std::ofstream out = open(output(artifacts::kFit));
    io::write_fit_json(out, config_, fits);
    for (const io::FitRecord& f : fits) {
      say(fmt::format("t={} alpha={:.6f} +- {:.2e}", f.t, f.fit.alpha, f.fit.stderr_alpha));
    }
  }

  void pheno() {
    std::vector<io::PhenoRow> rows;
    for (double t : config_.pheno_times) {
      const pheno::PhenoParams params{config_.n, config_.xi, config_.j0, t, config_.seed};
      for (int k : config_.pheno_k) {
        io::PhenoRow row;
        row.k = k;
        row.xi = config_.xi;
        row.j0t = config_.j0 * t;
        try {
          row.lambda_s1 = pheno::lambda_statement1(k, config_.xi, config_.j0, t,
                                                   config_.log_base, config_.pheno_force);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kDomain) throw;
          row.lambda_s1 = kNan;
        }
        if (k == 2) {
          row.lambda_avg = pheno::lambda_pair_avg(params);
          const pheno::MonteCarloValue mc = pheno::lambda_pair_mc(params, config_.mc_draws);
          row.lambda_mc = mc.mean;
          row.mc_stderr = mc.stderr;
        } else {
          row.lambda_avg = row.lambda_mc = row.mc_stderr = kNan;
        }
        rows.push_back(row);
      }
    }
    std::ofstream out = open(output(artifacts::kPheno));
    io::write_pheno_csv(out, config_, rows);
  }

  std::filesystem::path snapshots_path() const {
    return config_.snapshots_file.empty() ? std::filesystem::path(config_.out_dir) / artifacts::kSnapshots
                                          : std::filesystem::path(config_.snapshots_file);
  }

  void sample() {
    const MblDynamics dyn(config_.schedule(), config_.tau, config_.evolution_time, config_.policy);
    const SnapshotSet set = generate_snapshots(prepare_state(config_.state, config_.n), dyn,
                                               config_.samples, config_.seed, config_.threads);
    for (const std::string& w : set.warnings) warn(w);
    const std::filesystem::path path = snapshots_path();
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out = open(path);
    io::write_snapshots(out, config_, set.records);
    say(fmt::format("{} snapshots", set.records.size()));
  }

  void estimate() {
    std::ifstream in = read(snapshots_path());
    const io::SnapshotFile file = io::read_snapshots(in);
    std::map<std::string, std::string> expected;
    for (const auto& [k, v] : canonical_entries(config_)) expected[k] = v;
    std::vector<ConfigIssue> issues;
    for (const char* key : kDynamicsKeys) {
      const auto it = file.header.find(key);
      const std::string found = it == file.header.end() ? "<missing>" : it->second;
      if (found != expected[key]) {
        issues.push_back({0, key,
                          fmt::format("snapshot file has {} but the config has {}", found,
                                      expected[key])});
      }
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
    require(file.records.size() >= 2, ErrorCode::kInvalidArgument,
            "estimates need at least two snapshots");

    const std::vector<PauliString> observables = config_.observables();
    const std::vector<double> lambdas = observable_lambdas(config_, observables);
    const MblDynamics dyn(config_.schedule(), config_.tau, config_.evolution_time, config_.policy);
    const auto reports =
        estimate_observables(file.records, observables, lambdas, dyn, config_.threads);
    std::ofstream out = open(output(artifacts::kEstimates));
    io::write_estimates_csv(out, config_, reports);
    for (const EstimateReport& r : reports) {
      say(fmt::format("{}: {:.6f} +- {:.6f}", r.observable, r.mean, r.stderr));
    }
  }

  void golden() {
    const oracle::DenseEvolver evolver(dense_hamiltonian_of(config_));
    std::vector<io::GoldenRecord> records;
    for (double t : config_.times) {
      for (int k = 1; k <= config_.k_max; ++k) {
        io::GoldenRecord rec{config_.n, config_.w, config_.delta, config_.effective_disorder_seed(),
                             t, k, 0.0, {}};
        std::vector<int> starts;
        if (config_.placement == RegionPlacement::kCentered) {
          starts.push_back(centered_start(config_.n, k));
        } else {
          for (int s = 0; s + k <= config_.n; ++s) starts.push_back(s);
        }
        for (int s : starts) {
          std::vector<int> sites;
          for (int i = s; i < s + k; ++i) sites.push_back(i);
          rec.per_start.push_back(oracle::lambda_exact(evolver, t, sites));
        }
        double sum = 0.0;
        for (double x : rec.per_start) sum += x;
        rec.lambda = sum / static_cast<double>(rec.per_start.size());
        records.push_back(std::move(rec));
      }
    }
    std::ofstream out = open(output(artifacts::kGolden));
    io::write_golden_json(out, config_, records);
  }

  void verify() {
    acceptance::SuiteOptions opt;
    opt.threads = config_.threads;
    opt.log = log_;
    acceptance::Suite suite(opt);
    std::ofstream out = open(output(artifacts::kVerify));
    bool all = true;
    for (int id : config_.criteria) {
      const acceptance::CriterionResult r = suite.run(id);
      out << acceptance::format_result(r) << "\n";
      out.flush();
      all = all && r.passed;
      result_.criteria.push_back(r);
    }
    if (!all) {
      result_.exit_code = kExitRuntime;
      result_.error = "acceptance criteria failed";
    }
  }

  const RunConfig& config_;
  const LogSink& log_;
  DispatchResult& result_;
};

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitValidation;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    if (err->code() == ErrorCode::kConfig || err->code() == ErrorCode::kInvalidArgument) {
      return kExitValidation;
    }
  }
  return kExitRuntime;
}

std::vector<double> observable_lambdas(const RunConfig& config,
                                       const std::vector<PauliString>& observables) {
  std::vector<double> out;
  out.reserve(observables.size());
  if (config.lambda_source == LambdaSource::kOracle) {
    const oracle::DenseEvolver evolver(dense_hamiltonian_of(config));
    for (const PauliString& op : observables) {
      const std::vector<int> sites = op.sites();
      out.push_back(oracle::lambda_exact(evolver, config.evolution_time, sites));
    }
    return out;
  }
  DoubledEvolution evo(config.schedule(), config.tau, config.policy);
  evo.advance(steps_for_time(config.evolution_time, config.tau));
  for (const PauliString& op : observables) {
    const std::vector<int> sites = op.sites();
    out.push_back(evo.support_overlap(sites));
  }
  return out;
}

std::vector<io::FitRecord> fit_table(const ShadowNormTable& table, int k_min, int k_max) {
  const std::vector<AveragedLambda> avg = average_over_starts(table);
  std::vector<io::FitRecord> out;
  std::size_t i = 0;
  while (i < avg.size()) {
    const double t = avg[i].t;
    std::vector<NormPoint> points;
    for (; i < avg.size() && avg[i].t == t; ++i) points.push_back({avg[i].k, avg[i].shadow_norm()});
    out.push_back({t, fit_alpha(points, k_min, k_max)});
  }
  return out;
}

DispatchResult dispatch(const RunConfig& config, const LogSink& log) {
  DispatchResult result;
  try {
    config.validate();
    Run(config, log, result).execute();
  } catch (const std::exception& e) {
    result.exit_code = exit_code_for(e);
    result.error = e.what();
  }
  return result;
}

}  // namespace mbls
