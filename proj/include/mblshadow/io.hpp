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

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mblshadow/config.hpp"
#include "mblshadow/pipeline.hpp"
#include "mblshadow/shadow_norm.hpp"

namespace mbls::io {

/// "# key = value" lines carrying the full configuration, seed and RNG name.
void write_header(std::ostream& out, const RunConfig& config);
/// Header entries of a CSV or NDJSON file; stops at the first non-comment line.
std::map<std::string, std::string> read_header(std::istream& in);

/// Columns k,start,tJ,lambda,shadow_norm,W,Delta,seed,chi,tau.
void write_shadow_norm_csv(std::ostream& out, const RunConfig& config,
                           const ShadowNormTable& table);
ShadowNormTable read_shadow_norm_csv(std::istream& in);

struct FitRecord {
  double t = 0.0;
  FitResult fit;
};

void write_fit_json(std::ostream& out, const RunConfig& config,
                    const std::vector<FitRecord>& fits);
std::vector<FitRecord> read_fit_json(std::istream& in);

struct PhenoRow {
  int k = 0;
  double xi = 0.0;
  double j0t = 0.0;
  /// NaN outside the long-time regime unless forced.
  double lambda_s1 = 0.0;
  /// Pair quantities; NaN for k != 2.
  double lambda_avg = 0.0;
  double lambda_mc = 0.0;
  double mc_stderr = 0.0;
};

/// Columns k,xi,J0t,lambda_s1,lambda_avg,lambda_mc,mc_stderr.
void write_pheno_csv(std::ostream& out, const RunConfig& config, const std::vector<PhenoRow>& rows);
std::vector<PhenoRow> read_pheno_csv(std::istream& in);

/// First line {"header": {...}}, then one record per line with v, u, b as
/// strings and the stream id.
void write_snapshots(std::ostream& out, const RunConfig& config,
                     const std::vector<SnapshotRecord>& records);
struct SnapshotFile {
  std::map<std::string, std::string> header;
  std::vector<SnapshotRecord> records;
};
SnapshotFile read_snapshots(std::istream& in);

/// Columns observable,k,mean,variance,stderr,M,lambda.
void write_estimates_csv(std::ostream& out, const RunConfig& config,
                         const std::vector<EstimateReport>& reports);
std::vector<EstimateReport> read_estimates_csv(std::istream& in);

struct GoldenRecord {
  int n = 0;
  double w = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double t = 0.0;
  int k = 0;
  /// Mean over all region starts.
  double lambda = 0.0;
  std::vector<double> per_start;
};

void write_golden_json(std::ostream& out, const RunConfig& config,
                       const std::vector<GoldenRecord>& records);
std::vector<GoldenRecord> read_golden_json(std::istream& in);

}  // namespace mbls::io
