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

#include "mblshadow/io.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <istream>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "mblshadow/rng.hpp"

namespace mbls::io {

namespace {

using nlohmann::json;

constexpr const char* kFormatVersion = "1";

double parse_real(std::string_view s) {
  if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  require(ec == std::errc() && ptr == s.data() + s.size() && !s.empty(), ErrorCode::kIo,
          fmt::format("malformed number '{}'", s));
  return x;
}

template <typename T>
T parse_int(std::string_view s) {
  T x{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  require(ec == std::errc() && ptr == s.data() + s.size() && !s.empty(), ErrorCode::kIo,
          fmt::format("malformed integer '{}'", s));
  return x;
}

std::string fmt_real(double x) { return std::isnan(x) ? "nan" : format_double(x); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

/// Skips the comment block and checks the column row; returns the data rows.
std::vector<std::vector<std::string>> read_csv_rows(std::istream& in,
                                                    const std::string& expected_columns) {
  std::string line;
  bool columns_seen = false;
  std::vector<std::vector<std::string>> rows;
  const std::size_t width = split_csv(expected_columns).size();
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!columns_seen) {
      require(line == expected_columns, ErrorCode::kIo,
              fmt::format("unexpected CSV columns '{}'", line));
      columns_seen = true;
      continue;
    }
    auto fields = split_csv(line);
    require(fields.size() == width, ErrorCode::kIo, fmt::format("malformed CSV row '{}'", line));
    rows.push_back(std::move(fields));
  }
  require(columns_seen, ErrorCode::kIo, "CSV column row missing");
  return rows;
}

json header_json(const RunConfig& config) {
  json h = json::object();
  for (const auto& [k, v] : canonical_entries(config)) h[k] = v;
  h["rng"] = std::string(kRngAlgorithm);
  h["format_version"] = kFormatVersion;
  return h;
}

std::string join_ints(const std::vector<int>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(xs[i]);
  }
  return out;
}

std::vector<int> split_ints(const std::string& s, char sep) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(parse_int<int>(item));
  return out;
}

std::map<std::string, std::string> header_map(const json& h) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : h.items()) out[k] = v.is_string() ? v.get<std::string>() : v.dump();
  return out;
}

}  // namespace

void write_header(std::ostream& out, const RunConfig& config) {
  out << "# mblshadow format " << kFormatVersion << "\n";
  out << "# rng = " << kRngAlgorithm << "\n";
  for (const auto& [k, v] : canonical_entries(config)) out << "# " << k << " = " << v << "\n";
}

std::map<std::string, std::string> read_header(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  while (in.peek() == '#' && std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos || eq < 2) continue;
    out[line.substr(2, eq - 2)] = line.substr(eq + 3);
  }
  return out;
}

void write_shadow_norm_csv(std::ostream& out, const RunConfig& config,
                           const ShadowNormTable& table) {
  write_header(out, config);
  for (const std::string& w : table.warnings) out << "# warning: " << w << "\n";
  out << "k,start,tJ,lambda,shadow_norm,W,Delta,seed,chi,tau\n";
  for (const ShadowNormEntry& e : table.entries) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", e.k, e.start, fmt_real(e.t),
                       fmt_real(e.lambda), fmt_real(e.shadow_norm()), fmt_real(table.params.w),
                       fmt_real(table.params.delta), table.params.seed, table.policy.chi_max,
                       fmt_real(table.tau));
  }
}

ShadowNormTable read_shadow_norm_csv(std::istream& in) {
  const auto header = read_header(in);
  ShadowNormTable table;
  if (auto it = header.find("n"); it != header.end()) table.params.n = parse_int<int>(it->second);
  if (auto it = header.find("j"); it != header.end()) table.params.j = parse_real(it->second);
  if (auto it = header.find("cutoff"); it != header.end()) table.policy.cutoff = parse_real(it->second);
  for (const auto& r : read_csv_rows(in, "k,start,tJ,lambda,shadow_norm,W,Delta,seed,chi,tau")) {
    ShadowNormEntry e{parse_int<int>(r[0]), parse_int<int>(r[1]), parse_real(r[2]),
                      parse_real(r[3])};
    table.entries.push_back(e);
    table.params.w = parse_real(r[5]);
    table.params.delta = parse_real(r[6]);
    table.params.seed = parse_int<std::uint64_t>(r[7]);
    table.policy.chi_max = parse_int<int>(r[8]);
    table.tau = parse_real(r[9]);
  }
  for (const ShadowNormEntry& e : table.entries) {
    if (std::find(table.checkpoints.begin(), table.checkpoints.end(), e.t) == table.checkpoints.end()) {
      table.checkpoints.push_back(e.t);
    }
  }
  return table;
}

void write_fit_json(std::ostream& out, const RunConfig& config,
                    const std::vector<FitRecord>& fits) {
  json doc;
  doc["header"] = header_json(config);
  doc["fits"] = json::array();
  for (const FitRecord& f : fits) {
    doc["fits"].push_back({{"tJ", f.t},
                           {"c0", f.fit.c0},
                           {"alpha", f.fit.alpha},
                           {"stderr_alpha", f.fit.stderr_alpha},
                           {"k_min", f.fit.k_min},
                           {"k_max", f.fit.k_max}});
  }
  out << doc.dump(2) << "\n";
}

std::vector<FitRecord> read_fit_json(std::istream& in) {
  const json doc = json::parse(in);
  std::vector<FitRecord> out;
  for (const json& f : doc.at("fits")) {
    FitRecord r;
    r.t = f.at("tJ").get<double>();
    r.fit.c0 = f.at("c0").get<double>();
    r.fit.alpha = f.at("alpha").get<double>();
    r.fit.stderr_alpha = f.at("stderr_alpha").get<double>();
    r.fit.k_min = f.at("k_min").get<int>();
    r.fit.k_max = f.at("k_max").get<int>();
    out.push_back(r);
  }
  return out;
}

void write_pheno_csv(std::ostream& out, const RunConfig& config,
                     const std::vector<PhenoRow>& rows) {
  write_header(out, config);
  out << "k,xi,J0t,lambda_s1,lambda_avg,lambda_mc,mc_stderr\n";
  for (const PhenoRow& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{}\n", r.k, fmt_real(r.xi), fmt_real(r.j0t),
                       fmt_real(r.lambda_s1), fmt_real(r.lambda_avg), fmt_real(r.lambda_mc),
                       fmt_real(r.mc_stderr));
  }
}

std::vector<PhenoRow> read_pheno_csv(std::istream& in) {
  read_header(in);
  std::vector<PhenoRow> out;
  for (const auto& r : read_csv_rows(in, "k,xi,J0t,lambda_s1,lambda_avg,lambda_mc,mc_stderr")) {
    out.push_back({parse_int<int>(r[0]), parse_real(r[1]), parse_real(r[2]), parse_real(r[3]),
                   parse_real(r[4]), parse_real(r[5]), parse_real(r[6])});
  }
  return out;
}

void write_snapshots(std::ostream& out, const RunConfig& config,
                     const std::vector<SnapshotRecord>& records) {
  out << json{{"header", header_json(config)}}.dump() << "\n";
  for (const SnapshotRecord& r : records) {
    std::string b;
    for (int bit : r.b) b += static_cast<char>('0' + bit);
    out << json{{"v", join_ints(r.v, ",")}, {"u", join_ints(r.u, ",")}, {"b", b},
                {"stream", r.stream}}
               .dump()
        << "\n";
  }
}

SnapshotFile read_snapshots(std::istream& in) {
  SnapshotFile file;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    if (first) {
      require(j.contains("header"), ErrorCode::kIo, "snapshot file lacks a header line");
      file.header = header_map(j.at("header"));
      first = false;
      continue;
    }
    SnapshotRecord r;
    r.v = split_ints(j.at("v").get<std::string>(), ',');
    r.u = split_ints(j.at("u").get<std::string>(), ',');
    for (char c : j.at("b").get<std::string>()) {
      require(c == '0' || c == '1', ErrorCode::kIo, "bitstring must contain only 0/1");
      r.b.push_back(c - '0');
    }
    r.stream = j.at("stream").get<std::uint64_t>();
    require(r.v.size() == r.b.size() && r.u.size() == r.b.size(), ErrorCode::kIo,
            "snapshot layers and bitstring differ in length");
    file.records.push_back(std::move(r));
  }
  require(!first, ErrorCode::kIo, "snapshot file is empty");
  return file;
}

void write_estimates_csv(std::ostream& out, const RunConfig& config,
                         const std::vector<EstimateReport>& reports) {
  write_header(out, config);
  out << "observable,k,mean,variance,stderr,M,lambda\n";
  for (const EstimateReport& r : reports) {
    out << fmt::format("{},{},{},{},{},{},{}\n", r.observable, r.k, fmt_real(r.mean),
                       fmt_real(r.variance), fmt_real(r.stderr), r.samples, fmt_real(r.lambda));
  }
}

std::vector<EstimateReport> read_estimates_csv(std::istream& in) {
  read_header(in);
  std::vector<EstimateReport> out;
  for (const auto& r : read_csv_rows(in, "observable,k,mean,variance,stderr,M,lambda")) {
    EstimateReport e;
    e.observable = r[0];
    e.k = parse_int<int>(r[1]);
    e.mean = parse_real(r[2]);
    e.variance = parse_real(r[3]);
    e.stderr = parse_real(r[4]);
    e.samples = parse_int<int>(r[5]);
    e.lambda = parse_real(r[6]);
    out.push_back(std::move(e));
  }
  return out;
}

void write_golden_json(std::ostream& out, const RunConfig& config,
                       const std::vector<GoldenRecord>& records) {
  json doc;
  doc["header"] = header_json(config);
  doc["records"] = json::array();
  for (const GoldenRecord& r : records) {
    doc["records"].push_back({{"N", r.n},
                              {"W", r.w},
                              {"Delta", r.delta},
                              {"seed", r.seed},
                              {"tJ", r.t},
                              {"k", r.k},
                              {"lambda_exact", r.lambda},
                              {"per_start", r.per_start}});
  }
  out << doc.dump(2) << "\n";
}

std::vector<GoldenRecord> read_golden_json(std::istream& in) {
  const json doc = json::parse(in);
  std::vector<GoldenRecord> out;
  for (const json& r : doc.at("records")) {
    GoldenRecord g;
    g.n = r.at("N").get<int>();
    g.w = r.at("W").get<double>();
    g.delta = r.at("Delta").get<double>();
    g.seed = r.at("seed").get<std::uint64_t>();
    g.t = r.at("tJ").get<double>();
    g.k = r.at("k").get<int>();
    g.lambda = r.at("lambda_exact").get<double>();
    g.per_start = r.at("per_start").get<std::vector<double>>();
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace mbls::io
