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

#include "mblshadow/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mbls {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? s.size() - pos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

double to_double(std::string_view s) {
  s = trim(s);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(x)) {
    throw Error(ErrorCode::kConfig, fmt::format("'{}' is not a finite real number", s));
  }
  return x;
}

template <typename T>
T to_integer(std::string_view s) {
  s = trim(s);
  T x{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::kConfig, fmt::format("'{}' is not an integer", s));
  }
  return x;
}

bool to_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw Error(ErrorCode::kConfig, fmt::format("'{}' is not a boolean", s));
}

std::vector<int> to_int_list(std::string_view s) {
  std::vector<int> out;
  for (std::string_view item : split(s, ',')) {
    const auto dash = item.find('-');
    if (dash != std::string_view::npos && dash > 0) {
      const int lo = to_integer<int>(item.substr(0, dash));
      const int hi = to_integer<int>(item.substr(dash + 1));
      if (hi < lo) throw Error(ErrorCode::kConfig, fmt::format("empty range '{}'", item));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(to_integer<int>(item));
    }
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs, auto format) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format(xs[i]);
  }
  return out;
}

struct ParseState {
  RunConfig config;
  std::optional<double> t_max;
  std::optional<double> t_step;
  bool times_given = false;
};

using Setter = std::function<void(ParseState&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"command",
       [](ParseState& s, std::string_view v) {
         const auto c = parse_command(v);
         if (!c) throw Error(ErrorCode::kConfig, fmt::format("unknown command '{}'", v));
         s.config.command = *c;
       }},
      {"model",
       [](ParseState& s, std::string_view v) {
         if (v == "xxz") s.config.model = ModelKind::kXxz;
         else if (v == "dqim") s.config.model = ModelKind::kDqim;
         else throw Error(ErrorCode::kConfig, "expected xxz or dqim");
       }},
      {"n", [](ParseState& s, std::string_view v) { s.config.n = to_integer<int>(v); }},
      {"j", [](ParseState& s, std::string_view v) { s.config.j = to_double(v); }},
      {"delta", [](ParseState& s, std::string_view v) { s.config.delta = to_double(v); }},
      {"w", [](ParseState& s, std::string_view v) { s.config.w = to_double(v); }},
      {"disorder_seed",
       [](ParseState& s, std::string_view v) {
         s.config.disorder_seed = to_integer<std::uint64_t>(v);
       }},
      {"delta_j", [](ParseState& s, std::string_view v) { s.config.delta_j = to_double(v); }},
      {"dqim_fields",
       [](ParseState& s, std::string_view v) { s.config.dqim_fields = parse_double_list(v); }},
      {"chi_max",
       [](ParseState& s, std::string_view v) { s.config.policy.chi_max = to_integer<int>(v); }},
      {"cutoff", [](ParseState& s, std::string_view v) { s.config.policy.cutoff = to_double(v); }},
      {"tau", [](ParseState& s, std::string_view v) { s.config.tau = to_double(v); }},
      {"times",
       [](ParseState& s, std::string_view v) {
         s.config.times = parse_double_list(v);
         s.times_given = true;
       }},
      {"t_max", [](ParseState& s, std::string_view v) { s.t_max = to_double(v); }},
      {"t_step", [](ParseState& s, std::string_view v) { s.t_step = to_double(v); }},
      {"k_max", [](ParseState& s, std::string_view v) { s.config.k_max = to_integer<int>(v); }},
      {"placement",
       [](ParseState& s, std::string_view v) {
         if (v == "all") s.config.placement = RegionPlacement::kAllStarts;
         else if (v == "centered") s.config.placement = RegionPlacement::kCentered;
         else throw Error(ErrorCode::kConfig, "expected all or centered");
       }},
      {"fit_k_min",
       [](ParseState& s, std::string_view v) { s.config.fit_k_min = to_integer<int>(v); }},
      {"fit_k_max",
       [](ParseState& s, std::string_view v) { s.config.fit_k_max = to_integer<int>(v); }},
      {"xi", [](ParseState& s, std::string_view v) { s.config.xi = to_double(v); }},
      {"j0", [](ParseState& s, std::string_view v) { s.config.j0 = to_double(v); }},
      {"pheno_times",
       [](ParseState& s, std::string_view v) { s.config.pheno_times = parse_double_list(v); }},
      {"pheno_k", [](ParseState& s, std::string_view v) { s.config.pheno_k = to_int_list(v); }},
      {"mc_draws",
       [](ParseState& s, std::string_view v) { s.config.mc_draws = to_integer<int>(v); }},
      {"log_base",
       [](ParseState& s, std::string_view v) {
         if (v == "e" || v == "natural") s.config.log_base = pheno::LogBase::kNatural;
         else if (v == "10") s.config.log_base = pheno::LogBase::kTen;
         else throw Error(ErrorCode::kConfig, "expected natural or 10");
       }},
      {"pheno_force",
       [](ParseState& s, std::string_view v) { s.config.pheno_force = to_bool(v); }},
      {"samples",
       [](ParseState& s, std::string_view v) { s.config.samples = to_integer<int>(v); }},
      {"state",
       [](ParseState& s, std::string_view v) {
         if (v == "zero") s.config.state = InitialState::kZero;
         else if (v == "ghz") s.config.state = InitialState::kGhz;
         else if (v == "zxz") s.config.state = InitialState::kZxz;
         else throw Error(ErrorCode::kConfig, "expected zero, ghz or zxz");
       }},
      {"evolution_time",
       [](ParseState& s, std::string_view v) { s.config.evolution_time = to_double(v); }},
      {"observables",
       [](ParseState& s, std::string_view v) { s.config.observables_text = std::string(v); }},
      {"lambda_source",
       [](ParseState& s, std::string_view v) {
         if (v == "tebd") s.config.lambda_source = LambdaSource::kTebd;
         else if (v == "oracle") s.config.lambda_source = LambdaSource::kOracle;
         else throw Error(ErrorCode::kConfig, "expected tebd or oracle");
       }},
      {"snapshots_file",
       [](ParseState& s, std::string_view v) { s.config.snapshots_file = std::string(v); }},
      {"input_csv", [](ParseState& s, std::string_view v) { s.config.input_csv = std::string(v); }},
      {"seed",
       [](ParseState& s, std::string_view v) { s.config.seed = to_integer<std::uint64_t>(v); }},
      {"out_dir", [](ParseState& s, std::string_view v) { s.config.out_dir = std::string(v); }},
      {"threads", [](ParseState& s, std::string_view v) { s.config.threads = to_integer<int>(v); }},
      {"criteria", [](ParseState& s, std::string_view v) { s.config.criteria = to_int_list(v); }},
  };
  return table;
}

bool on_grid(double t, double tau) {
  const double ratio = t / tau;
  return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio);
}

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::kShadowNorm: return "shadow-norm";
    case Command::kFit: return "fit";
    case Command::kPheno: return "pheno";
    case Command::kSample: return "sample";
    case Command::kEstimate: return "estimate";
    case Command::kOracle: return "oracle";
    case Command::kVerify: return "verify";
  }
  return "?";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::kShadowNorm, Command::kFit, Command::kPheno, Command::kSample,
                    Command::kEstimate, Command::kOracle, Command::kVerify}) {
    if (command_name(c) == name) return c;
  }
  return std::nullopt;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(ErrorCode::kConfig,
            [&] {
              std::string msg = "invalid configuration:";
              for (const ConfigIssue& i : issues) {
                msg += "\n  ";
                if (i.line > 0) msg += fmt::format("line {}: ", i.line);
                if (!i.key.empty()) msg += i.key + ": ";
                msg += i.message;
              }
              return msg;
            }()),
      issues_(std::move(issues)) {}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (std::string_view item : split(text, ',')) out.push_back(to_double(item));
  return out;
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

XxzParams RunConfig::xxz() const { return {n, j, delta, w, effective_disorder_seed()}; }

DqimParams RunConfig::dqim() const {
  DqimParams p{n, j, delta_j, dqim_fields, effective_disorder_seed()};
  if (p.fields.empty()) p.fields.assign(static_cast<std::size_t>(n), 0.0);
  return p;
}

BondSchedule RunConfig::schedule() const {
  if (model == ModelKind::kDqim) return build_dqim_bonds(dqim());
  const XxzParams p = xxz();
  return build_xxz_bonds(p, sample_disorder(p));
}

std::vector<PauliString> RunConfig::observables() const {
  return parse_observables(observables_text, n);
}

void RunConfig::validate() const {
  std::vector<ConfigIssue> issues;
  auto check = [&](bool ok, const char* key, std::string message) {
    if (!ok) issues.push_back({0, key, std::move(message)});
  };
  check(n >= 2, "n", "must be >= 2");
  check(w >= 0.0, "w", "disorder width must be >= 0");
  check(delta_j >= 0.0, "delta_j", "must be >= 0");
  check(dqim_fields.empty() || static_cast<int>(dqim_fields.size()) == n, "dqim_fields",
        "needs one field per site");
  check(policy.chi_max >= 1, "chi_max", "must be >= 1");
  check(policy.cutoff >= 0.0 && policy.cutoff < 1.0, "cutoff", "must lie in [0, 1)");
  check(tau > 0.0, "tau", "must be > 0");
  check(!times.empty(), "times", "needs at least one checkpoint");
  for (double t : times) {
    check(t >= 0.0, "times", fmt::format("checkpoint {} is negative", t));
    if (tau > 0.0) check(on_grid(t, tau), "times", fmt::format("{} is not a multiple of tau", t));
  }
  check(k_max >= 0 && k_max <= n, "k_max", "must lie in [0, n]");
  const int fk = effective_fit_k_max();
  check(fit_k_min >= 0 && fk - fit_k_min >= 2, "fit_k_min",
        "fit range needs at least three region lengths");
  check(fk <= k_max || command == Command::kFit, "fit_k_max", "must not exceed k_max");
  check(xi > 0.0, "xi", "must be > 0");
  check(j0 > 0.0, "j0", "must be > 0");
  for (double t : pheno_times) check(t >= 0.0, "pheno_times", "times must be >= 0");
  for (int k : pheno_k) check(k >= 0 && k <= n, "pheno_k", "region lengths must lie in [0, n]");
  check(mc_draws >= 2, "mc_draws", "must be >= 2");
  check(samples >= 2, "samples", "must be >= 2");
  check(state != InitialState::kZxz || n >= 3, "state", "zxz needs n >= 3");
  check(evolution_time >= 0.0, "evolution_time", "must be >= 0");
  if (tau > 0.0) {
    check(on_grid(evolution_time, tau), "evolution_time", "must be a multiple of tau");
  }
  try {
    observables();
  } catch (const Error& e) {
    issues.push_back({0, "observables", e.what()});
  }
  check(threads >= 1, "threads", "must be >= 1");
  for (int c : criteria) check(c >= 1 && c <= 9, "criteria", fmt::format("no criterion {}", c));
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

RunConfig parse_config(std::string_view text) {
  ParseState state;
  std::vector<ConfigIssue> issues;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({line_no, "", fmt::format("expected 'key = value', got '{}'", line)});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
      issues.push_back({line_no, key, fmt::format("duplicate key (first set on line {})", it->second)});
      continue;
    }
    const auto setter = setters().find(key);
    if (setter == setters().end()) {
      issues.push_back({line_no, key, "unknown key"});
      continue;
    }
    try {
      setter->second(state, value);
    } catch (const Error& e) {
      issues.push_back({line_no, key, e.what()});
    }
  }

  if (state.t_max || state.t_step) {
    if (state.times_given) {
      issues.push_back({seen.count("t_max") ? seen["t_max"] : seen["t_step"], "t_max",
                        "give either times or t_max/t_step, not both"});
    } else if (!state.t_max || !state.t_step) {
      issues.push_back({0, "t_max", "t_max and t_step must be given together"});
    } else if (*state.t_step <= 0.0 || *state.t_max < 0.0) {
      issues.push_back({seen["t_step"], "t_step", "needs t_step > 0 and t_max >= 0"});
    } else {
      state.config.times.clear();
      const long count = std::lround(std::floor(*state.t_max / *state.t_step + 1e-9));
      for (long i = 0; i <= count; ++i) state.config.times.push_back(static_cast<double>(i) * *state.t_step);
    }
  }

  try {
    state.config.validate();
  } catch (const ConfigError& e) {
    for (ConfigIssue issue : e.issues()) {
      const bool reported = std::any_of(issues.begin(), issues.end(),
                                        [&](const ConfigIssue& i) { return i.key == issue.key; });
      if (reported) continue;
      if (const auto it = seen.find(issue.key); it != seen.end()) issue.line = it->second;
      issues.push_back(std::move(issue));
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return state.config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, fmt::format("cannot open config file {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<std::pair<std::string, std::string>> canonical_entries(const RunConfig& c) {
  auto placement = c.placement == RegionPlacement::kCentered ? "centered" : "all";
  auto state = c.state == InitialState::kGhz ? "ghz" : c.state == InitialState::kZxz ? "zxz" : "zero";
  std::vector<std::pair<std::string, std::string>> out = {
      {"command", std::string(command_name(c.command))},
      {"model", c.model == ModelKind::kDqim ? "dqim" : "xxz"},
      {"n", std::to_string(c.n)},
      {"j", format_double(c.j)},
      {"delta", format_double(c.delta)},
      {"w", format_double(c.w)},
      {"disorder_seed", std::to_string(c.effective_disorder_seed())},
      {"delta_j", format_double(c.delta_j)},
      {"dqim_fields", join(c.dqim_fields, format_double)},
      {"chi_max", std::to_string(c.policy.chi_max)},
      {"cutoff", format_double(c.policy.cutoff)},
      {"tau", format_double(c.tau)},
      {"times", join(c.times, format_double)},
      {"k_max", std::to_string(c.k_max)},
      {"placement", placement},
      {"fit_k_min", std::to_string(c.fit_k_min)},
      {"fit_k_max", std::to_string(c.fit_k_max)},
      {"xi", format_double(c.xi)},
      {"j0", format_double(c.j0)},
      {"pheno_times", join(c.pheno_times, format_double)},
      {"pheno_k", join(c.pheno_k, [](int k) { return std::to_string(k); })},
      {"mc_draws", std::to_string(c.mc_draws)},
      {"log_base", c.log_base == pheno::LogBase::kTen ? "10" : "natural"},
      {"pheno_force", c.pheno_force ? "true" : "false"},
      {"samples", std::to_string(c.samples)},
      {"state", state},
      {"evolution_time", format_double(c.evolution_time)},
      {"observables", c.observables_text},
      {"lambda_source", c.lambda_source == LambdaSource::kOracle ? "oracle" : "tebd"},
      {"snapshots_file", c.snapshots_file},
      {"input_csv", c.input_csv},
      {"seed", std::to_string(c.seed)},
      {"out_dir", c.out_dir},
      {"threads", std::to_string(c.threads)},
      {"criteria", join(c.criteria, [](int k) { return std::to_string(k); })},
  };
  return out;
}

std::string to_config_text(const RunConfig& config) {
  std::string out;
  for (const auto& [k, v] : canonical_entries(config)) out += k + " = " + v + "\n";
  return out;
}

std::vector<PauliString> parse_observables(std::string_view text, int n) {
  std::vector<PauliString> out;
  for (std::string_view item : split(text, ';')) {
    if (item.empty()) continue;
    constexpr std::string_view kCentered = "centered_z:";
    if (item.substr(0, kCentered.size()) == kCentered) {
      for (int k : to_int_list(item.substr(kCentered.size()))) {
        require(k >= 1 && k <= n, ErrorCode::kInvalidArgument,
                fmt::format("centered Z string length {} outside [1, {}]", k, n));
        out.push_back(PauliString::z_string(centered_start(n, k), k));
      }
      continue;
    }
    PauliString p = PauliString::parse(item);
    for (int site : p.sites()) {
      require(site >= 0 && site < n, ErrorCode::kInvalidArgument,
              fmt::format("observable '{}' acts outside the chain", item));
    }
    out.push_back(std::move(p));
  }
  require(!out.empty(), ErrorCode::kInvalidArgument, "observable list is empty");
  return out;
}

}  // namespace mbls
