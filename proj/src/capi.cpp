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

#include "mblshadow/mblshadow.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "mblshadow/acceptance.hpp"
#include "mblshadow/commands.hpp"
#include "mblshadow/config.hpp"
#include "mblshadow/error.hpp"
#include "mblshadow/pauli.hpp"
#include "mblshadow/pheno.hpp"
#include "mblshadow/shadow_norm.hpp"

struct mbls_config {
  mbls::RunConfig config;
};

struct mbls_result {
  mbls::DispatchResult result;
  std::vector<std::string> criterion_lines;
};

struct mbls_table {
  mbls::ShadowNormTable table;
};

namespace {

thread_local std::string g_last_error;

mbls_status status_of(mbls::ErrorCode code) {
  switch (code) {
    case mbls::ErrorCode::kInvalidArgument: return MBLS_ERR_INVALID_ARGUMENT;
    case mbls::ErrorCode::kDimensionMismatch: return MBLS_ERR_DIMENSION;
    case mbls::ErrorCode::kDomain: return MBLS_ERR_DOMAIN;
    case mbls::ErrorCode::kConfig: return MBLS_ERR_CONFIG;
    case mbls::ErrorCode::kIo: return MBLS_ERR_IO;
    case mbls::ErrorCode::kRuntime: return MBLS_ERR_RUNTIME;
  }
  return MBLS_ERR_RUNTIME;
}

template <typename F>
mbls_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return MBLS_OK;
  } catch (const mbls::ConfigError& e) {
    g_last_error = e.what();
    return MBLS_ERR_CONFIG;
  } catch (const mbls::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MBLS_ERR_RUNTIME;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MBLS_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return MBLS_ERR_RUNTIME;
  }
}

mbls_status null_pointer(const char* what) {
  g_last_error = std::string("null pointer: ") + what;
  return MBLS_ERR_NULL_POINTER;
}

}  // namespace

extern "C" {

const char* mbls_version(void) { return "0.1.0"; }

const char* mbls_last_error(void) { return g_last_error.c_str(); }

mbls_status mbls_config_default(mbls_config** out) {
  if (!out) return null_pointer("out");
  return guarded([&] { *out = new mbls_config{}; });
}

mbls_status mbls_config_parse(const char* text, mbls_config** out) {
  if (!text) return null_pointer("text");
  if (!out) return null_pointer("out");
  return guarded([&] { *out = new mbls_config{mbls::parse_config(text)}; });
}

mbls_status mbls_config_load(const char* path, mbls_config** out) {
  if (!path) return null_pointer("path");
  if (!out) return null_pointer("out");
  return guarded([&] { *out = new mbls_config{mbls::load_config(path)}; });
}

mbls_status mbls_config_set(mbls_config* config, const char* key, const char* value) {
  if (!config) return null_pointer("config");
  if (!key) return null_pointer("key");
  if (!value) return null_pointer("value");
  return guarded([&] {
    std::string text;
    bool replaced = false;
    for (const auto& [k, v] : mbls::canonical_entries(config->config)) {
      if (k == "disorder_seed" && !config->config.disorder_seed && k != key) continue;
      if (k == key) {
        text += k + " = " + value + "\n";
        replaced = true;
      } else {
        text += k + " = " + v + "\n";
      }
    }
    if (!replaced) text += std::string(key) + " = " + value + "\n";
    config->config = mbls::parse_config(text);
  });
}

mbls_status mbls_config_to_text(const mbls_config* config, char* buffer, size_t capacity,
                                size_t* needed) {
  if (!config) return null_pointer("config");
  std::string text;
  const mbls_status status = guarded([&] { text = mbls::to_config_text(config->config); });
  if (status != MBLS_OK) return status;
  if (needed) *needed = text.size() + 1;
  if (!buffer || capacity < text.size() + 1) {
    if (buffer && capacity > 0) buffer[0] = '\0';
    g_last_error = "buffer too small";
    return MBLS_ERR_BUFFER_TOO_SMALL;
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return MBLS_OK;
}

void mbls_config_free(mbls_config* config) { delete config; }

mbls_status mbls_run(const mbls_config* config, mbls_log_fn log, void* user, mbls_result** out) {
  if (!config) return null_pointer("config");
  if (!out) return null_pointer("out");
  return guarded([&] {
    auto result = std::make_unique<mbls_result>();
    mbls::LogSink sink;
    if (log) sink = [log, user](std::string_view line) { log(std::string(line).c_str(), user); };
    result->result = mbls::dispatch(config->config, sink);
    for (const auto& c : result->result.criteria) {
      result->criterion_lines.push_back(mbls::acceptance::format_result(c));
    }
    *out = result.release();
  });
}

int mbls_result_exit_code(const mbls_result* result) {
  return result ? result->result.exit_code : mbls::kExitRuntime;
}

const char* mbls_result_error(const mbls_result* result) {
  return result ? result->result.error.c_str() : "";
}

size_t mbls_result_artifact_count(const mbls_result* result) {
  return result ? result->result.artifacts.size() : 0;
}

const char* mbls_result_artifact(const mbls_result* result, size_t index) {
  if (!result || index >= result->result.artifacts.size()) return nullptr;
  return result->result.artifacts[index].c_str();
}

size_t mbls_result_warning_count(const mbls_result* result) {
  return result ? result->result.warnings.size() : 0;
}

const char* mbls_result_warning(const mbls_result* result, size_t index) {
  if (!result || index >= result->result.warnings.size()) return nullptr;
  return result->result.warnings[index].c_str();
}

size_t mbls_result_criterion_count(const mbls_result* result) {
  return result ? result->result.criteria.size() : 0;
}

mbls_status mbls_result_criterion(const mbls_result* result, size_t index, int* id, int* passed,
                                  double* seconds) {
  if (!result) return null_pointer("result");
  if (index >= result->result.criteria.size()) {
    g_last_error = "criterion index out of range";
    return MBLS_ERR_INVALID_ARGUMENT;
  }
  const auto& c = result->result.criteria[index];
  if (id) *id = c.id;
  if (passed) *passed = c.passed ? 1 : 0;
  if (seconds) *seconds = c.seconds;
  return MBLS_OK;
}

const char* mbls_result_criterion_line(const mbls_result* result, size_t index) {
  if (!result || index >= result->criterion_lines.size()) return nullptr;
  return result->criterion_lines[index].c_str();
}

void mbls_result_free(mbls_result* result) { delete result; }

mbls_status mbls_shadow_norm(const mbls_config* config, mbls_table** out) {
  if (!config) return null_pointer("config");
  if (!out) return null_pointer("out");
  return guarded([&] {
    const mbls::RunConfig& c = config->config;
    mbls::ShadowNormOptions opt;
    opt.policy = c.policy;
    opt.tau = c.tau;
    opt.checkpoints = c.times;
    opt.k_max = c.k_max;
    opt.placement = c.placement;
    *out = new mbls_table{mbls::run_shadow_norm(c.schedule(), c.xxz(), opt)};
  });
}

size_t mbls_table_size(const mbls_table* table) { return table ? table->table.entries.size() : 0; }

mbls_status mbls_table_entry(const mbls_table* table, size_t index, int* k, int* start, double* t,
                             double* lambda) {
  if (!table) return null_pointer("table");
  if (index >= table->table.entries.size()) {
    g_last_error = "table index out of range";
    return MBLS_ERR_INVALID_ARGUMENT;
  }
  const mbls::ShadowNormEntry& e = table->table.entries[index];
  if (k) *k = e.k;
  if (start) *start = e.start;
  if (t) *t = e.t;
  if (lambda) *lambda = e.lambda;
  return MBLS_OK;
}

double mbls_table_max_discarded_weight(const mbls_table* table) {
  return table ? table->table.max_discarded_weight : 0.0;
}

void mbls_table_free(mbls_table* table) { delete table; }

mbls_status mbls_fit_alpha(const int* k, const double* norms, size_t count, int k_min, int k_max,
                           double* c0, double* alpha, double* stderr_alpha) {
  if (!k) return null_pointer("k");
  if (!norms) return null_pointer("norms");
  return guarded([&] {
    std::vector<mbls::NormPoint> points;
    for (size_t i = 0; i < count; ++i) points.push_back({k[i], norms[i]});
    const mbls::FitResult f = mbls::fit_alpha(points, k_min, k_max);
    if (c0) *c0 = f.c0;
    if (alpha) *alpha = f.alpha;
    if (stderr_alpha) *stderr_alpha = f.stderr_alpha;
  });
}

mbls_status mbls_lambda_statement1(int k, double xi, double j0, double t, int force, double* out) {
  if (!out) return null_pointer("out");
  return guarded([&] {
    *out = mbls::pheno::lambda_statement1(k, xi, j0, t, mbls::pheno::LogBase::kNatural, force != 0);
  });
}

mbls_status mbls_lambda_pair_avg(int n, double xi, double j0, double t, double* out) {
  if (!out) return null_pointer("out");
  return guarded([&] { *out = mbls::pheno::lambda_pair_avg({n, xi, j0, t, 0}); });
}

int mbls_clifford_count(void) { return mbls::kCliffordCount; }

int mbls_criterion_count(void) { return mbls::acceptance::kCriterionCount; }

}  // extern "C"
