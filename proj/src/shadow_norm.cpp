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

#include "mblshadow/shadow_norm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <fmt/format.h>

#include "mblshadow/error.hpp"

namespace mbls {

namespace {

VectorXc vectorized_pauli(Pauli p) {
  const MatrixXc m = pauli_matrix(p);
  VectorXc v(4);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) v(2 * r + c) = m(r, c) / std::sqrt(2.0);
  }
  return v;
}

VectorXc pair_vector(Pauli p) {
  const VectorXc v = vectorized_pauli(p);
  VectorXc out(16);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) out(4 * a + b) = v(a) * v(b);
  }
  return out;
}

// sum_s conj(w_s) A_s for one site.
MatrixXc projected_transfer(const SiteTensor& t, const VectorXc& w) {
  MatrixXc out = MatrixXc::Zero(t.left(), t.right());
  for (int s = 0; s < t.phys(); ++s) {
    const cplx c = std::conj(w(s));
    if (c == cplx{}) continue;
    out += c * t.slice(s);
  }
  return out;
}

}  // namespace

void RegionSpec::validate(int n) const {
  require(start >= 0 && length >= 0 && start + length <= n, ErrorCode::kInvalidArgument,
          fmt::format("region [start={}, k={}] does not fit in N={}", start, length, n));
}

VectorXc doubled_identity_vector() { return pair_vector(Pauli::kI); }

VectorXc doubled_pauli_average() {
  return (pair_vector(Pauli::kX) + pair_vector(Pauli::kY) + pair_vector(Pauli::kZ)) / 3.0;
}

VectorXc doubled_size_vector() { return doubled_identity_vector() + doubled_pauli_average(); }

Mps build_s_state(int n) {
  require(n >= 1, ErrorCode::kInvalidArgument, "|S)) needs N >= 1");
  const std::vector<VectorXc> sites(static_cast<std::size_t>(n), doubled_size_vector());
  return Mps::product_state(sites);
}

Mps build_a_state(const RegionSpec& region, int n) {
  require(n >= 1, ErrorCode::kInvalidArgument, "|A)) needs N >= 1");
  region.validate(n);
  std::vector<VectorXc> sites(static_cast<std::size_t>(n), doubled_identity_vector());
  for (int i = region.start; i < region.start + region.length; ++i) {
    sites[static_cast<std::size_t>(i)] = doubled_pauli_average();
  }
  return Mps::product_state(sites);
}

int centered_start(int n, int k) {
  if (k <= 0) return n / 2;
  return n / 2 - (k - 1) / 2 - 1;
}

std::optional<double> ShadowNormTable::lambda(int k, int start, double t) const {
  for (const ShadowNormEntry& e : entries) {
    if (e.k == k && e.start == start && std::abs(e.t - t) <= 1e-9 * std::max(1.0, std::abs(t))) {
      return e.lambda;
    }
  }
  return std::nullopt;
}

long steps_for_time(double t, double tau) {
  require(tau > 0.0, ErrorCode::kInvalidArgument, "tau must be > 0");
  require(t >= 0.0, ErrorCode::kInvalidArgument, "checkpoint times must be >= 0");
  const double ratio = t / tau;
  const long steps = std::lround(ratio);
  require(std::abs(ratio - static_cast<double>(steps)) <= 1e-9 * std::max(1.0, ratio),
          ErrorCode::kInvalidArgument,
          fmt::format("time {} is not a multiple of tau = {}", t, tau));
  return steps;
}

DoubledEvolution::DoubledEvolution(const BondSchedule& single_copy, double tau,
                                   TruncationPolicy policy)
    : DoubledEvolution(single_copy, tau, policy, build_s_state(single_copy.n), 0) {}

DoubledEvolution::DoubledEvolution(const BondSchedule& single_copy, double tau,
                                   TruncationPolicy policy, Mps state, long steps_done)
    : step_(trotterize(build_doubled_bonds(single_copy), tau, TimeDirection::kBackward)),
      tau_(tau),
      policy_(policy),
      state_(std::move(state)),
      steps_(steps_done) {
  policy_.validate();
  require(state_.size() == single_copy.n && state_.phys_dim() == 16,
          ErrorCode::kDimensionMismatch, "doubled state does not match the Hamiltonian");
}

void DoubledEvolution::advance(long steps) {
  for (long s = 0; s < steps; ++s) {
    last_ = apply_gate_sequence(state_, step_.gates, policy_);
    max_step_discarded_ = std::max(max_step_discarded_, last_.discarded_weight);
    ++steps_;
  }
}

std::vector<ShadowNormEntry> DoubledEvolution::region_overlaps(int k_max,
                                                               RegionPlacement placement) const {
  const int n = state_.size();
  require(k_max >= 0 && k_max <= n, ErrorCode::kInvalidArgument, "k_max must lie in [0, N]");
  const VectorXc id = doubled_identity_vector();
  const VectorXc avg = doubled_pauli_average();

  std::vector<MatrixXc> t_id(static_cast<std::size_t>(n));
  std::vector<MatrixXc> t_avg(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    t_id[static_cast<std::size_t>(i)] = projected_transfer(state_.site(i), id);
    t_avg[static_cast<std::size_t>(i)] = projected_transfer(state_.site(i), avg);
  }
  std::vector<MatrixXc> left(static_cast<std::size_t>(n) + 1);
  std::vector<MatrixXc> right(static_cast<std::size_t>(n) + 1);
  left[0] = MatrixXc::Ones(1, 1);
  for (int i = 0; i < n; ++i) {
    left[static_cast<std::size_t>(i) + 1] =
        left[static_cast<std::size_t>(i)] * t_id[static_cast<std::size_t>(i)];
  }
  right[static_cast<std::size_t>(n)] = MatrixXc::Ones(1, 1);
  for (int i = n - 1; i >= 0; --i) {
    right[static_cast<std::size_t>(i)] =
        t_id[static_cast<std::size_t>(i)] * right[static_cast<std::size_t>(i) + 1];
  }

  const double scale = std::exp(state_.log_scale());
  const double t = time();
  std::vector<ShadowNormEntry> out;
  for (int k = 0; k <= k_max; ++k) {
    std::vector<int> starts;
    if (k == 0) {
      starts.push_back(placement == RegionPlacement::kCentered ? centered_start(n, 0) : 0);
    } else if (placement == RegionPlacement::kCentered) {
      starts.push_back(centered_start(n, k));
    } else {
      for (int s = 0; s + k <= n; ++s) starts.push_back(s);
    }
    for (int s : starts) {
      MatrixXc v = left[static_cast<std::size_t>(s)];
      for (int i = s; i < s + k; ++i) v = v * t_avg[static_cast<std::size_t>(i)];
      const cplx overlap = (v * right[static_cast<std::size_t>(s + k)])(0, 0) * scale;
      out.push_back({k, s, t, overlap.real()});
    }
  }
  return out;
}

double DoubledEvolution::support_overlap(std::span<const int> sites) const {
  const int n = state_.size();
  std::vector<bool> in_support(static_cast<std::size_t>(n), false);
  for (int s : sites) {
    require(s >= 0 && s < n, ErrorCode::kInvalidArgument,
            fmt::format("support site {} outside the chain", s));
    in_support[static_cast<std::size_t>(s)] = true;
  }
  const VectorXc id = doubled_identity_vector();
  const VectorXc avg = doubled_pauli_average();
  MatrixXc v = MatrixXc::Ones(1, 1);
  for (int i = 0; i < n; ++i) {
    v = v * projected_transfer(state_.site(i), in_support[static_cast<std::size_t>(i)] ? avg : id);
  }
  return (v(0, 0) * std::exp(state_.log_scale())).real();
}

ShadowNormTable run_shadow_norm(const XxzParams& params, const ShadowNormOptions& options) {
  const std::vector<double> fields = sample_disorder(params);
  return run_shadow_norm(build_xxz_bonds(params, fields), params, options);
}

ShadowNormTable run_shadow_norm(const BondSchedule& single_copy, const XxzParams& params,
                                const ShadowNormOptions& options) {
  require(!options.checkpoints.empty(), ErrorCode::kInvalidArgument,
          "at least one checkpoint time is required");
  std::vector<double> checkpoints = options.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());

  ShadowNormTable table;
  table.params = params;
  table.policy = options.policy;
  table.tau = options.tau;
  table.checkpoints = checkpoints;

  DoubledEvolution evo(single_copy, options.tau, options.policy);
  for (double t : checkpoints) {
    const long target = steps_for_time(t, options.tau);
    const double before = evo.max_step_discarded();
    evo.advance(target - evo.steps());
    if (evo.max_step_discarded() > kTruncationWarning && evo.max_step_discarded() > before) {
      table.warnings.push_back(fmt::format(
          "discarded weight per step {:.3e} exceeds {:.0e} before tJ = {:g}",
          evo.max_step_discarded(), kTruncationWarning, t));
    }
    for (ShadowNormEntry e : evo.region_overlaps(options.k_max, options.placement)) {
      e.t = t;
      table.entries.push_back(e);
    }
    table.max_bond_dim = std::max(table.max_bond_dim, evo.state().max_bond_dim());
  }
  table.max_discarded_weight = evo.max_step_discarded();
  return table;
}

std::vector<AveragedLambda> average_over_starts(const ShadowNormTable& table) {
  require(!table.entries.empty(), ErrorCode::kInvalidArgument, "empty shadow-norm table");
  std::map<std::pair<double, int>, std::pair<double, int>> acc;
  for (const ShadowNormEntry& e : table.entries) {
    auto& slot = acc[{e.t, e.k}];
    slot.first += e.lambda;
    slot.second += 1;
  }
  std::vector<AveragedLambda> out;
  out.reserve(acc.size());
  for (const auto& [key, value] : acc) {
    out.push_back({key.second, key.first, value.first / value.second});
  }
  return out;
}

FitResult fit_alpha(std::span<const NormPoint> points, int k_min, int k_max) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const NormPoint& p : points) {
    if (p.k < k_min || p.k > k_max) continue;
    require(p.norm > 0.0 && std::isfinite(p.norm), ErrorCode::kDomain,
            fmt::format("shadow norm at k={} must be positive, got {}", p.k, p.norm));
    xs.push_back(p.k);
    ys.push_back(std::log(p.norm));
  }
  require(xs.size() >= 3, ErrorCode::kInvalidArgument, "fit needs at least three points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  require(sxx > 0.0, ErrorCode::kDomain, "fit needs at least two distinct k values");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - intercept - slope * xs[i];
    rss += r * r;
  }
  const double slope_se = std::sqrt(rss / (n - 2.0) / sxx);

  FitResult out;
  out.alpha = std::exp(slope);
  out.c0 = std::exp(intercept);
  out.stderr_alpha = out.alpha * slope_se;
  out.k_min = k_min;
  out.k_max = k_max;
  return out;
}

}  // namespace mbls
