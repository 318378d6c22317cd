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

#include "mblshadow/pheno.hpp"

#include <cmath>
#include <fmt/format.h>

#include "mblshadow/error.hpp"

namespace mbls::pheno {

void PhenoParams::validate() const {
  require(n >= 2, ErrorCode::kInvalidArgument, "phenomenological chain needs N >= 2");
  require(xi > 0.0, ErrorCode::kInvalidArgument, "localization length xi must be > 0");
  require(j0 > 0.0, ErrorCode::kInvalidArgument, "coupling scale J0 must be > 0");
  require(t >= 0.0, ErrorCode::kInvalidArgument, "time must be >= 0");
}

Eigen::MatrixXd sample_couplings(const PhenoParams& params) {
  StreamRng rng(params.seed, streams::kPheno);
  return sample_couplings(params, rng);
}

Eigen::MatrixXd sample_couplings(const PhenoParams& params, StreamRng& rng) {
  params.validate();
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(params.n, params.n);
  for (int a = 0; a < params.n; ++a) {
    for (int b = a + 1; b < params.n; ++b) {
      const double bare = rng.uniform(-params.j0, params.j0);
      j(a, b) = j(b, a) = bare * std::exp(-static_cast<double>(b - a) / params.xi);
    }
  }
  return j;
}

double lambda_pair_exact(std::span<const double> others, double j_ab, double t) {
  require(t >= 0.0, ErrorCode::kInvalidArgument, "time must be >= 0");
  const double s = std::sin(2.0 * j_ab * t);
  const double c = std::cos(2.0 * j_ab * t);
  double out = (s * s + c * c / 3.0) / 3.0;
  for (double j : others) {
    const double sj = std::sin(2.0 * j * t);
    const double cj = std::cos(2.0 * j * t);
    out *= cj * cj + sj * sj / 3.0;
  }
  return out;
}

double lambda_pair_exact(const Eigen::MatrixXd& couplings, double t) {
  std::vector<double> others;
  for (Eigen::Index j = 2; j < couplings.rows(); ++j) others.push_back(couplings(1, j));
  return lambda_pair_exact(others, couplings(0, 1), t);
}

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double lambda_pair_avg(const PhenoParams& params) {
  params.validate();
  const double t = params.t;
  double out = (2.0 / 3.0 - sinc(4.0 * params.j0 * std::exp(-1.0 / params.xi) * t) / 3.0) / 3.0;
  for (int j = 2; j < params.n; ++j) {
    const double r = j - 1;
    out *= 2.0 / 3.0 + sinc(4.0 * params.j0 * std::exp(-r / params.xi) * t) / 3.0;
  }
  return out;
}

MonteCarloValue lambda_pair_mc(const PhenoParams& params, int draws) {
  params.validate();
  require(draws >= 2, ErrorCode::kInvalidArgument, "Monte Carlo needs >= 2 draws");
  StreamRng rng(params.seed, streams::kPheno);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int m = 0; m < draws; ++m) {
    const double x = lambda_pair_exact(sample_couplings(params, rng), params.t);
    sum += x;
    sum_sq += x * x;
  }
  MonteCarloValue out;
  out.mean = sum / draws;
  const double var = std::max(0.0, (sum_sq - draws * out.mean * out.mean) / (draws - 1));
  out.stderr = std::sqrt(var / draws);
  return out;
}

double log_of(double x, LogBase base) {
  return base == LogBase::kNatural ? std::log(x) : std::log10(x);
}

double lambda_statement1(int k, double xi, double j0, double t, LogBase base, bool force) {
  require(k >= 0, ErrorCode::kInvalidArgument, "region length must be >= 0");
  require(xi > 0.0, ErrorCode::kInvalidArgument, "xi must be > 0");
  require(j0 * t > 0.0, ErrorCode::kDomain, "long-time formula needs J0 t > 0");
  if (!force) {
    const double scale = j0 * std::exp(-1.0 / xi) * t;
    require(scale >= kStatementValidity, ErrorCode::kDomain,
            fmt::format("J0 exp(-1/xi) t = {:.3g} is below the long-time threshold {}", scale,
                        kStatementValidity));
  }
  return std::pow(4.0 / 9.0, k) * std::pow(2.0 / 3.0, 2.0 * xi * log_of(j0 * t, base));
}

double lightcone_width(double xi, double j0, double t, LogBase base,
                       std::optional<double> max_sites) {
  require(xi > 0.0, ErrorCode::kInvalidArgument, "xi must be > 0");
  if (j0 * t < 1.0) return 0.0;
  double width = 2.0 * xi * log_of(j0 * t, base);
  if (max_sites) width = std::min(width, std::max(0.0, *max_sites));
  return width;
}

double sitewise_factor(SiteClass site_class, bool in_lightcone) {
  switch (site_class) {
    case SiteClass::kXorY: return 1.0 / 3.0;
    case SiteClass::kZ: return 2.0 / 3.0;
    case SiteClass::kIdentity: return in_lightcone ? 2.0 / 3.0 : 1.0;
  }
  return 1.0;
}

double lambda_from_site_rules(int k, double lightcone_sites) {
  const double in_region = sitewise_factor(SiteClass::kZ, true) / 3.0 +
                           2.0 * sitewise_factor(SiteClass::kXorY, true) / 3.0;
  return std::pow(in_region, k) *
         std::pow(sitewise_factor(SiteClass::kIdentity, true), lightcone_sites);
}

}  // namespace mbls::pheno
