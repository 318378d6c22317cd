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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mblshadow/linalg.hpp"
#include "mblshadow/rng.hpp"

namespace mbls::pheno {

/// Effective l-bit model H = sum_{i<j} J_ij Z_i Z_j with
/// J_ij = Jt_ij exp(-|i-j| / xi), Jt_ij ~ U[-J0, J0].
struct PhenoParams {
  int n = 8;
  double xi = 1.0;
  double j0 = 1.0;
  double t = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Symmetric N x N coupling matrix with zero diagonal.
Eigen::MatrixXd sample_couplings(const PhenoParams& params);
Eigen::MatrixXd sample_couplings(const PhenoParams& params, StreamRng& rng);

/// sum_n P(n) 3^-n for O = Z_a X_b evolved under the pair couplings.
/// `others` are the couplings J_bj from site b to every site j != a, b.
double lambda_pair_exact(std::span<const double> others, double j_ab, double t);

/// The same quantity for the pair (0, 1) of a full coupling matrix.
double lambda_pair_exact(const Eigen::MatrixXd& couplings, double t);

/// sin(x) / x with the removable singularity filled in.
double sinc(double x);

/// Disorder average of lambda_pair_exact for the pair at sites (0, 1) of an
/// N-site chain; remaining sites j = 2..N-1 sit at distance j - 1 from site 1.
double lambda_pair_avg(const PhenoParams& params);

struct MonteCarloValue {
  double mean = 0.0;
  double stderr = 0.0;
};

/// Monte Carlo estimate of lambda_pair_avg from `draws` coupling samples.
MonteCarloValue lambda_pair_mc(const PhenoParams& params, int draws);

enum class LogBase {
  kNatural,
  kTen,
};

double log_of(double x, LogBase base);

/// Long-time regime threshold on J0 exp(-1/xi) t.
inline constexpr double kStatementValidity = 3.0;

/// (4/9)^k (2/3)^{2 xi log(J0 t)}. Throws a domain error when J0 t <= 0, or
/// when J0 exp(-1/xi) t < kStatementValidity unless `force` is set.
double lambda_statement1(int k, double xi, double j0, double t,
                         LogBase base = LogBase::kNatural, bool force = false);

/// Number of sites 2 xi log(J0 t) in the logarithmic light cone; 0 for
/// J0 t < 1 and clipped at `max_sites` when given.
double lightcone_width(double xi, double j0, double t, LogBase base = LogBase::kNatural,
                       std::optional<double> max_sites = std::nullopt);

enum class SiteClass {
  kXorY,
  kZ,
  kIdentity,
};

/// Long-time per-site factor: 1/3 for X/Y, 2/3 for Z, 2/3 for an identity
/// site inside the light cone and 1 outside it.
double sitewise_factor(SiteClass site_class, bool in_lightcone);

/// Product of sitewise factors for a length-k region averaged over the
/// initial Pauli class (Z with probability 1/3) times the light-cone factor.
double lambda_from_site_rules(int k, double lightcone_sites);

}  // namespace mbls::pheno
