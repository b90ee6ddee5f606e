#pragma once

#include <cstdint>
#include <variant>

#include "fraglab/benford.hpp"
#include "fraglab/stick_exact.hpp"

namespace fraglab::stick {

struct TruncationParams {
  double epsilon;
  double delta;
  TruncationParams(double eps, double del);
};

struct TruncatedResult {
  double value = 0.0;
  /// Cut bound + Chebyshev bound + mass of admissible indices no block covers.
  double dropped_mass_bound = 0.0;
  /// Exact mass moved by replacing each member binomial with its block start.
  double block_error_bound = 0.0;
  std::int64_t blocks_used = 0;
  double prop_cut_bound = 0.0;
  double chebyshev_bound = 0.0;
  double gap_mass = 0.0;
  int block_size = 0;
  /// ceil(sqrt(k)/2) at k = N, the block index range actually enumerated.
  int inner_ell_radius = 0;
  /// N / (2 ceil(N^delta)), the alternative index range; reported only.
  double outer_ell_radius = 0.0;
};

/// Block-structured estimate of the interval probability at stage N.
///
/// Keeps compositions with k_1 + k_2 >= N^eps (all of them when m = 2) and
/// k_1 within ceil(N^delta) standard deviations of k/2, and weights each run
/// of ceil(N^delta) consecutive k_1 by the binomial at its start.
TruncatedResult truncated_estimate(int N, const ProportionVector& p, const benford::Base& B,
                                   const benford::IntervalQuery& q, const TruncationParams& t);

/// Start of block ell: ceil(k/2) + ell*q for ell >= 0, floor(k/2) + ell*q below.
std::int64_t block_start(std::int64_t k, std::int64_t ell, std::int64_t q);

/// C(k, start_{ell+1}) / C(k, start_ell) for blocks of width q.
double adjacent_binomial_ratio(std::int64_t kN, std::int64_t ell, std::int64_t q);

/// Bound on the share of sticks with k_1 + k_2 < N^eps, clamped to 1.
double truncation_cut_bound(int N, int m, double epsilon);

struct LittleO {};
/// Either a power of N or the marker for a bare o(1) rate.
using ErrorExponent = std::variant<double, LittleO>;

/// delta * (-1/kappa + eps_prime); kappa = +inf yields LittleO.
ErrorExponent predicted_error_exponent(double kappa, const TruncationParams& t, double eps_prime);

}  // namespace fraglab::stick
