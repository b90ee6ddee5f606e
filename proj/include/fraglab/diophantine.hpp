#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fraglab/benford.hpp"

namespace fraglab::dioph {

struct Convergent {
  std::int64_t p;
  std::int64_t q;
};

struct ContinuedFraction {
  std::vector<std::int64_t> quotients;
  std::vector<Convergent> convergents;
  /// Number of quotients taken from the input before noise would take over.
  int evidence_depth = 0;

  /// Builds convergents from a known quotient list, stopping before 64-bit overflow.
  static ContinuedFraction from_quotients(const std::vector<std::int64_t>& a);
};

/// Euclidean expansion of a double.
///
/// Stops after max_terms quotients, before a denominator would exceed q_cap, or
/// once |x - p/q| <= 256 * eps * |x|, past which further quotients are noise.
ContinuedFraction continued_fraction(double x, int max_terms = 64,
                                     std::int64_t q_cap = INT64_MAX / 4);

struct RationalityVerdict {
  enum class Kind { rational, irrational_like };
  Kind kind;
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::optional<double> kappa_estimate;
  int evidence_depth = 0;
};

RationalityVerdict rationality_verdict(double x, std::int64_t q_max, double tol);

/// 1 + max ln(q_{n+1}) / ln(q_n) over consecutive convergents with q_n >= q_floor.
///
/// Small denominators inflate the ratio (Fibonacci 2, 3 already gives 2.58), so
/// callers after the limiting growth rate should raise q_floor.
double irrationality_exponent_estimate(const ContinuedFraction& cf, std::int64_t q_floor = 2);

/// |{0 <= i < K : frac(offset + i*theta) in q}|.
std::int64_t count_equidistributed_indices(double theta, double offset, std::int64_t K,
                                           const benford::IntervalQuery& q);

}  // namespace fraglab::dioph
