#include "fraglab/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraglab/errors.hpp"

namespace fraglab::dioph {

namespace {

using i128 = __int128;

bool fits(i128 v) { return v <= INT64_MAX && v >= INT64_MIN; }

// Appends quotient a; returns false (leaving cf untouched) on overflow or cap.
bool push_quotient(ContinuedFraction& cf, std::int64_t a, std::int64_t q_cap) {
  const auto& c = cf.convergents;
  const std::size_t n = c.size();
  const i128 p1 = n >= 1 ? c[n - 1].p : 1, q1 = n >= 1 ? c[n - 1].q : 0;
  // Seeds p_{-1}/q_{-1} = 1/0 and p_{-2}/q_{-2} = 0/1.
  const i128 p2 = n >= 2 ? c[n - 2].p : (n == 1 ? 1 : 0), q2 = n >= 2 ? c[n - 2].q : (n == 1 ? 0 : 1);
  const i128 p = static_cast<i128>(a) * p1 + p2;
  const i128 q = static_cast<i128>(a) * q1 + q2;
  if (!fits(p) || !fits(q) || q > q_cap) return false;
  cf.quotients.push_back(a);
  cf.convergents.push_back({static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)});
  return true;
}

}  // namespace

ContinuedFraction ContinuedFraction::from_quotients(const std::vector<std::int64_t>& a) {
  ContinuedFraction cf;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0 && a[i] < 1) throw DomainError("quotients after the first must be positive");
    if (!push_quotient(cf, a[i], INT64_MAX)) break;
  }
  cf.evidence_depth = static_cast<int>(cf.quotients.size());
  return cf;
}

ContinuedFraction continued_fraction(double x, int max_terms, std::int64_t q_cap) {
  if (max_terms < 1) throw DomainError("max_terms must be at least 1");
  if (!std::isfinite(x)) throw DomainError("continued_fraction needs a finite value");
  ContinuedFraction cf;
  const long double target = x;
  const long double stop = 256.0L * std::numeric_limits<double>::epsilon() * std::fabs(target);
  long double r = target;
  for (int n = 0; n < max_terms; ++n) {
    const long double fl = std::floor(r);
    if (std::fabs(fl) > static_cast<long double>(INT64_MAX / 2)) break;
    if (!push_quotient(cf, static_cast<std::int64_t>(fl), q_cap)) break;
    const auto& c = cf.convergents.back();
    const long double err = std::fabs(target - static_cast<long double>(c.p) / static_cast<long double>(c.q));
    const long double frac = r - fl;
    if (err <= stop || frac == 0.0L) break;
    r = 1.0L / frac;
  }
  cf.evidence_depth = static_cast<int>(cf.quotients.size());
  return cf;
}

RationalityVerdict rationality_verdict(double x, std::int64_t q_max, double tol) {
  if (q_max < 1) throw DomainError("q_max must be at least 1");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  const ContinuedFraction cf = continued_fraction(x, 64);
  RationalityVerdict v{};
  v.evidence_depth = cf.evidence_depth;
  for (const auto& c : cf.convergents) {
    if (c.q > q_max) break;
    const long double err = std::fabs(static_cast<long double>(x) -
                                      static_cast<long double>(c.p) / static_cast<long double>(c.q));
    if (err <= tol) {
      v.kind = RationalityVerdict::Kind::rational;
      v.p = c.p;
      v.q = c.q;
      return v;
    }
  }
  v.kind = RationalityVerdict::Kind::irrational_like;
  try {
    v.kappa_estimate = irrationality_exponent_estimate(cf);
  } catch (const DomainError&) {
    // too shallow an expansion to say anything
  }
  return v;
}

double irrationality_exponent_estimate(const ContinuedFraction& cf, std::int64_t q_floor) {
  const auto& c = cf.convergents;
  if (c.size() < 3) throw DomainError("need at least 3 convergents");
  q_floor = std::max<std::int64_t>(q_floor, 2);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n + 1 < c.size(); ++n) {
    if (c[n].q < q_floor) continue;
    best = std::max(best, std::log(static_cast<double>(c[n + 1].q)) / std::log(static_cast<double>(c[n].q)));
  }
  if (!std::isfinite(best)) throw DomainError("no consecutive convergents above the denominator floor");
  return 1.0 + best;
}

std::int64_t count_equidistributed_indices(double theta, double offset, std::int64_t K,
                                           const benford::IntervalQuery& q) {
  if (K < 1) throw DomainError("K must be at least 1");
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < K; ++i) {
    const double t = benford::mantissa_of_log(offset + static_cast<double>(i) * theta);
    if (q.contains(t)) ++count;
  }
  return count;
}

}  // namespace fraglab::dioph
