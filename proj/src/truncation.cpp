#include "fraglab/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fraglab/errors.hpp"
#include "fraglab/numerics.hpp"

namespace fraglab::stick {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log|e^a - e^b|
double log_abs_diff(double a, double b) {
  if (a == b) return kNegInf;
  const double hi = std::max(a, b);
  return hi + std::log1p(-std::exp(-std::fabs(a - b)));
}

std::int64_t floor_div2(std::int64_t k) { return k >= 0 ? k / 2 : -((-k + 1) / 2); }

}  // namespace

TruncationParams::TruncationParams(double eps, double del) : epsilon(eps), delta(del) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  if (!(delta > 0.0 && delta < epsilon / 10.0)) throw DomainError("delta must lie in (0, epsilon/10)");
}

std::int64_t block_start(std::int64_t k, std::int64_t ell, std::int64_t q) {
  const std::int64_t half = ell >= 0 ? floor_div2(k + 1) : floor_div2(k);
  return half + ell * q;
}

double adjacent_binomial_ratio(std::int64_t kN, std::int64_t ell, std::int64_t q) {
  if (kN < 0 || q < 0) throw DomainError("adjacent_binomial_ratio needs kN >= 0 and q >= 0");
  const std::int64_t i0 = block_start(kN, ell, q);
  const std::int64_t i1 = i0 + q;
  if (i0 < 0 || i0 > kN || i1 < 0 || i1 > kN) throw DomainError("block start outside [0, kN]");
  if (q == 0) return 1.0;
  const double k = static_cast<double>(kN);
  return std::exp(log_binomial(k, static_cast<double>(i1)) - log_binomial(k, static_cast<double>(i0)));
}

double truncation_cut_bound(int N, int m, double epsilon) {
  if (m < 3) return 0.0;
  if (N <= 1) return 1.0;
  const double lg = N * std::log((m - 2.0) / m) + (std::pow(N, epsilon) + 2.0) * std::log(N);
  return lg >= 0.0 ? 1.0 : std::exp(lg);
}

TruncatedResult truncated_estimate(int N, const ProportionVector& p, const benford::Base& B,
                                   const benford::IntervalQuery& q, const TruncationParams& t) {
  if (N < 0) throw DomainError("N must be non-negative");
  const int m = p.m();
  TruncatedResult r;
  const auto qb = static_cast<std::int64_t>(N == 0 ? 1 : std::ceil(std::pow(N, t.delta)));
  r.block_size = static_cast<int>(qb);
  r.inner_ell_radius = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(N)) / 2.0));
  r.outer_ell_radius = N / (2.0 * static_cast<double>(qb));
  r.prop_cut_bound = truncation_cut_bound(N, m, t.epsilon);
  r.chebyshev_bound = 1.0 / static_cast<double>(qb * qb);

  std::vector<double> logp;
  for (double v : p.values()) logp.push_back(B.log(v));
  const double log_mN = N * std::log(static_cast<double>(m));
  const double cut = m >= 3 ? std::pow(N, t.epsilon) : 0.0;

  LogSumExp value, block_err, gap;
  std::vector<double> coeff;
  for (int K = (m == 2 ? N : 0); K <= N; ++K) {
    if (static_cast<double>(K) < cut) continue;
    const double sdq = static_cast<double>(qb) * std::sqrt(static_cast<double>(K)) / 2.0;
    const double half = K / 2.0;
    auto admissible = [&](std::int64_t k1) {
      return k1 >= 0 && k1 <= K && std::fabs(static_cast<double>(k1) - half) < sdq;
    };
    coeff.assign(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k1 = 0; k1 <= K; ++k1) coeff[static_cast<std::size_t>(k1)] = log_binomial(K, k1);
    const auto L = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(K)) / 2.0));

    // The remaining m-2 parts carry the weight N!/(K! k_3! ... k_m!).
    const int rest_parts = m - 2;
    auto visit = [&](const std::vector<int>& tail) {
      double lw = std::lgamma(N + 1.0) - std::lgamma(K + 1.0) - log_mN;
      double tail_log = 0.0;
      for (std::size_t i = 0; i < tail.size(); ++i) {
        lw -= std::lgamma(tail[i] + 1.0);
        if (tail[i] != 0) tail_log += tail[i] * logp[i + 2];
      }
      std::vector<bool> covered(static_cast<std::size_t>(K) + 1, false);
      for (std::int64_t ell = -L; ell <= L; ++ell) {
        const std::int64_t s = block_start(K, ell, qb);
        double start_w = kNegInf;
        std::int64_t inside = 0;
        bool any = false;
        for (std::int64_t k1 = s; k1 < s + qb; ++k1) {
          if (!admissible(k1)) continue;
          // A block whose start is out of range is weighted by its first admissible member.
          if (!any) start_w = admissible(s) ? coeff[static_cast<std::size_t>(s)] : coeff[static_cast<std::size_t>(k1)];
          any = true;
          covered[static_cast<std::size_t>(k1)] = true;
          const double ll = k1 * logp[0] + (K - k1) * logp[1] + tail_log;
          if (q.contains(benford::mantissa_of_log(ll))) ++inside;
          block_err.add(lw + log_abs_diff(coeff[static_cast<std::size_t>(k1)], start_w));
        }
        if (!any) continue;
        ++r.blocks_used;
        if (inside > 0) value.add(lw + start_w + std::log(static_cast<double>(inside)));
      }
      for (int k1 = 0; k1 <= K; ++k1)
        if (admissible(k1) && !covered[static_cast<std::size_t>(k1)])
          gap.add(lw + coeff[static_cast<std::size_t>(k1)]);
    };

    if (rest_parts == 0) {
      visit({});
    } else {
      for (CompositionCursor cur(N - K, rest_parts); !cur.done(); cur.next()) visit(cur.current().parts());
    }
  }
  r.value = std::clamp(std::exp(value.value()), 0.0, 1.0);
  r.block_error_bound = std::exp(block_err.value());
  r.gap_mass = std::exp(gap.value());
  r.dropped_mass_bound = r.prop_cut_bound + r.chebyshev_bound + r.gap_mass;
  return r;
}

ErrorExponent predicted_error_exponent(double kappa, const TruncationParams& t, double eps_prime) {
  if (!(eps_prime > 0.0)) throw DomainError("eps_prime must be positive");
  if (std::isinf(kappa) && kappa > 0) return LittleO{};
  if (!(kappa > 1.0)) throw DomainError("kappa must exceed 1");
  const double inner = -1.0 / kappa + eps_prime;
  if (!(inner < 0.0)) throw DomainError("eps_prime must be below 1/kappa");
  return t.delta * inner;
}

}  // namespace fraglab::stick
