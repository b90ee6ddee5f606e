#include "fraglab/stick_exact.hpp"

#include <gmpxx.h>

#include <cmath>
#include <functional>
#include <string>

#include "fraglab/errors.hpp"
#include "fraglab/numerics.hpp"
#include "fraglab/parallel.hpp"

namespace fraglab::stick {

namespace {

constexpr std::uint64_t kChunk = 1u << 14;

std::vector<double> log_proportions(const ProportionVector& p, const benford::Base& B) {
  std::vector<double> out;
  out.reserve(p.values().size());
  for (double v : p.values()) out.push_back(B.log(v));
  return out;
}

double log_length(const Composition& c, const std::vector<double>& logp) {
  double s = 0.0;
  for (int i = 0; i < c.m(); ++i)
    if (c[i] != 0) s += c[i] * logp[static_cast<std::size_t>(i)];
  return s;
}

double log_multinomial_with(const Composition& c, const LogFactorialTable& lf) {
  double s = lf(c.N());
  for (int v : c.parts()) s -= lf(v);
  return s;
}

mpz_class binomial_mpz(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpz_class multinomial_mpz(const Composition& c) {
  mpz_class num;
  mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(c.N()));
  for (int v : c.parts()) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(v));
    num /= f;
  }
  return num;
}

// Visits every composition of N into m parts in chunks of consecutive ranks.
template <class Acc>
std::vector<Acc> for_each_chunk(int N, int m,
                                const std::function<void(const Composition&, Acc&)>& visit) {
  const std::uint64_t total = composition_count(N, m);
  const std::size_t n_chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
  std::vector<Acc> acc(n_chunks);
  parallel_for_chunks(n_chunks, [&](std::size_t chunk) {
    const std::uint64_t begin = chunk * kChunk;
    const std::uint64_t end = std::min(total, begin + kChunk);
    CompositionCursor cur(N, m, begin);
    for (std::uint64_t r = begin; r < end; ++r, cur.next()) visit(cur.current(), acc[chunk]);
  });
  return acc;
}

}  // namespace

ProportionVector::ProportionVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.size() < 2) throw DomainError("proportion vector needs at least two entries");
  double s = 0.0;
  for (double v : p_) {
    if (!(v > 0.0 && v < 1.0)) throw DomainError("proportions must lie in (0,1)");
    s += v;
  }
  if (std::fabs(s - 1.0) > 1e-12) throw DomainError("proportions must sum to 1");
}

double log_multinomial(const Composition& c) {
  double s = std::lgamma(c.N() + 1.0);
  for (int v : c.parts()) s -= std::lgamma(v + 1.0);
  return s;
}

std::uint64_t multinomial_exact(const Composition& c) {
  if (c.N() > 20) throw DomainError("exact multinomial limited to N <= 20");
  std::uint64_t r = 1;
  int acc = 0;
  for (int v : c.parts()) {
    acc += v;
    r *= binomial_u64(static_cast<std::uint64_t>(acc), static_cast<std::uint64_t>(v));
  }
  return r;
}

double stick_log_length(const Composition& c, const ProportionVector& p, const benford::Base& B) {
  if (c.m() != p.m()) throw DomainError("composition and proportions differ in length");
  return log_length(c, log_proportions(p, B));
}

std::vector<double> ratio_exponents(const ProportionVector& p, const benford::Base& B) {
  std::vector<double> y;
  for (int i = 0; i + 1 < p.m(); ++i) y.push_back(B.log(p[i] / p[i + 1]));
  return y;
}

double exact_interval_probability(int N, const ProportionVector& p, const benford::Base& B,
                                  const benford::IntervalQuery& q) {
  if (N < 0) throw DomainError("N must be non-negative");
  const int m = p.m();
  const auto logp = log_proportions(p, B);
  const LogFactorialTable lf(N);
  struct Acc {
    LogSumExp inside, total;
  };
  auto acc = for_each_chunk<Acc>(N, m, [&](const Composition& c, Acc& a) {
    const double w = log_multinomial_with(c, lf);
    a.total.add(w);
    if (q.contains(benford::mantissa_of_log(log_length(c, logp)))) a.inside.add(w);
  });
  LogSumExp inside, total;
  for (const auto& a : acc) {
    inside.merge(a.inside);
    total.merge(a.total);
  }
  // Dividing by the accumulated total rather than m^N keeps the full interval at exactly 1.
  return std::min(1.0, std::exp(inside.value() - total.value()));
}

benford::MantissaDistribution exact_mantissa_distribution(int N, const ProportionVector& p,
                                                          const benford::Base& B,
                                                          std::uint64_t term_budget) {
  if (N < 0) throw DomainError("N must be non-negative");
  const int m = p.m();
  const std::uint64_t terms = composition_count(N, m);
  if (terms > term_budget)
    throw CapacityError("exact enumeration needs " + std::to_string(terms) +
                        " terms, above the term budget of " + std::to_string(term_budget));
  const auto logp = log_proportions(p, B);
  const LogFactorialTable lf(N);
  auto acc = for_each_chunk<benford::MantissaDistribution>(
      N, m, [&](const Composition& c, benford::MantissaDistribution& d) {
        d.add(benford::mantissa_of_log(log_length(c, logp)), log_multinomial_with(c, lf));
      });
  benford::MantissaDistribution out;
  out.reserve(static_cast<std::size_t>(terms));
  for (const auto& d : acc) out.append(d);
  out.finalize();
  return out;
}

benford::MantissaDistribution brute_force_mantissa(int N, const ProportionVector& p,
                                                   const benford::Base& B,
                                                   std::uint64_t stick_budget) {
  if (N < 0) throw DomainError("N must be non-negative");
  const int m = p.m();
  const double sticks = std::pow(static_cast<double>(m), N);
  if (sticks > static_cast<double>(stick_budget))
    throw CapacityError("tree expansion needs " + std::to_string(static_cast<long double>(sticks)) +
                        " sticks, above the stick budget of " + std::to_string(stick_budget));
  const auto logp = log_proportions(p, B);
  const double w = -N * std::log(static_cast<double>(m));
  benford::MantissaDistribution out;
  out.reserve(static_cast<std::size_t>(sticks));
  // Iterative depth-first walk; path[j] is the piece chosen at stage j.
  std::vector<int> path(static_cast<std::size_t>(N), 0);
  std::vector<double> prefix(static_cast<std::size_t>(N) + 1, 0.0);
  int depth = 0;
  for (;;) {
    while (depth < N) {
      prefix[static_cast<std::size_t>(depth) + 1] =
          prefix[static_cast<std::size_t>(depth)] + logp[static_cast<std::size_t>(path[static_cast<std::size_t>(depth)])];
      ++depth;
    }
    out.add(benford::mantissa_of_log(prefix[static_cast<std::size_t>(N)]), w);
    int j = N - 1;
    while (j >= 0 && path[static_cast<std::size_t>(j)] == m - 1) path[static_cast<std::size_t>(j--)] = 0;
    if (j < 0) break;
    ++path[static_cast<std::size_t>(j)];
    depth = j;
  }
  out.finalize();
  return out;
}

bool verify_multinomial_factorization(const Composition& c) {
  const mpz_class lhs = multinomial_mpz(c);
  mpz_class rhs = 1;
  unsigned long acc = 0;
  for (int v : c.parts()) {
    acc += static_cast<unsigned long>(v);
    rhs *= binomial_mpz(acc, static_cast<unsigned long>(v));
  }
  return lhs == rhs;
}

bool verify_power_identity(int N, int m) {
  if (N < 0 || N > 20 || m < 1 || m > 6) throw DomainError("power identity check needs N <= 20, m <= 6");
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(N));
  mpz_class sum = 0;
  for (CompositionCursor cur(N, m); !cur.done(); cur.next()) sum += multinomial_mpz(cur.current());
  if (sum != power) return false;
  // Merging the first two parts: Σ_{k1+k2=K} C(K,k1) = 2^K.
  if (m == 1) return true;
  mpz_class merged = 0;
  for (CompositionCursor cur(N, m - 1); !cur.done(); cur.next()) {
    mpz_class two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(cur.current()[0]));
    merged += two_pow * multinomial_mpz(cur.current());
  }
  return merged == power;
}

}  // namespace fraglab::stick
