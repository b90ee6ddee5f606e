#include <gtest/gtest.h>
#include <gmpxx.h>

#include <cmath>
#include <limits>

#include "fraglab/errors.hpp"
#include "fraglab/numerics.hpp"
#include "fraglab/truncation.hpp"

using namespace fraglab;
using namespace fraglab::stick;
using benford::Base;
using benford::IntervalQuery;

namespace {

mpz_class binom(long k, long i) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(i));
  return r;
}

long start_oracle(long k, long ell, long q) {
  const long half = ell >= 0 ? (k + 1) / 2 : k / 2;
  return half + ell * q;
}

}  // namespace

TEST(TruncationParams, Validation) {
  EXPECT_NO_THROW(TruncationParams(0.5, 0.04));
  EXPECT_THROW(TruncationParams(0.0, 0.01), DomainError);
  EXPECT_THROW(TruncationParams(1.0, 0.01), DomainError);
  EXPECT_THROW(TruncationParams(0.5, 0.05), DomainError);
  EXPECT_THROW(TruncationParams(0.5, 0.0), DomainError);
}

TEST(Truncated, WithinReportedBounds) {
  const ProportionVector p({0.5, 0.3, 0.2});
  const Base ten(10);
  const TruncationParams t(0.5, 0.04);
  for (int N : {30, 100, 160})
    for (int i = 0; i < 5; ++i) {
      const IntervalQuery q(i / 5.0, (i + 1) / 5.0);
      const auto r = truncated_estimate(N, p, ten, q, t);
      const double exact = exact_interval_probability(N, p, ten, q);
      EXPECT_LE(std::fabs(r.value - exact), r.dropped_mass_bound + r.block_error_bound)
          << "N=" << N << " cell " << i;
      EXPECT_GE(r.value, 0.0);
      EXPECT_GT(r.blocks_used, 0);
    }
}

TEST(Truncated, FullIntervalAccountsForAllMass) {
  const ProportionVector p({0.5, 0.3, 0.2});
  const TruncationParams t(0.5, 0.04);
  for (int N : {1, 10, 100}) {
    const auto r = truncated_estimate(N, p, Base(10), {0.0, 1.0}, t);
    EXPECT_GE(r.value + r.dropped_mass_bound + 1e-12, 1.0) << "N=" << N;
    EXPECT_NEAR(r.dropped_mass_bound, r.prop_cut_bound + r.chebyshev_bound + r.gap_mass, 1e-14);
    EXPECT_NEAR(r.chebyshev_bound, 1.0 / (r.block_size * r.block_size), 1e-15);
  }
}

TEST(Truncated, TwoPartPathSkipsTheCut) {
  const ProportionVector p({0.6, 0.4});
  const IntervalQuery q(0.2, 0.7);
  const auto r = truncated_estimate(200, p, Base(10), q, TruncationParams(0.5, 0.04));
  EXPECT_EQ(r.prop_cut_bound, 0.0);
  const double exact = exact_interval_probability(200, p, Base(10), q);
  EXPECT_LE(std::fabs(r.value - exact), r.dropped_mass_bound + r.block_error_bound);
}

TEST(Truncated, RejectsNegativeN) {
  EXPECT_THROW(truncated_estimate(-1, ProportionVector({0.5, 0.5}), Base(10), {0.0, 1.0},
                                  TruncationParams(0.5, 0.04)),
               DomainError);
}

TEST(CutBound, DominatesSmallPairSums) {
  for (int m : {3, 4})
    for (int N : {20, 50})
      for (double eps : {0.3, 0.5}) {
        const double cut = std::pow(static_cast<double>(N), eps);
        mpz_class small = 0;
        for (const auto& c : compositions(N, m)) {
          if (c[0] + c[1] >= cut) continue;
          mpz_class mult;
          mpz_fac_ui(mult.get_mpz_t(), static_cast<unsigned long>(N));
          for (int v : c.parts()) {
            mpz_class f;
            mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(v));
            mult /= f;
          }
          small += mult;
        }
        long exp2 = 0;
        const double mant = mpz_get_d_2exp(&exp2, small.get_mpz_t());
        const double log_lhs = std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
        const double log_rhs = N * std::log(m - 2.0) + (cut + 2.0) * std::log(static_cast<double>(N));
        EXPECT_LE(log_lhs, log_rhs) << "m=" << m << " N=" << N << " eps=" << eps;
        // The library's share bound is the same quantity divided by m^N, capped at 1.
        const double share = std::exp(log_lhs - N * std::log(static_cast<double>(m)));
        EXPECT_LE(share, truncation_cut_bound(N, m, eps) * (1 + 1e-12));
      }
  EXPECT_EQ(truncation_cut_bound(100, 2, 0.5), 0.0);
  EXPECT_LE(truncation_cut_bound(3, 3, 0.5), 1.0);
}

TEST(BlockStart, FloorCeilConvention) {
  EXPECT_EQ(block_start(7, 0, 3), 4);
  EXPECT_EQ(block_start(7, 1, 3), 7);
  EXPECT_EQ(block_start(7, -1, 3), 0);
  EXPECT_EQ(block_start(8, 0, 3), 4);
  EXPECT_EQ(block_start(8, -2, 2), 0);
}

TEST(AdjacentRatio, MatchesExactIntegers) {
  for (long k = 0; k <= 40; ++k)
    for (long q = 1; q <= 4; ++q)
      for (long ell = -6; ell <= 6; ++ell) {
        const long i0 = start_oracle(k, ell, q), i1 = start_oracle(k, ell + 1, q);
        if (i0 < 0 || i0 > k || i1 < 0 || i1 > k) {
          EXPECT_THROW(adjacent_binomial_ratio(k, ell, q), DomainError);
          continue;
        }
        const mpq_class exact(binom(k, i1), binom(k, i0));
        EXPECT_NEAR(adjacent_binomial_ratio(k, ell, q) / mpq_class(exact).get_d(), 1.0, 1e-12)
            << "k=" << k << " ell=" << ell << " q=" << q;
      }
}

TEST(AdjacentRatio, ZeroWidthIsOne) {
  EXPECT_EQ(adjacent_binomial_ratio(10, 0, 0), 1.0);
  EXPECT_EQ(adjacent_binomial_ratio(1000, 3, 0), 1.0);
  EXPECT_THROW(adjacent_binomial_ratio(-1, 0, 1), DomainError);
}

TEST(ErrorExponent, Examples) {
  const auto e = predicted_error_exponent(2.0, TruncationParams(0.6, 0.05), 0.1);
  ASSERT_TRUE(std::holds_alternative<double>(e));
  EXPECT_NEAR(std::get<double>(e), -0.02, 1e-15);
  EXPECT_TRUE(std::holds_alternative<LittleO>(predicted_error_exponent(
      std::numeric_limits<double>::infinity(), TruncationParams(0.5, 0.04), 0.1)));
  EXPECT_THROW(predicted_error_exponent(2.0, TruncationParams(0.6, 0.05), 0.6), DomainError);
  EXPECT_THROW(predicted_error_exponent(1.0, TruncationParams(0.6, 0.05), 0.1), DomainError);
  EXPECT_THROW(predicted_error_exponent(2.0, TruncationParams(0.6, 0.05), 0.0), DomainError);
}
