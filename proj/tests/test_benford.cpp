#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fraglab/benford.hpp"
#include "fraglab/errors.hpp"

using namespace fraglab;
using namespace fraglab::benford;

namespace {

MantissaDistribution equal_atoms(std::initializer_list<double> ts) {
  MantissaDistribution d;
  for (double t : ts) d.add(t, 0.0);
  d.finalize();
  return d;
}

}  // namespace

TEST(Base, RejectsBelowTwo) {
  EXPECT_THROW(Base(1), DomainError);
  EXPECT_THROW(Base(-10), DomainError);
  EXPECT_NO_THROW(Base(2));
}

TEST(Significand, ExactPowerShifts) {
  const Base ten(10);
  EXPECT_NEAR(significand(250, ten), 2.5, 1e-15);
  EXPECT_EQ(significand(1.0, ten), 1.0);
  EXPECT_NEAR(significand(0.00234, ten), 2.34, 1e-14);
  EXPECT_THROW(significand(0.0, ten), DomainError);
  EXPECT_THROW(significand(-3.0, ten), DomainError);
}

TEST(Significand, InvariantUnderPowersOfTheBase) {
  for (long long b : {2, 3, 10, 16}) {
    const Base B(b);
    for (double x : {0.37, 1.5, 7.25, 123.456}) {
      const double s = significand(x, B);
      EXPECT_GE(s, 1.0);
      EXPECT_LT(s, static_cast<double>(b));
      for (int k = -8; k <= 8; ++k) EXPECT_NEAR(significand(x * std::pow(b, k), B), s, 1e-12 * s);
    }
  }
}

TEST(Mantissa, Examples) {
  EXPECT_EQ(mantissa(100, Base(10)), 0.0);
  // log10(2) from a long double evaluation: 0.30102999566398119521
  EXPECT_NEAR(mantissa(2, Base(10)), 0.30102999566398119521, 1e-15);
  EXPECT_EQ(mantissa(0.5, Base(2)), 0.0);
  EXPECT_THROW(mantissa(0.0, Base(10)), DomainError);
}

TEST(Mantissa, FoldsBackNearOne) {
  EXPECT_EQ(mantissa_of_log(3.0 - 1e-13), 0.0);
  EXPECT_EQ(mantissa_of_log(-2.0), 0.0);
  EXPECT_NEAR(mantissa_of_log(-0.25), 0.75, 1e-15);
  EXPECT_EQ(mantissa(1000.0000000000001, Base(10)), 0.0);
}

TEST(Mantissa, EqualsLogOfSignificand) {
  for (long long b : {2, 7, 10}) {
    const Base B(b);
    for (double x : {0.0031, 0.9, 2.0, 55.5, 1e10}) {
      EXPECT_NEAR(mantissa(x, B), B.log(significand(x, B)), 1e-12);
    }
  }
}

TEST(DigitProb, ExamplesAndNormalization) {
  EXPECT_NEAR(benford_digit_prob(1, Base(10)), 0.30103, 1e-5);
  EXPECT_NEAR(benford_digit_prob(2, Base(10)), 0.17609, 1e-5);
  EXPECT_EQ(benford_digit_prob(1, Base(2)), 1.0);
  EXPECT_THROW(benford_digit_prob(0, Base(10)), DomainError);
  EXPECT_THROW(benford_digit_prob(10, Base(10)), DomainError);
  for (long long b = 2; b <= 16; ++b) {
    double s = 0.0;
    for (long long d = 1; d < b; ++d) s += benford_digit_prob(d, Base(b));
    EXPECT_NEAR(s, 1.0, 1e-12) << "base " << b;
  }
}

TEST(BenfordCdf, EndpointsMonotoneAndDigitOneMass) {
  const Base ten(10);
  EXPECT_EQ(benford_cdf(1, ten), 0.0);
  EXPECT_EQ(benford_cdf(10, ten), 1.0);
  EXPECT_NEAR(benford_cdf(2, ten), benford_digit_prob(1, ten), 1e-15);
  EXPECT_THROW(benford_cdf(0.5, ten), DomainError);
  EXPECT_THROW(benford_cdf(10.5, ten), DomainError);
  double prev = -1.0;
  for (int i = 0; i < 1000; ++i) {
    const double v = benford_cdf(1.0 + 9.0 * i / 999.0, ten);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(IntervalQuery, Validation) {
  EXPECT_THROW(IntervalQuery(0.5, 0.5), DomainError);
  EXPECT_THROW(IntervalQuery(-0.1, 0.5), DomainError);
  EXPECT_THROW(IntervalQuery(0.2, 1.1), DomainError);
  const IntervalQuery q(0.2, 0.4);
  EXPECT_FALSE(q.contains(0.2));
  EXPECT_FALSE(q.contains(0.4));
  EXPECT_TRUE(q.contains(0.3));
  EXPECT_TRUE(IntervalQuery(0.0, 0.5).contains(0.0));
}

TEST(IntervalMass, Examples) {
  EXPECT_NEAR(interval_mass(equal_atoms({0.1, 0.5, 0.9}), {0.0, 0.6}), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(interval_mass(equal_atoms({0.1, 0.5, 0.9}), {0.6, 0.8}), 0.0);
  EXPECT_EQ(interval_mass(equal_atoms({0.25, 0.75}), {0.2, 0.8}), 1.0);
  MantissaDistribution raw;
  raw.add(0.5, 0.0);
  EXPECT_THROW(interval_mass(raw, {0.0, 1.0}), StateError);
}

TEST(IntervalMass, FullIntervalHoldsAllMass) {
  MantissaDistribution d;
  for (int i = 1; i < 50; ++i) d.add(i / 50.0, -0.1 * i);
  d.finalize();
  EXPECT_NEAR(interval_mass(d, {0.0, 1.0}), 1.0, 1e-12);
}

TEST(Distribution, FinalizeSortsMergesAndNormalizes) {
  MantissaDistribution d;
  d.add(0.6, std::log(3.0));
  d.add(0.2, 0.0);
  d.add(0.6 + 1e-14, 0.0);
  d.finalize();
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.atoms()[0].mantissa, 0.2);
  EXPECT_EQ(d.atoms()[1].mantissa, 0.6);
  EXPECT_NEAR(std::exp(d.atoms()[0].log_weight), 0.2, 1e-15);
  EXPECT_NEAR(std::exp(d.atoms()[1].log_weight), 0.8, 1e-15);
  EXPECT_THROW(d.add(0.1, 0.0), StateError);
  MantissaDistribution bad;
  EXPECT_THROW(bad.add(1.0, 0.0), DomainError);
}

TEST(Distribution, CsvHasHeaderAndSeventeenDigits) {
  const auto d = equal_atoms({0.1, 0.7});
  std::ostringstream os;
  d.write_csv(os);
  EXPECT_EQ(os.str(), "mantissa,weight\n0.10000000000000001,0.5\n0.69999999999999996,0.5\n");
}

TEST(Ks, Examples) {
  EXPECT_NEAR(ks_to_benford(equal_atoms({0.5})), 0.5, 1e-15);
  EXPECT_NEAR(ks_to_benford(equal_atoms({0.25, 0.75})), 0.25, 1e-15);
  MantissaDistribution grid;
  for (int i = 0; i < 1000; ++i) grid.add(i / 1000.0, 0.0);
  grid.finalize();
  EXPECT_LE(ks_to_benford(grid), 1.0 / 1000 + 1e-12);
  EXPECT_THROW(ks_to_benford(MantissaDistribution{}), DomainError);
}

TEST(Ks, AtomAtZeroIsMaximallyFar) {
  // The CDF jumps to 1 at t = 0 while the uniform CDF is still 0 there.
  EXPECT_EQ(ks_to_benford(equal_atoms({0.0})), 1.0);
}
