#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include "fraglab/box_frag.hpp"
#include "fraglab/errors.hpp"
#include "fraglab/numerics.hpp"
#include "fraglab/philox.hpp"

using namespace fraglab;
using namespace fraglab::box;
using benford::Base;

namespace {

const double kSqrt3 = std::sqrt(3.0);

ProcessConfig lu_config(int m, int N, int trials, Statistic s, std::uint64_t seed = 2024) {
  return ProcessConfig{m, N, CutDistribution::log_uniform(-kSqrt3, kSqrt3, Base(10)), trials, seed, s};
}

double ks_vs_normal(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = normal_cdf(x[i]);
    ks = std::max({ks, std::fabs(F - i / n), std::fabs((i + 1) / n - F)});
  }
  return ks;
}

}  // namespace

TEST(Philox, KnownAnswerVectors) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32_10({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}),
            (A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, UniformStaysOpen) {
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const double u = stream_uniform(7, i, 1, 2);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Cut, FixedAlwaysSame) {
  const auto c = CutDistribution::fixed(0.5, Base(10));
  for (double u : {1e-9, 0.3, 0.999}) EXPECT_DOUBLE_EQ(c.sample(u), 0.5);
  EXPECT_EQ(c.sigma(), 0.0);
  EXPECT_THROW(CutDistribution::fixed(0.0, Base(10)), DomainError);
}

TEST(Cut, LogUniformMoments) {
  const auto c = CutDistribution::log_uniform(-kSqrt3, kSqrt3, Base(10));
  EXPECT_NEAR(c.mu(), 0.0, 1e-15);
  EXPECT_NEAR(c.sigma(), 1.0, 1e-15);
  EXPECT_NEAR(c.support_bound(), kSqrt3, 1e-15);
  const int n = 1000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = c.sample_log(stream_uniform(99, static_cast<std::uint64_t>(i), 0, 0));
    ASSERT_GT(x, -kSqrt3);
    ASSERT_LT(x, kSqrt3);
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  EXPECT_NEAR(mean, 0.0, 0.005);
  EXPECT_NEAR(s2 / n - mean * mean, 1.0, 0.01);
  EXPECT_THROW(CutDistribution::log_uniform(1.0, 1.0, Base(10)), DomainError);
}

TEST(Cut, BetaAndTableMoments) {
  const Base ten(10);
  const auto b = CutDistribution::beta(2.0, 3.0, 1e-6, ten);
  EXPECT_TRUE(b.shrinking());
  const auto t = CutDistribution::table({-2.0, -1.0, 0.0}, {1.0, 3.0}, ten);
  // Mixture of U(-2,-1) w.p. 1/4 and U(-1,0) w.p. 3/4.
  EXPECT_NEAR(t.mu(), -0.75, 1e-12);
  EXPECT_NEAR(t.sigma() * t.sigma(), 1.0 / 12 + 0.25 * 2.25 + 0.75 * 0.25 - 0.5625, 1e-12);
  for (const auto* c : {&b, &t}) {
    const int n = 400000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = c->sample_log(stream_uniform(5, static_cast<std::uint64_t>(i), 0, 0));
      ASSERT_LE(std::fabs(x), c->support_bound() + 1e-12);
      s += x;
      s2 += x * x;
    }
    const double mean = s / n;
    EXPECT_NEAR(mean, c->mu(), 5 * c->sigma() / std::sqrt(n)) << c->describe();
    EXPECT_NEAR(std::sqrt(s2 / n - mean * mean), c->sigma(), 0.01 * c->sigma()) << c->describe();
  }
  EXPECT_THROW(CutDistribution::table({0.0, -1.0}, {1.0}, ten), DomainError);
  EXPECT_THROW(CutDistribution::table({-1.0, 0.0}, {1.0, 2.0}, ten), DomainError);
}

TEST(Simulate, Examples) {
  auto cfg = lu_config(3, 0, 1, {});
  EXPECT_EQ(simulate_log_sides(cfg, 0), std::vector<double>(3, 0.0));
  const ProcessConfig half{4, 5, CutDistribution::fixed(0.5, Base(2)), 1, 1, {}};
  for (double v : simulate_log_sides(half, 3)) EXPECT_DOUBLE_EQ(v, -5.0);
}

TEST(Simulate, CentralLimitSpread) {
  const auto cfg = lu_config(1, 100, 100000, {});
  double s = 0.0, s2 = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    const double v = simulate_log_sides(cfg, t)[0] / 10.0;
    s += v;
    s2 += v * v;
  }
  const double mean = s / cfg.trials;
  EXPECT_NEAR(std::sqrt(s2 / cfg.trials - mean * mean), 1.0, 0.01);
}

TEST(ZStatistic, Examples) {
  const auto c = CutDistribution::log_uniform(-kSqrt3, kSqrt3, Base(10));
  EXPECT_EQ(z_statistic({0.0, 0.0}, c, 25), (std::vector<double>{0.0, 0.0}));
  EXPECT_NEAR(z_statistic({5.0}, c, 25)[0], 1.0, 1e-15);
  EXPECT_THROW(z_statistic({0.0}, c, 0), DomainError);
  const auto shifted = CutDistribution::log_uniform(-3.0, -1.0, Base(10));
  EXPECT_NEAR(z_statistic({-2.0 * 16}, shifted, 16)[0], 0.0, 1e-13);
  EXPECT_THROW(z_statistic({0.0}, CutDistribution::fixed(0.5, Base(10)), 4), DomainError);
}

TEST(ZStatistic, NearlyStandardNormal) {
  const auto cfg = lu_config(1, 100, 100000, {});
  std::vector<double> z;
  z.reserve(static_cast<std::size_t>(cfg.trials));
  for (int t = 0; t < cfg.trials; ++t) z.push_back(z_statistic(simulate_log_sides(cfg, t), cfg.cut, cfg.N)[0]);
  EXPECT_LE(ks_vs_normal(z), 0.01);
}

TEST(Volume, Examples) {
  const Base ten(10);
  const std::vector<double> cube(3, 0.0);
  EXPECT_NEAR(vol_d(cube, 1, ten), 12.0, 1e-12);
  EXPECT_NEAR(vol_d(cube, 2, ten), 6.0, 1e-12);
  EXPECT_NEAR(vol_d(cube, 3, ten), 1.0, 1e-12);
  const std::vector<double> s123 = {0.0, std::log10(2.0), std::log10(3.0)};
  EXPECT_NEAR(vol_d(s123, 2, ten), 22.0, 1e-12);
  EXPECT_THROW(vol_d(s123, 0, ten), DomainError);
  EXPECT_THROW(vol_d(s123, 4, ten), DomainError);
}

TEST(Volume, HugeAndTinySidesStayFinite) {
  const Base ten(10);
  const std::vector<double> sides = {-900.0, -1200.0, -400.0, -2000.0};
  const double lv = log_vol_d(sides, 2, ten);
  // Dominated by the two largest sides; the rest contributes below 1e-400.
  EXPECT_NEAR(lv, -1300.0 + 2.0 * std::log10(2.0), 1e-9);
}

TEST(Volume, SymmetricPolynomialMatchesSubsets) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-3.0, 1.0);
  const Base ten(10);
  for (int m = 1; m <= 8; ++m)
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> s(static_cast<std::size_t>(m));
      for (double& v : s) v = U(rng);
      for (int d = 1; d <= m; ++d) {
        const double a = vol_d(s, d, ten), b = vol_d_by_subsets(s, d, ten);
        EXPECT_NEAR(a / b, 1.0, 1e-9) << "m=" << m << " d=" << d;
      }
    }
}

TEST(MaxFace, Examples) {
  const std::vector<double> s = {0.0, std::log10(2.0), std::log10(3.0)};
  EXPECT_NEAR(max_face_volume(s, 2), std::log10(6.0), 1e-15);
  EXPECT_EQ(max_face_volume(s, 3), s[0] + s[1] + s[2]);
  EXPECT_EQ(max_face_volume({-1.0, 4.0, 2.5}, 1), 4.0);
  EXPECT_THROW(max_face_volume(s, 0), DomainError);
}

TEST(MaxFace, MatchesSortExactly) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> G(0.0, 10.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> s(7);
    for (double& v : s) v = G(rng);
    std::vector<double> sorted = s;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (int d = 1; d <= 7; ++d) {
      double top = 0.0;
      for (int i = 0; i < d; ++i) top += sorted[static_cast<std::size_t>(i)];
      EXPECT_EQ(max_face_volume(s, d), top);
    }
  }
}

TEST(ScaleEquivariance, ShiftBySameConstant) {
  const Base ten(10);
  // Dyadic values keep the additions exact.
  const std::vector<double> s = {-1.25, 0.5, -3.75, 0.125, -0.625};
  for (double c : {0.25, -2.5, 7.0}) {
    std::vector<double> t = s;
    for (double& v : t) v += c;
    for (int d = 1; d <= 5; ++d) {
      EXPECT_EQ(max_face_volume(t, d), max_face_volume(s, d) + d * c);
      EXPECT_NEAR(vol_d(t, d, ten) / (vol_d(s, d, ten) * std::pow(10.0, d * c)), 1.0, 1e-9);
    }
  }
}

TEST(DescendingChain, ShrinkingCutsNeverGrow) {
  const ProcessConfig cfg{3, 60, CutDistribution::log_uniform(-2.0, -0.1, Base(10)), 50, 9, {}};
  ASSERT_TRUE(cfg.cut.shrinking());
  for (int t = 0; t < cfg.trials; ++t)
    for (int axis = 0; axis < cfg.m; ++axis) {
      const auto path = simulate_log_side_path(cfg, t, axis);
      ASSERT_EQ(path.size(), 61u);
      for (std::size_t j = 1; j < path.size(); ++j) EXPECT_LE(path[j], path[j - 1]);
      EXPECT_EQ(path.back(), simulate_log_sides(cfg, t)[static_cast<std::size_t>(axis)]);
    }
}

TEST(MonteCarlo, FixedHalfBaseTwoAtZero) {
  for (int d = 1; d <= 3; ++d) {
    const ProcessConfig cfg{3, 17, CutDistribution::fixed(0.5, Base(2)), 200, 1, {Statistic::Kind::max_face, d}};
    const auto dist = monte_carlo_mantissa(cfg);
    ASSERT_EQ(dist.size(), 1u);
    EXPECT_EQ(dist.atoms()[0].mantissa, 0.0);
  }
}

TEST(MonteCarlo, LogUniformLooksBenford) {
  EXPECT_LE(benford::ks_to_benford(monte_carlo_mantissa(lu_config(3, 100, 100000, {Statistic::Kind::max_face, 1}))), 0.02);
  EXPECT_LE(benford::ks_to_benford(monte_carlo_mantissa(lu_config(3, 100, 100000, {Statistic::Kind::vol_d, 2}))), 0.02);
}

TEST(MonteCarlo, ReproducibleAcrossWorkerCounts) {
  const auto cfg = lu_config(3, 40, 20000, {Statistic::Kind::vol_d, 2});
  ::setenv("FRAGLAB_THREADS", "1", 1);
  const auto a = monte_carlo_mantissa(cfg);
  ::setenv("FRAGLAB_THREADS", "5", 1);
  const auto b = monte_carlo_mantissa(cfg);
  ::unsetenv("FRAGLAB_THREADS");
  const auto c = monte_carlo_mantissa(cfg);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_EQ(a.size(), c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.atoms()[i].mantissa, b.atoms()[i].mantissa);
    EXPECT_EQ(a.atoms()[i].log_weight, b.atoms()[i].log_weight);
    EXPECT_EQ(a.atoms()[i].mantissa, c.atoms()[i].mantissa);
  }
  const auto other = monte_carlo_mantissa(lu_config(3, 40, 20000, {Statistic::Kind::vol_d, 2}, 2025));
  EXPECT_NE(other.atoms()[0].mantissa, a.atoms()[0].mantissa);
}

TEST(MonteCarlo, Errors) {
  EXPECT_THROW(monte_carlo_mantissa(lu_config(3, 1000, 1000, {}), 1e5), CapacityError);
  EXPECT_THROW(monte_carlo_mantissa(lu_config(3, 10, 10, {Statistic::Kind::z_vector, 1})), DomainError);
  EXPECT_THROW(lu_config(3, 10, 0, {}).validate(), DomainError);
  EXPECT_THROW(lu_config(3, 10, 10, {Statistic::Kind::max_face, 4}).validate(), DomainError);
  EXPECT_THROW(monte_carlo_y_samples(lu_config(3, 10, 10, {}), 4), DomainError);
}
