#pragma once

#include <cstdint>
#include <vector>

#include "fraglab/benford.hpp"
#include "fraglab/compositions.hpp"

namespace fraglab::stick {

/// Fixed cut proportions p_1..p_m, each in (0,1), summing to 1.
class ProportionVector {
 public:
  explicit ProportionVector(std::vector<double> p);
  int m() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return p_; }

 private:
  std::vector<double> p_;
};

/// ln(N! / (k_1! ... k_m!)).
double log_multinomial(const Composition& c);
/// Exact multinomial for N <= 20.
std::uint64_t multinomial_exact(const Composition& c);

/// log_B of p_1^{k_1} ... p_m^{k_m}.
double stick_log_length(const Composition& c, const ProportionVector& p, const benford::Base& B);
/// y_i = log_B(p_i / p_{i+1}) for i = 1..m-1.
std::vector<double> ratio_exponents(const ProportionVector& p, const benford::Base& B);

/// Fraction of the m^N sticks at stage N whose mantissa lies in q.
double exact_interval_probability(int N, const ProportionVector& p, const benford::Base& B,
                                  const benford::IntervalQuery& q);

inline constexpr std::uint64_t kDefaultTermBudget = 10'000'000;

/// One atom per composition, weighted by its multinomial share.
benford::MantissaDistribution exact_mantissa_distribution(
    int N, const ProportionVector& p, const benford::Base& B,
    std::uint64_t term_budget = kDefaultTermBudget);

/// Expands the fragmentation tree stick by stick; m^N must stay within budget.
benford::MantissaDistribution brute_force_mantissa(
    int N, const ProportionVector& p, const benford::Base& B,
    std::uint64_t stick_budget = kDefaultTermBudget);

bool verify_multinomial_factorization(const Composition& c);
/// m^N against both multinomial sums, in exact integers; needs N <= 20, m <= 6.
bool verify_power_identity(int N, int m);

}  // namespace fraglab::stick
