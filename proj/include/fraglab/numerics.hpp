#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace fraglab {

/// Streaming log-sum-exp accumulator over natural-log terms.
///
/// Keeps a running maximum and the sum of exp(term - max), so that sums of
/// terms spanning thousands of orders of magnitude stay representable.
class LogSumExp {
 public:
  void add(double log_term) {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (empty()) {
      max_ = log_term;
      scaled_sum_ = 1.0;
    } else if (log_term <= max_) {
      scaled_sum_ += std::exp(log_term - max_);
    } else {
      scaled_sum_ = scaled_sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }

  void merge(const LogSumExp& other) {
    if (other.empty()) return;
    if (empty()) {
      *this = other;
      return;
    }
    if (other.max_ <= max_) {
      scaled_sum_ += other.scaled_sum_ * std::exp(other.max_ - max_);
    } else {
      scaled_sum_ = scaled_sum_ * std::exp(max_ - other.max_) + other.scaled_sum_;
      max_ = other.max_;
    }
  }

  bool empty() const { return scaled_sum_ == 0.0; }

  /// Natural log of the accumulated sum; -inf when nothing was added.
  double value() const {
    if (empty()) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(scaled_sum_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_sum_ = 0.0;
};

/// ln(k!) for k = 0..n, filled once via lgamma.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(int n) : table_(static_cast<std::size_t>(n) + 1) {
    for (int k = 0; k <= n; ++k) table_[k] = std::lgamma(k + 1.0);
  }
  double operator()(int k) const { return table_[static_cast<std::size_t>(k)]; }
  int size() const { return static_cast<int>(table_.size()); }

 private:
  std::vector<double> table_;
};

inline double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double normal_pdf(double x) {
  constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343819;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

/// Standard normal CDF, accurate in both tails.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace fraglab
