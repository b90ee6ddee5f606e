#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

namespace fraglab::benford {

/// Mantissas closer than this to 1 fold back to 0; also the atom merge width.
inline constexpr double kMantissaEps = 1e-12;

/// Numeral base B >= 2.
class Base {
 public:
  explicit Base(long long b);
  long long value() const { return b_; }
  double ln() const { return ln_b_; }
  /// log_B(x); uses log10/log2 directly for those bases.
  double log(double x) const;
  /// B^t.
  double pow(double t) const;

 private:
  long long b_;
  double ln_b_;
};

double significand(double x, const Base& B);
double mantissa(double x, const Base& B);
/// Fractional part of a base-B logarithm with the fold-back near 1.
double mantissa_of_log(double log_b_x);
double benford_digit_prob(long long d, const Base& B);
double benford_cdf(double s, const Base& B);

/// Interval (a,b) of mantissas, 0 <= a < b <= 1.
///
/// Open on both sides, except that a = 0 also admits mantissa 0 itself. Without
/// that, an exact integer power of B would fall outside every interval.
struct IntervalQuery {
  double a;
  double b;
  IntervalQuery(double a_, double b_);
  bool contains(double t) const { return (t > a || (a == 0.0 && t == 0.0)) && t < b; }
};

struct Atom {
  double mantissa;
  double log_weight;
};

/// Weighted collection of mantissa atoms with weights in natural-log scale.
class MantissaDistribution {
 public:
  void add(double mantissa, double log_weight);
  void reserve(std::size_t n) { atoms_.reserve(n); }
  /// Appends another distribution's raw atoms; legal only before finalize.
  void append(const MantissaDistribution& other);
  /// Sorts, merges atoms closer than kMantissaEps and normalizes to unit mass.
  void finalize();

  bool normalized() const { return normalized_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

  /// Header `mantissa,weight`, linear weights, 17 significant digits.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<Atom> atoms_;
  bool normalized_ = false;
};

double interval_mass(const MantissaDistribution& dist, const IntervalQuery& q);

/// Sup distance between the empirical CDF and the uniform law on [0,1).
double ks_to_benford(const MantissaDistribution& dist);

}  // namespace fraglab::benford
