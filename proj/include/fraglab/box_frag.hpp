#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraglab/benford.hpp"

namespace fraglab::box {

/// Law of a single proportion cut P, described through log_B P.
class CutDistribution {
 public:
  enum class Kind { log_uniform, beta, fixed, table };

  /// log_B P uniform on (lo, hi).
  static CutDistribution log_uniform(double lo, double hi, const benford::Base& B);
  /// P ~ Beta(a, b) conditioned on P >= p_min, which keeps log P bounded.
  static CutDistribution beta(double a, double b, double p_min, const benford::Base& B);
  /// P = p always. The spread is zero, so z statistics are undefined.
  static CutDistribution fixed(double p, const benford::Base& B);
  /// Piecewise-constant density for log_B P: weights[i] on (edges[i], edges[i+1]).
  static CutDistribution table(std::vector<double> edges, std::vector<double> weights,
                               const benford::Base& B);

  Kind kind() const { return kind_; }
  const benford::Base& base() const { return base_; }
  /// E[log_B P].
  double mu() const { return mu_; }
  /// SD of log_B P.
  double sigma() const { return sigma_; }
  /// |log_B P| <= C on the support.
  double support_bound() const { return C_; }
  double log_lo() const { return lo_; }
  double log_hi() const { return hi_; }
  /// True when every cut is a genuine shrink, i.e. P < 1 almost surely.
  bool shrinking() const { return hi_ < 0.0 || kind_ == Kind::beta; }

  /// log_B P for a uniform u in (0,1).
  double sample_log(double u) const;
  double sample(double u) const { return base_.pow(sample_log(u)); }

  std::string describe() const;

 private:
  CutDistribution(Kind k, const benford::Base& B) : kind_(k), base_(B) {}
  Kind kind_;
  benford::Base base_;
  double mu_ = 0.0, sigma_ = 0.0, C_ = 0.0, lo_ = 0.0, hi_ = 0.0;
  // beta
  double a_ = 0.0, b_ = 0.0, p_min_ = 0.0, cdf_min_ = 0.0;
  // table
  std::vector<double> edges_, cum_;
};

struct Statistic {
  enum class Kind { vol_d, max_face, z_vector };
  Kind kind = Kind::max_face;
  int d = 1;
};

struct ProcessConfig {
  int m;
  int N;
  CutDistribution cut;
  int trials;
  std::uint64_t seed;
  Statistic statistic;
  const benford::Base& base() const { return cut.base(); }
  void validate() const;
};

/// Draw budget (trials * N * m) for one Monte Carlo run.
inline constexpr double kDefaultDrawBudget = 2e9;

/// log_B side lengths after N stages from the unit box; pure in (seed, trial).
std::vector<double> simulate_log_sides(const ProcessConfig& cfg, std::int64_t trial);
/// Running log_B side of one axis after each stage 0..N.
std::vector<double> simulate_log_side_path(const ProcessConfig& cfg, std::int64_t trial, int axis);

std::vector<double> z_statistic(const std::vector<double>& log_sides, const CutDistribution& cut, int N);

/// log_B of 2^{m-d} e_d(sides).
double log_vol_d(const std::vector<double>& log_sides, int d, const benford::Base& B);
double vol_d(const std::vector<double>& log_sides, int d, const benford::Base& B);
/// Direct subset enumeration of the same quantity; small m only.
double vol_d_by_subsets(const std::vector<double>& log_sides, int d, const benford::Base& B);

/// Sum of the d largest log sides.
double max_face_volume(const std::vector<double>& log_sides, int d);

benford::MantissaDistribution monte_carlo_mantissa(const ProcessConfig& cfg,
                                                   double draw_budget = kDefaultDrawBudget);

/// Per-trial sum of the d largest z entries.
std::vector<double> monte_carlo_y_samples(const ProcessConfig& cfg, int d,
                                          double draw_budget = kDefaultDrawBudget);

}  // namespace fraglab::box
