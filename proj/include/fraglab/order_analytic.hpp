#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "fraglab/benford.hpp"

namespace fraglab::order {

/// Top-d order statistics of m i.i.d. draws from a marginal f, F.
class OrderStatModel {
 public:
  using Fn = std::function<double(double)>;

  static OrderStatModel gaussian(int m, int d);
  /// Marginal phi + A with CDF Phi + B_err. The declared sup norms are
  /// checked on a grid and a violation throws DomainError.
  static OrderStatModel perturbed(int m, int d, Fn A, Fn B_err, double sup_A, double sup_B);

  int m() const { return m_; }
  int d() const { return d_; }
  bool is_gaussian() const { return gaussian_; }
  double pdf(double x) const { return pdf_(x); }
  double cdf(double x) const { return cdf_(x); }

 private:
  OrderStatModel(int m, int d);
  int m_, d_;
  bool gaussian_ = true;
  Fn pdf_, cdf_;
};

/// m! / (m-d)!.
std::int64_t order_constant(int m, int d);

/// Joint density of the top d order statistics at ascending z, 0 off the ordered region.
double joint_order_pdf(const OrderStatModel& model, const std::vector<double>& z);
/// Gaussian main term of the same density.
double main_term_pdf(int m, int d, const std::vector<double>& z);

/// Integral of joint_order_pdf over the ordered region of R^d (d <= 3).
double ordered_region_integral(const OrderStatModel& model, double rel_tol = 1e-9);

enum class Scheme { nested_adaptive, ordered_gaussian_mc };
std::string scheme_name(Scheme s);

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  /// Lower bound on the smallest of the top d coordinates.
  double lower_cut = -std::numeric_limits<double>::infinity();
  std::int64_t max_evals = 20'000'000;
  std::int64_t mc_samples = 1'000'000;
  std::uint64_t seed = 0x5eed;
  /// Forces a scheme; by default nested quadrature for d <= 3, Monte Carlo above.
  std::optional<Scheme> scheme;
  void validate() const;
  Scheme resolve(int d) const { return scheme ? *scheme : (d <= 3 ? Scheme::nested_adaptive : Scheme::ordered_gaussian_mc); }
};

struct Evaluation {
  double value = 0.0;
  double achieved_tol = 0.0;
  Scheme scheme = Scheme::nested_adaptive;
  /// m * P(Z > |lower_cut|): mass the lower cut can remove; 0 without a cut.
  double tail_cost = 0.0;
};

/// P(Y <= y) for Y the sum of the top d of m standard normals, restricted by lower_cut.
Evaluation main_cdf(int m, int d, double y, const QuadratureSpec& spec = {});
/// Density of the same quantity.
Evaluation main_density(int m, int d, double y, const QuadratureSpec& spec = {});

/// Sum over n of the main density's mass on ((a+n)/sqrt N, (b+n)/sqrt N).
///
/// n runs from -ceil(dCN) to ceil(dCN)-1. Windows with |y| > 9d are skipped
/// and their total possible mass is added to achieved_tol instead.
Evaluation equidistribution_sum(int m, int d, int N, double C, const benford::IntervalQuery& q,
                                const QuadratureSpec& spec = {});

struct AkSequence {
  int d;
  /// A_{d-2}, ..., A_0.
  std::vector<mpq_class> exact;
  std::vector<double> values;
};
AkSequence ak_sequence(int d);

/// Upper tail of the standard normal beyond g >= 0.
double gaussian_tail(double g);

/// phi(y/2) + phi(y + C sqrt N).
double d2_envelope(int m, double y, double C, int N);

struct GridFunction {
  double h;
  double x0;
  std::vector<double> values;
  double x(std::size_t i) const { return x0 + h * static_cast<double>(i); }
};

/// Trapezoid-rule d-fold self-convolution of the standard normal density on [-L, L].
GridFunction gaussian_convolution(int d, double h = 0.02, double L = 40.0);

/// Smallest c with |d/dy main_density| <= c * d2_envelope on [-2C sqrt N, 2C sqrt N].
double fitted_envelope_constant(int m, double C, int N, int grid_points = 401);

}  // namespace fraglab::order
