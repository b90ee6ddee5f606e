#include "fraglab/box_frag.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "fraglab/errors.hpp"
#include "fraglab/numerics.hpp"
#include "fraglab/parallel.hpp"
#include "fraglab/philox.hpp"

namespace fraglab::box {

namespace {

constexpr std::int64_t kTrialChunk = 2048;

double draw_log(const ProcessConfig& cfg, std::int64_t trial, int axis, int stage) {
  return cfg.cut.sample_log(stream_uniform(cfg.seed, static_cast<std::uint64_t>(trial),
                                           static_cast<std::uint32_t>(axis),
                                           static_cast<std::uint32_t>(stage)));
}

void check_d(int d, std::size_t m) {
  if (d < 1 || static_cast<std::size_t>(d) > m) throw DomainError("d must lie in 1..m");
}

void check_budget(const ProcessConfig& cfg, double budget) {
  const double draws = static_cast<double>(cfg.trials) * cfg.N * cfg.m;
  if (draws > budget) {
    std::ostringstream os;
    os << "Monte Carlo run needs " << draws << " draws, above the draw budget of " << budget;
    throw CapacityError(os.str());
  }
}

}  // namespace

CutDistribution CutDistribution::log_uniform(double lo, double hi, const benford::Base& B) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw DomainError("log_uniform needs finite lo < hi");
  CutDistribution c(Kind::log_uniform, B);
  c.lo_ = lo;
  c.hi_ = hi;
  c.mu_ = 0.5 * (lo + hi);
  c.sigma_ = (hi - lo) / std::sqrt(12.0);
  c.C_ = std::max(std::fabs(lo), std::fabs(hi));
  return c;
}

CutDistribution CutDistribution::beta(double a, double b, double p_min, const benford::Base& B) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("beta shape parameters must be positive");
  if (!(p_min > 0.0 && p_min < 1.0)) throw DomainError("beta cut needs 0 < p_min < 1 to keep log P bounded");
  CutDistribution c(Kind::beta, B);
  c.a_ = a;
  c.b_ = b;
  c.p_min_ = p_min;
  c.cdf_min_ = boost::math::ibeta(a, b, p_min);
  if (!(c.cdf_min_ < 1.0)) throw DomainError("beta cut leaves no mass above p_min");
  c.lo_ = B.log(p_min);
  c.hi_ = 0.0;
  c.C_ = std::fabs(c.lo_);
  // Moments of log_B P under the truncated law, integrating over t = ln P.
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double mass = 1.0 - c.cdf_min_;
  auto density = [&](double t) {
    const double x = std::exp(t);
    return x >= 1.0 ? 0.0 : boost::math::ibeta_derivative(a, b, x) * x / mass;
  };
  const double lnlo = std::log(p_min);
  const double m1 = integrator.integrate([&](double t) { return t * density(t); }, lnlo, 0.0);
  const double m2 = integrator.integrate([&](double t) { return t * t * density(t); }, lnlo, 0.0);
  c.mu_ = m1 / B.ln();
  c.sigma_ = std::sqrt(std::max(0.0, m2 - m1 * m1)) / B.ln();
  return c;
}

CutDistribution CutDistribution::fixed(double p, const benford::Base& B) {
  if (!(p > 0.0 && std::isfinite(p))) throw DomainError("fixed cut needs a positive proportion");
  CutDistribution c(Kind::fixed, B);
  c.lo_ = c.hi_ = c.mu_ = B.log(p);
  c.sigma_ = 0.0;
  c.C_ = std::fabs(c.mu_);
  return c;
}

CutDistribution CutDistribution::table(std::vector<double> edges, std::vector<double> weights,
                                       const benford::Base& B) {
  if (edges.size() < 2 || weights.size() + 1 != edges.size())
    throw DomainError("table needs n+1 edges for n weights");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (!(std::isfinite(edges[i]) && std::isfinite(edges[i + 1]) && edges[i] < edges[i + 1]))
      throw DomainError("table edges must be finite and strictly increasing");
  for (double w : weights)
    if (!(w >= 0.0 && std::isfinite(w))) throw DomainError("table weights must be finite and non-negative");
  CutDistribution c(Kind::table, B);
  c.cum_.assign(1, 0.0);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    const double mass = weights[i] * (hi - lo);
    c.cum_.push_back(c.cum_.back() + mass);
    m1 += mass * 0.5 * (lo + hi);
    m2 += mass * (lo * lo + lo * hi + hi * hi) / 3.0;
  }
  const double total = c.cum_.back();
  if (!(total > 0.0)) throw DomainError("table has zero total mass");
  for (double& v : c.cum_) v /= total;
  m1 /= total;
  m2 /= total;
  c.lo_ = edges.front();
  c.hi_ = edges.back();
  c.mu_ = m1;
  c.sigma_ = std::sqrt(std::max(0.0, m2 - m1 * m1));
  c.C_ = std::max(std::fabs(c.lo_), std::fabs(c.hi_));
  c.edges_ = std::move(edges);
  return c;
}

double CutDistribution::sample_log(double u) const {
  switch (kind_) {
    case Kind::log_uniform:
      return lo_ + (hi_ - lo_) * u;
    case Kind::fixed:
      return mu_;
    case Kind::beta: {
      const double x = boost::math::ibeta_inv(a_, b_, cdf_min_ + u * (1.0 - cdf_min_));
      return base_.log(std::clamp(x, p_min_, 1.0));
    }
    case Kind::table: {
      const auto it = std::upper_bound(cum_.begin() + 1, cum_.end() - 1, u);
      const std::size_t i = static_cast<std::size_t>(it - cum_.begin()) - 1;
      const double w = cum_[i + 1] - cum_[i];
      const double frac = w > 0.0 ? (u - cum_[i]) / w : 0.5;
      return edges_[i] + std::clamp(frac, 0.0, 1.0) * (edges_[i + 1] - edges_[i]);
    }
  }
  return 0.0;
}

std::string CutDistribution::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::log_uniform: os << "log_uniform(" << lo_ << ", " << hi_ << ")"; break;
    case Kind::beta: os << "beta(" << a_ << ", " << b_ << "; p_min=" << p_min_ << ")"; break;
    case Kind::fixed: os << "fixed(" << base_.pow(mu_) << ")"; break;
    case Kind::table: os << "table(" << edges_.size() - 1 << " bins)"; break;
  }
  return os.str();
}

void ProcessConfig::validate() const {
  if (m < 1) throw DomainError("m must be at least 1");
  if (N < 0) throw DomainError("N must be non-negative");
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (statistic.kind != Statistic::Kind::z_vector) check_d(statistic.d, static_cast<std::size_t>(m));
}

std::vector<double> simulate_log_sides(const ProcessConfig& cfg, std::int64_t trial) {
  std::vector<double> sides(static_cast<std::size_t>(cfg.m), 0.0);
  for (int i = 0; i < cfg.m; ++i) {
    double s = 0.0;
    for (int j = 1; j <= cfg.N; ++j) s += draw_log(cfg, trial, i, j);
    sides[static_cast<std::size_t>(i)] = s;
  }
  return sides;
}

std::vector<double> simulate_log_side_path(const ProcessConfig& cfg, std::int64_t trial, int axis) {
  if (axis < 0 || axis >= cfg.m) throw DomainError("axis out of range");
  std::vector<double> path(static_cast<std::size_t>(cfg.N) + 1, 0.0);
  for (int j = 1; j <= cfg.N; ++j)
    path[static_cast<std::size_t>(j)] = path[static_cast<std::size_t>(j) - 1] + draw_log(cfg, trial, axis, j);
  return path;
}

std::vector<double> z_statistic(const std::vector<double>& log_sides, const CutDistribution& cut, int N) {
  if (N < 1) throw DomainError("z statistic needs N >= 1");
  if (!(cut.sigma() > 0.0)) throw DomainError("z statistic needs a cut law with positive spread");
  const double scale = std::sqrt(static_cast<double>(N)) * cut.sigma();
  std::vector<double> z;
  z.reserve(log_sides.size());
  for (double l : log_sides) z.push_back((l - N * cut.mu()) / scale);
  return z;
}

double log_vol_d(const std::vector<double>& log_sides, int d, const benford::Base& B) {
  check_d(d, log_sides.size());
  // e_j recurrences carried in natural logs so no side ratio can overflow.
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> e(static_cast<std::size_t>(d) + 1, ninf);
  e[0] = 0.0;
  auto log_add = [ninf](double x, double y) {
    if (x == ninf) return y;
    if (y == ninf) return x;
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(-std::fabs(x - y)));
  };
  std::size_t seen = 0;
  for (double l : log_sides) {
    ++seen;
    const double ln_side = l * B.ln();
    for (std::size_t j = std::min<std::size_t>(seen, static_cast<std::size_t>(d)); j >= 1; --j)
      e[j] = log_add(e[j], e[j - 1] + ln_side);
  }
  const int m = static_cast<int>(log_sides.size());
  return (m - d) * B.log(2.0) + e[static_cast<std::size_t>(d)] / B.ln();
}

double vol_d(const std::vector<double>& log_sides, int d, const benford::Base& B) {
  return B.pow(log_vol_d(log_sides, d, B));
}

double vol_d_by_subsets(const std::vector<double>& log_sides, int d, const benford::Base& B) {
  check_d(d, log_sides.size());
  const std::size_t m = log_sides.size();
  if (m > 20) throw DomainError("subset enumeration limited to m <= 20");
  long double total = 0.0L;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) != d) continue;
    long double prod = 1.0L;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) prod *= static_cast<long double>(B.pow(log_sides[i]));
    total += prod;
  }
  return static_cast<double>(std::ldexp(total, static_cast<int>(m) - d));
}

double max_face_volume(const std::vector<double>& log_sides, int d) {
  check_d(d, log_sides.size());
  std::vector<double> v(log_sides);
  const auto top = v.begin() + d;
  std::nth_element(v.begin(), top - 1, v.end(), std::greater<>());
  std::sort(v.begin(), top, std::greater<>());
  double s = 0.0;
  for (auto it = v.begin(); it != top; ++it) s += *it;
  return s;
}

benford::MantissaDistribution monte_carlo_mantissa(const ProcessConfig& cfg, double draw_budget) {
  cfg.validate();
  if (cfg.statistic.kind == Statistic::Kind::z_vector)
    throw DomainError("z_vector has no mantissa; use monte_carlo_y_samples");
  check_budget(cfg, draw_budget);
  const std::int64_t trials = cfg.trials;
  const std::size_t n_chunks = static_cast<std::size_t>((trials + kTrialChunk - 1) / kTrialChunk);
  std::vector<std::vector<double>> parts(n_chunks);
  const benford::Base& B = cfg.base();
  parallel_for_chunks(n_chunks, [&](std::size_t c) {
    const std::int64_t begin = static_cast<std::int64_t>(c) * kTrialChunk;
    const std::int64_t end = std::min(trials, begin + kTrialChunk);
    auto& out = parts[c];
    out.reserve(static_cast<std::size_t>(end - begin));
    for (std::int64_t t = begin; t < end; ++t) {
      const auto sides = simulate_log_sides(cfg, t);
      const double lg = cfg.statistic.kind == Statistic::Kind::vol_d
                            ? log_vol_d(sides, cfg.statistic.d, B)
                            : max_face_volume(sides, cfg.statistic.d);
      out.push_back(benford::mantissa_of_log(lg));
    }
  });
  benford::MantissaDistribution dist;
  dist.reserve(static_cast<std::size_t>(trials));
  const double w = -std::log(static_cast<double>(trials));
  for (const auto& part : parts)
    for (double t : part) dist.add(t, w);
  dist.finalize();
  return dist;
}

std::vector<double> monte_carlo_y_samples(const ProcessConfig& cfg, int d, double draw_budget) {
  cfg.validate();
  check_d(d, static_cast<std::size_t>(cfg.m));
  check_budget(cfg, draw_budget);
  std::vector<double> y(static_cast<std::size_t>(cfg.trials));
  const std::int64_t trials = cfg.trials;
  const std::size_t n_chunks = static_cast<std::size_t>((trials + kTrialChunk - 1) / kTrialChunk);
  parallel_for_chunks(n_chunks, [&](std::size_t c) {
    const std::int64_t begin = static_cast<std::int64_t>(c) * kTrialChunk;
    const std::int64_t end = std::min(trials, begin + kTrialChunk);
    for (std::int64_t t = begin; t < end; ++t)
      y[static_cast<std::size_t>(t)] = max_face_volume(z_statistic(simulate_log_sides(cfg, t), cfg.cut, cfg.N), d);
  });
  return y;
}

}  // namespace fraglab::box
