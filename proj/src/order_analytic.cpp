#include "fraglab/order_analytic.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fraglab/errors.hpp"
#include "fraglab/numerics.hpp"
#include "fraglab/parallel.hpp"
#include "fraglab/philox.hpp"
#include "fraglab/quadrature.hpp"

namespace fraglab::order {

namespace {

// Coordinates beyond this carry less than 1e-44 normal mass and are dropped.
constexpr double kZ = 14.0;
// Quadrature pieces are at most this wide so no narrow peak is stepped over.
constexpr double kPiece = 4.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_md(int m, int d) {
  if (m < 1 || d < 1 || d > m) throw DomainError("need 1 <= d <= m");
}

// P(a < Z < b), evaluated on the side of 0 that avoids cancellation.
double normal_mass(double a, double b) {
  if (!(b > a)) return 0.0;
  if (a > 0.0) return normal_cdf(-a) - normal_cdf(-b);
  return normal_cdf(b) - normal_cdf(a);
}

struct Tracker {
  Integrator integ;
  double worst_rel = 0.0;

  double piecewise(const std::function<double(double)>& f, double a, double b, bool outer,
                   double* outer_err) {
    if (!(b > a)) return 0.0;
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / kPiece)));
    const double w = (b - a) / pieces;
    double v = 0.0, e = 0.0;
    for (int i = 0; i < pieces; ++i) {
      const double lo = a + i * w;
      const double hi = i + 1 == pieces ? b : lo + w;
      const QuadResult r = integ.integrate(f, lo, hi);
      v += r.value;
      e += r.error;
    }
    if (outer) {
      *outer_err = e;
    } else if (v != 0.0) {
      worst_rel = std::max(worst_rel, e / std::fabs(v));
    }
    return v;
  }
};

double lower_start(const QuadratureSpec& spec) { return std::max(spec.lower_cut, -kZ); }

double tail_cost_of(int m, const QuadratureSpec& spec) {
  if (!std::isfinite(spec.lower_cut)) return 0.0;
  return m * normal_cdf(spec.lower_cut);
}

double normal_quantile(double u) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u); }

// Draws m standard normals for sample s and sorts them ascending.
void ordered_sample(std::uint64_t seed, std::int64_t s, int m, std::vector<double>& x) {
  x.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j)
    x[static_cast<std::size_t>(j)] =
        normal_quantile(stream_uniform(seed, static_cast<std::uint64_t>(s), static_cast<std::uint32_t>(j), 0));
  std::sort(x.begin(), x.end());
}

// Parallel Monte Carlo mean and standard error of est(x) over sorted samples.
std::pair<double, double> mc_mean(int m, const QuadratureSpec& spec,
                                  const std::function<double(const std::vector<double>&)>& est) {
  constexpr std::int64_t kChunk = 1 << 14;
  const std::int64_t n = spec.mc_samples;
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  std::vector<std::pair<double, double>> sums(chunks, {0.0, 0.0});
  parallel_for_chunks(chunks, [&](std::size_t c) {
    std::vector<double> x;
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(n, begin + kChunk);
    for (std::int64_t s = begin; s < end; ++s) {
      ordered_sample(spec.seed, s, m, x);
      const double v = est(x);
      sums[c].first += v;
      sums[c].second += v * v;
    }
  });
  double s1 = 0.0, s2 = 0.0;
  for (const auto& p : sums) {
    s1 += p.first;
    s2 += p.second;
  }
  const double mean = s1 / static_cast<double>(n);
  const double var = std::max(0.0, s2 / static_cast<double>(n) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

Evaluation finish(double value, double achieved, Scheme scheme, int m, const QuadratureSpec& spec,
                  const char* what) {
  Evaluation e{value, achieved, scheme, tail_cost_of(m, spec)};
  const double target = std::max(spec.abs_tol, spec.rel_tol * std::fabs(value));
  if (!(achieved <= target)) {
    std::ostringstream os;
    os << what << " reached only " << achieved << " against a target of " << target;
    throw AccuracyError(os.str(), achieved);
  }
  return e;
}

double mc_density_estimate(const std::vector<double>& x, int m, int d, double y, double cut) {
  if (m == 1) return y >= cut ? normal_pdf(y) : 0.0;
  // Conditioned on everything below the maximum, the maximum has density
  // phi(t) / P(Z > w) on t >= w, w the runner-up.
  const double w = x[static_cast<std::size_t>(m) - 2];
  double rest = 0.0;
  for (int j = m - d; j <= m - 2; ++j) rest += x[static_cast<std::size_t>(j)];
  const double t = y - rest;
  if (t < w) return 0.0;
  const double lowest = d == 1 ? t : x[static_cast<std::size_t>(m - d)];
  if (lowest < cut) return 0.0;
  return normal_pdf(t) / normal_cdf(-w);
}

}  // namespace

OrderStatModel::OrderStatModel(int m, int d) : m_(m), d_(d) { check_md(m, d); }

OrderStatModel OrderStatModel::gaussian(int m, int d) {
  OrderStatModel model(m, d);
  model.pdf_ = normal_pdf;
  model.cdf_ = normal_cdf;
  return model;
}

OrderStatModel OrderStatModel::perturbed(int m, int d, Fn A, Fn B_err, double sup_A, double sup_B) {
  if (!A || !B_err) throw DomainError("perturbation callables must be set");
  OrderStatModel model(m, d);
  double prev = -kInf;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -20.0 + 0.01 * i;
    const double a = A(x), b = B_err(x);
    if (!(std::fabs(a) <= sup_A * (1.0 + 1e-12) + 1e-300))
      throw DomainError("perturbation A exceeds its declared sup norm");
    if (!(std::fabs(b) <= sup_B * (1.0 + 1e-12) + 1e-300))
      throw DomainError("perturbation B exceeds its declared sup norm");
    const double F = normal_cdf(x) + b;
    if (F < prev - 1e-12) throw DomainError("perturbed CDF decreases on the test grid");
    prev = F;
  }
  if (std::fabs(normal_cdf(-40.0) + B_err(-40.0)) > 1e-6 || std::fabs(normal_cdf(40.0) + B_err(40.0) - 1.0) > 1e-6)
    throw DomainError("perturbed CDF does not tend to 0 and 1");
  model.gaussian_ = false;
  model.pdf_ = [A](double x) { return normal_pdf(x) + A(x); };
  model.cdf_ = [B_err](double x) { return normal_cdf(x) + B_err(x); };
  return model;
}

std::int64_t order_constant(int m, int d) {
  if (m > 20) throw DomainError("order_constant limited to m <= 20");
  check_md(m, d);
  std::int64_t c = 1;
  for (int k = m - d + 1; k <= m; ++k) c *= k;
  return c;
}

double joint_order_pdf(const OrderStatModel& model, const std::vector<double>& z) {
  if (static_cast<int>(z.size()) != model.d()) throw DomainError("joint_order_pdf needs d coordinates");
  for (std::size_t j = 1; j < z.size(); ++j)
    if (z[j] < z[j - 1]) return 0.0;
  double v = static_cast<double>(order_constant(model.m(), model.d()));
  const int power = model.m() - model.d();
  if (power > 0) v *= std::pow(model.cdf(z[0]), power);
  for (double zj : z) v *= model.pdf(zj);
  return v;
}

double main_term_pdf(int m, int d, const std::vector<double>& z) {
  return joint_order_pdf(OrderStatModel::gaussian(m, d), z);
}

double ordered_region_integral(const OrderStatModel& model, double rel_tol) {
  const int d = model.d();
  if (d > 3) throw DomainError("ordered_region_integral supports d <= 3");
  Tracker t{Integrator(rel_tol, 200'000'000, 10)};
  std::vector<double> z(static_cast<std::size_t>(d));
  std::function<double(int, double)> level = [&](int j, double prev) -> double {
    return t.piecewise(
        [&, j](double x) {
          z[static_cast<std::size_t>(j)] = x;
          return j + 1 == d ? joint_order_pdf(model, z) : level(j + 1, x);
        },
        prev, kZ, false, nullptr);
  };
  return level(0, -kZ);
}

std::string scheme_name(Scheme s) {
  return s == Scheme::nested_adaptive ? "nested_adaptive" : "ordered_gaussian_mc";
}

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
  if (max_evals < 1 || mc_samples < 1) throw DomainError("quadrature budgets must be positive");
  if (std::isnan(lower_cut) || lower_cut == kInf) throw DomainError("lower_cut must be a number below +inf");
}

Evaluation main_cdf(int m, int d, double y, const QuadratureSpec& spec) {
  check_md(m, d);
  spec.validate();
  const Scheme scheme = spec.resolve(d);
  if (scheme == Scheme::ordered_gaussian_mc) {
    const double cut = spec.lower_cut;
    auto [mean, se] = mc_mean(m, spec, [&](const std::vector<double>& x) {
      double s = 0.0;
      for (int j = m - d; j < m; ++j) s += x[static_cast<std::size_t>(j)];
      return (s <= y && x[static_cast<std::size_t>(m - d)] >= cut) ? 1.0 : 0.0;
    });
    return finish(mean, 3.0 * se, scheme, m, spec, "main_cdf");
  }
  if (y == -kInf) return finish(0.0, 0.0, scheme, m, spec, "main_cdf");
  const double C = static_cast<double>(order_constant(m, d));
  Tracker t{Integrator(spec.rel_tol * 0.1, spec.max_evals)};
  double outer_err = 0.0;
  const double lo = lower_start(spec);
  // Level j integrates z_j over [prev, (y - S)/(d - j)], 0-based; the last
  // coordinate is done in closed form.
  std::function<double(int, double, double)> level = [&](int j, double S, double prev) -> double {
    if (j == d - 1) return normal_mass(j == 0 ? lo : prev, y - S);
    const double a = j == 0 ? lo : prev;
    const double b = std::min((y - S) / (d - j), kZ);
    auto f = [&, j, S](double z) {
      double w = normal_pdf(z);
      if (j == 0 && m > d) w *= std::pow(normal_cdf(z), m - d);
      return w == 0.0 ? 0.0 : w * level(j + 1, S + z, z);
    };
    return t.piecewise(f, a, b, j == 0, &outer_err);
  };
  double v;
  try {
    if (d == 1) {
      const double b = std::min(y, kZ);
      v = t.piecewise([&](double z) { return m * std::pow(normal_cdf(z), m - 1) * normal_pdf(z); }, lo, b, true,
                      &outer_err);
    } else {
      v = C * level(0, 0.0, lo);
      outer_err *= C;
    }
  } catch (const CapacityError&) {
    throw AccuracyError("main_cdf exhausted its evaluation budget", kInf);
  }
  v = std::clamp(v, 0.0, 1.0);
  return finish(v, outer_err + t.worst_rel * v, scheme, m, spec, "main_cdf");
}

Evaluation main_density(int m, int d, double y, const QuadratureSpec& spec) {
  check_md(m, d);
  spec.validate();
  const Scheme scheme = spec.resolve(d);
  if (scheme == Scheme::ordered_gaussian_mc) {
    auto [mean, se] = mc_mean(m, spec, [&](const std::vector<double>& x) {
      return mc_density_estimate(x, m, d, y, spec.lower_cut);
    });
    return finish(mean, 3.0 * se, scheme, m, spec, "main_density");
  }
  if (!std::isfinite(y)) return finish(0.0, 0.0, scheme, m, spec, "main_density");
  if (d == 1) {
    const double v = y >= spec.lower_cut ? m * normal_pdf(y) * std::pow(normal_cdf(y), m - 1) : 0.0;
    return finish(v, 0.0, scheme, m, spec, "main_density");
  }
  const double C = static_cast<double>(order_constant(m, d));
  Tracker t{Integrator(spec.rel_tol * 0.1, spec.max_evals)};
  double outer_err = 0.0;
  const double lo = lower_start(spec);
  // z_d = y - S is pinned; z_0..z_{d-2} range over nested bounds.
  std::function<double(int, double, double)> level = [&](int j, double S, double prev) -> double {
    const double a = j == 0 ? lo : prev;
    const double c = y - S;
    if (j == d - 2 && j > 0) {
      // phi(t) phi(c - t) over t in [a, c/2] in closed form.
      if (c / 2.0 <= a) return 0.0;
      return normal_pdf(c / std::numbers::sqrt2) / std::numbers::sqrt2 *
             normal_mass(std::numbers::sqrt2 * a - c / std::numbers::sqrt2, 0.0);
    }
    const double b = std::min(c / (d - j), kZ);
    auto f = [&, j, S](double z) {
      double w = normal_pdf(z);
      if (j == 0 && m > d) w *= std::pow(normal_cdf(z), m - d);
      if (w == 0.0) return 0.0;
      return j == d - 2 ? w * normal_pdf(y - S - z) : w * level(j + 1, S + z, z);
    };
    return t.piecewise(f, a, b, j == 0, &outer_err);
  };
  double v;
  try {
    v = C * level(0, 0.0, lo);
  } catch (const CapacityError&) {
    throw AccuracyError("main_density exhausted its evaluation budget", kInf);
  }
  outer_err *= C;
  v = std::max(v, 0.0);
  return finish(v, outer_err + t.worst_rel * v, scheme, m, spec, "main_density");
}

Evaluation equidistribution_sum(int m, int d, int N, double C, const benford::IntervalQuery& q,
                                const QuadratureSpec& spec) {
  check_md(m, d);
  spec.validate();
  if (N < 1) throw DomainError("equidistribution_sum needs N >= 1");
  if (!(C > 0.0)) throw DomainError("support bound C must be positive");
  const auto n0 = static_cast<std::int64_t>(std::ceil(d * C * N));
  const double rootN = std::sqrt(static_cast<double>(N));
  const Scheme scheme = spec.resolve(d);

  if (scheme == Scheme::ordered_gaussian_mc) {
    auto [mean, se] = mc_mean(m, spec, [&](const std::vector<double>& x) {
      double s = 0.0;
      for (int j = m - d; j < m; ++j) s += x[static_cast<std::size_t>(j)];
      if (x[static_cast<std::size_t>(m - d)] < spec.lower_cut) return 0.0;
      const double t = s * rootN;
      const double n = std::floor(t);
      if (n < static_cast<double>(-n0) || n > static_cast<double>(n0 - 1)) return 0.0;
      const double frac = t - n;
      return (frac > q.a && frac < q.b) ? 1.0 : 0.0;
    });
    return finish(mean, 3.0 * se, scheme, m, spec, "equidistribution_sum");
  }

  const double reach = 9.0 * d;
  const std::int64_t n_lo = std::max<std::int64_t>(-n0, static_cast<std::int64_t>(std::floor(-reach * rootN - q.b)));
  const std::int64_t n_hi = std::min<std::int64_t>(n0 - 1, static_cast<std::int64_t>(std::ceil(reach * rootN - q.a)));
  const bool skipped = n_lo > -n0 || n_hi < n0 - 1;
  const std::int64_t count = std::max<std::int64_t>(0, n_hi - n_lo + 1);
  constexpr std::int64_t kChunk = 64;
  const std::size_t chunks = static_cast<std::size_t>((count + kChunk - 1) / kChunk);
  std::vector<double> part(chunks, 0.0), part_err(chunks, 0.0);
  parallel_for_chunks(chunks, [&](std::size_t c) {
    const std::int64_t begin = n_lo + static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(n_hi + 1, begin + kChunk);
    for (std::int64_t n = begin; n < end; ++n) {
      const double a = (q.a + static_cast<double>(n)) / rootN;
      const double b = (q.b + static_cast<double>(n)) / rootN;
      double rel = 0.0;
      const double v = gauss_legendre8(
          [&](double yy) {
            const Evaluation e = main_density(m, d, yy, spec);
            if (e.value > 0.0) rel = std::max(rel, e.achieved_tol / e.value);
            return e.value;
          },
          a, b);
      part[c] += v;
      part_err[c] += rel * v;
    }
  });
  double value = 0.0, err = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    value += part[c];
    err += part_err[c];
  }
  // Y beyond 9d in absolute value forces some |Z_i| > 9.
  if (skipped) err += 2.0 * m * normal_cdf(-9.0);
  Evaluation e{value, err, scheme, tail_cost_of(m, spec)};
  return e;
}

AkSequence ak_sequence(int d) {
  if (d < 3) throw DomainError("ak_sequence needs d >= 3");
  AkSequence s{d, {}, {}};
  mpq_class a(1, 4);
  s.exact.push_back(a);
  for (int k = d - 2; k >= 1; --k) {
    const mpq_class a2 = a * a;
    const mpq_class one_plus = 1 + a;
    mpq_class next = a2 / (1 + a2) + a / (one_plus * one_plus);
    next.canonicalize();
    a = next;
    s.exact.push_back(a);
  }
  for (const auto& v : s.exact) s.values.push_back(v.get_d());
  return s;
}

double gaussian_tail(double g) {
  if (!(g >= 0.0)) throw DomainError("gaussian_tail needs g >= 0");
  return 0.5 * std::erfc(g / std::numbers::sqrt2);
}

double d2_envelope(int /*m*/, double y, double C, int N) {
  if (N < 1) throw DomainError("d2_envelope needs N >= 1");
  return normal_pdf(y / 2.0) + normal_pdf(y + C * std::sqrt(static_cast<double>(N)));
}

GridFunction gaussian_convolution(int d, double h, double L) {
  if (d < 1) throw DomainError("gaussian_convolution needs d >= 1");
  if (!(h > 0.0 && L > 0.0)) throw DomainError("grid step and half-width must be positive");
  const auto n = static_cast<std::size_t>(std::llround(2.0 * L / h)) + 1;
  GridFunction g{h, -L, std::vector<double>(n)};
  std::vector<double> phi(2 * n - 1);
  // phi[k] holds phi((k - (n-1)) h), covering every grid difference.
  for (std::size_t k = 0; k < phi.size(); ++k)
    phi[k] = normal_pdf((static_cast<double>(k) - static_cast<double>(n - 1)) * h);
  for (std::size_t i = 0; i < n; ++i) g.values[i] = normal_pdf(g.x(i));
  std::vector<double> next(n);
  for (int step = 1; step < d; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
        s += w * g.values[j] * phi[i + (n - 1) - j];
      }
      next[i] = h * s;
    }
    g.values.swap(next);
  }
  return g;
}

double fitted_envelope_constant(int m, double C, int N, int grid_points) {
  if (grid_points < 2) throw DomainError("need at least two grid points");
  const double span = 2.0 * C * std::sqrt(static_cast<double>(N));
  QuadratureSpec spec;
  spec.lower_cut = -C * std::sqrt(static_cast<double>(N));
  spec.abs_tol = 1e-14;
  spec.rel_tol = 1e-11;
  const double h = 1e-3;
  double c = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double y = -span + 2.0 * span * i / (grid_points - 1);
    const double dp = main_density(m, 2, y + h, spec).value;
    const double dm = main_density(m, 2, y - h, spec).value;
    const double deriv = (dp - dm) / (2.0 * h);
    const double env = d2_envelope(m, y, C, N);
    if (env > 0.0) c = std::max(c, std::fabs(deriv) / env);
  }
  return c;
}

}  // namespace fraglab::order
