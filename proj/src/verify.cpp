#include "fraglab/verify.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "fraglab/benford.hpp"
#include "fraglab/compositions.hpp"
#include "fraglab/order_analytic.hpp"
#include "fraglab/stick_exact.hpp"
#include "fraglab/truncation.hpp"

namespace fraglab::cli {

namespace {

struct Check {
  std::string name;
  std::function<bool()> run;
};

bool multinomial_factorization_all() {
  for (int m = 1; m <= 4; ++m)
    for (int N = 0; N <= 10; ++N)
      for (stick::CompositionCursor c(N, m); !c.done(); c.next())
        if (!stick::verify_multinomial_factorization(c.current())) return false;
  return true;
}

bool power_identity_all() {
  for (int m = 1; m <= 5; ++m)
    for (int N = 0; N <= 12; ++N)
      if (!stick::verify_power_identity(N, m)) return false;
  return true;
}

bool exact_matches_tree() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.05, 1.0);
  const benford::Base B(10);
  for (int trial = 0; trial < 5; ++trial) {
    for (int m : {2, 3}) {
      std::vector<double> p(static_cast<std::size_t>(m));
      double s = 0.0;
      for (double& v : p) s += (v = U(rng));
      for (double& v : p) v /= s;
      p.back() = 1.0;
      for (int i = 0; i + 1 < m; ++i) p.back() -= p[static_cast<std::size_t>(i)];
      const stick::ProportionVector pv(p);
      const int N = m == 2 ? 10 : 6;
      const auto tree = stick::brute_force_mantissa(N, pv, B);
      const benford::IntervalQuery q(0.2, 0.7);
      if (std::fabs(stick::exact_interval_probability(N, pv, B, q) - benford::interval_mass(tree, q)) > 1e-10)
        return false;
    }
  }
  return true;
}

bool mass_conservation() {
  for (int m = 2; m <= 4; ++m) {
    const int N = 200;
    double total = 0.0;
    for (stick::CompositionCursor c(N, m); !c.done(); c.next())
      total += std::exp(stick::log_multinomial(c.current()) - N * std::log(static_cast<double>(m)));
    if (std::fabs(total - 1.0) > 1e-10) return false;
  }
  return true;
}

bool ak_positive() {
  const auto s3 = order::ak_sequence(3);
  if (s3.exact.back() != mpq_class(93, 425)) return false;
  for (int d = 3; d <= 10; ++d)
    for (const auto& a : order::ak_sequence(d).exact)
      if (!(a > 0 && a <= 1)) return false;
  return true;
}

bool tail_bound() {
  for (int i = 0; i < 100; ++i) {
    const double g = 1.0 + 9.0 * i / 99.0;
    if (order::gaussian_tail(g) > std::exp(-g / 2.0)) return false;
  }
  return true;
}

bool max_closed_form() {
  for (int m = 1; m <= 6; ++m)
    for (int y = -3; y <= 3; ++y)
      if (std::fabs(order::main_cdf(m, 1, y).value - std::pow(0.5 * std::erfc(-y / std::sqrt(2.0)), m)) > 1e-6)
        return false;
  return true;
}

bool rational_degeneracy() {
  const stick::ProportionVector p({10.0 / 11.0, 1.0 / 11.0});
  const benford::Base B(10);
  for (int N : {1, 7, 50}) {
    for (int i = 0; i < 20; ++i) {
      const double v = stick::exact_interval_probability(N, p, B, benford::IntervalQuery(i / 20.0, (i + 1) / 20.0));
      if (v != 0.0 && v != 1.0) return false;
    }
  }
  return true;
}

}  // namespace

bool run_verify_suite(std::ostream& out) {
  const std::vector<Check> checks = {
      {"multinomial factorization, N <= 10, m <= 4", multinomial_factorization_all},
      {"power identity, N <= 12, m <= 5", power_identity_all},
      {"exact enumeration matches tree expansion", exact_matches_tree},
      {"multinomial mass sums to one, N = 200", mass_conservation},
      {"rational ratio exponent gives 0/1 masses", rational_degeneracy},
      {"A_k recursion exact and positive", ak_positive},
      {"Gaussian tail below exp(-g/2)", tail_bound},
      {"CDF of the maximum equals Phi^m", max_closed_form},
  };
  bool all = true;
  for (const auto& c : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      note = std::string(" (") + e.what() + ")";
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << (ok ? "PASS " : "FAIL ") << c.name << note << " [" << s << " s]\n";
    all = all && ok;
  }
  return all;
}

}  // namespace fraglab::cli
