#include "fraglab/benford.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "fraglab/errors.hpp"
#include "fraglab/numerics.hpp"

namespace fraglab::benford {

Base::Base(long long b) : b_(b) {
  if (b < 2) throw DomainError("base must be at least 2, got " + std::to_string(b));
  ln_b_ = std::log(static_cast<double>(b));
}

double Base::log(double x) const {
  if (b_ == 10) return std::log10(x);
  if (b_ == 2) return std::log2(x);
  return std::log(x) / ln_b_;
}

double Base::pow(double t) const {
  if (b_ == 10) return std::pow(10.0, t);
  if (b_ == 2) return std::exp2(t);
  return std::exp(t * ln_b_);
}

double mantissa_of_log(double log_b_x) {
  double t = log_b_x - std::floor(log_b_x);
  if (t >= 1.0 - kMantissaEps || t < 0.0) t = 0.0;
  return t;
}

double mantissa(double x, const Base& B) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("mantissa needs a finite positive argument");
  return mantissa_of_log(B.log(x));
}

double significand(double x, const Base& B) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("significand needs a finite positive argument");
  const double lg = B.log(x);
  const double k = std::floor(lg);
  // Scale by an exact power where possible so 250 -> 2.5 stays exact.
  double s = x / B.pow(k);
  if (s >= static_cast<double>(B.value())) s /= static_cast<double>(B.value());
  if (s < 1.0) s *= static_cast<double>(B.value());
  if (std::fabs(s - static_cast<double>(B.value())) <= kMantissaEps * static_cast<double>(B.value())) s = 1.0;
  return s;
}

double benford_digit_prob(long long d, const Base& B) {
  if (d < 1 || d > B.value() - 1) throw DomainError("digit outside 1..B-1");
  return B.log(static_cast<double>(d + 1) / static_cast<double>(d));
}

double benford_cdf(double s, const Base& B) {
  if (!(s >= 1.0) || !(s <= static_cast<double>(B.value())))
    throw DomainError("benford_cdf argument outside [1, B]");
  if (s == static_cast<double>(B.value())) return 1.0;
  return B.log(s);
}

IntervalQuery::IntervalQuery(double a_, double b_) : a(a_), b(b_) {
  if (!(0.0 <= a && a < b && b <= 1.0)) throw DomainError("interval must satisfy 0 <= a < b <= 1");
}

void MantissaDistribution::add(double m, double log_weight) {
  if (normalized_) throw StateError("distribution already finalized");
  if (!(m >= 0.0 && m < 1.0)) throw DomainError("mantissa outside [0,1)");
  atoms_.push_back({m, log_weight});
}

void MantissaDistribution::append(const MantissaDistribution& other) {
  if (normalized_) throw StateError("distribution already finalized");
  atoms_.insert(atoms_.end(), other.atoms_.begin(), other.atoms_.end());
}

void MantissaDistribution::finalize() {
  if (normalized_) return;
  // Sorting by (mantissa, weight) makes the result independent of insertion order.
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) {
    return x.mantissa < y.mantissa || (x.mantissa == y.mantissa && x.log_weight < y.log_weight);
  });
  std::vector<Atom> merged;
  LogSumExp total;
  std::size_t i = 0;
  while (i < atoms_.size()) {
    const double anchor = atoms_[i].mantissa;
    LogSumExp w;
    std::size_t j = i;
    double last = anchor;
    // Chains of near-equal values merge as one cluster keyed on consecutive gaps.
    while (j < atoms_.size() && atoms_[j].mantissa - last < kMantissaEps) {
      w.add(atoms_[j].log_weight);
      last = atoms_[j].mantissa;
      ++j;
    }
    merged.push_back({anchor, w.value()});
    total.add(w.value());
    i = j;
  }
  // Atoms just below 1 are the same point as 0 on the circle.
  if (merged.size() > 1 && merged.front().mantissa == 0.0 &&
      1.0 - merged.back().mantissa < kMantissaEps) {
    LogSumExp w;
    w.add(merged.front().log_weight);
    w.add(merged.back().log_weight);
    merged.front().log_weight = w.value();
    merged.pop_back();
  }
  const double log_total = total.value();
  if (!merged.empty() && !std::isfinite(log_total)) throw DomainError("distribution has no finite mass");
  for (auto& a : merged) a.log_weight -= log_total;
  atoms_ = std::move(merged);
  normalized_ = true;
}

void MantissaDistribution::write_csv(std::ostream& out) const {
  out << "mantissa,weight\n";
  const auto old = out.precision(17);
  for (const auto& a : atoms_) out << a.mantissa << ',' << std::exp(a.log_weight) << '\n';
  out.precision(old);
}

double interval_mass(const MantissaDistribution& dist, const IntervalQuery& q) {
  if (!dist.normalized()) throw StateError("interval_mass needs a finalized distribution");
  LogSumExp inside;
  for (const auto& a : dist.atoms())
    if (q.contains(a.mantissa)) inside.add(a.log_weight);
  return std::min(1.0, std::exp(inside.value()));
}

double ks_to_benford(const MantissaDistribution& dist) {
  if (dist.empty()) throw DomainError("ks_to_benford on an empty distribution");
  if (!dist.normalized()) throw StateError("ks_to_benford needs a finalized distribution");
  double cdf = 0.0;
  double sup = 0.0;
  for (const auto& a : dist.atoms()) {
    sup = std::max(sup, std::fabs(cdf - a.mantissa));
    cdf += std::exp(a.log_weight);
    sup = std::max(sup, std::fabs(cdf - a.mantissa));
  }
  // Left limit at t = 1.
  sup = std::max(sup, std::fabs(std::min(cdf, 1.0) - 1.0));
  return std::min(sup, 1.0);
}

}  // namespace fraglab::benford
