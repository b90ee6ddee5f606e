#pragma once

#include <cstdint>
#include <functional>

namespace fraglab {

struct QuadResult {
  double value;
  double error;
};

/// Adaptive Gauss-Kronrod (7/15) wrapper that counts evaluations.
///
/// Nested integrals share one counter, so a single budget caps the whole
/// computation. Throws CapacityError once the budget is exhausted.
class Integrator {
 public:
  Integrator(double rel_tol, std::int64_t max_evals, unsigned max_depth = 12);
  QuadResult integrate(const std::function<double(double)>& f, double a, double b);
  std::int64_t evals() const { return evals_; }

 private:
  double rel_tol_;
  std::int64_t max_evals_;
  unsigned max_depth_;
  std::int64_t evals_ = 0;
};

/// Eight-point Gauss-Legendre rule on [a, b].
double gauss_legendre8(const std::function<double(double)>& f, double a, double b);

}  // namespace fraglab
