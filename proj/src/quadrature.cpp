#include "fraglab/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "fraglab/errors.hpp"

namespace fraglab {

Integrator::Integrator(double rel_tol, std::int64_t max_evals, unsigned max_depth)
    : rel_tol_(rel_tol), max_evals_(max_evals), max_depth_(max_depth) {}

QuadResult Integrator::integrate(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return {0.0, 0.0};
  auto counted = [&](double x) {
    if (++evals_ > max_evals_) throw CapacityError("quadrature evaluation budget exhausted");
    return f(x);
  };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      counted, a, b, max_depth_, rel_tol_, &err);
  return {v, err};
}

double gauss_legendre8(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 8>::integrate(f, a, b);
}

}  // namespace fraglab
