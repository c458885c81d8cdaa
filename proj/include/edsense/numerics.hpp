#pragma once

#include <cmath>
#include <string>

#include "edsense/errors.hpp"

namespace edsense::numerics {

struct Tolerance {
  double abs_tol = 1e-12;
  int max_iter = 200;

  void validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("tolerance: abs_tol must be positive");
    if (max_iter < 1) throw DomainError("tolerance: max_iter must be >= 1");
  }
};

/// Complementary error function. Relative error below 1e-12 on |x| <= 25;
/// underflows to 0 for x beyond ~26.5. Throws DomainError on NaN/inf.
double erfc(double x);

/// Regularized lower incomplete gamma P(shape, x).
double reg_lower_gamma(double shape, double x);

/// Regularized upper incomplete gamma Q(shape, x) = 1 - P(shape, x), computed
/// without cancellation in the upper tail.
double reg_upper_gamma(double shape, double x);

/// Bisection on a bracketing interval. Stops when |f(mid)| <= abs_tol or the
/// bracket is narrower than abs_tol.
template <class F>
double bisect(F&& f, double lo, double hi, const Tolerance& tol = {}) {
  tol.validate();
  if (!(lo <= hi)) throw DomainError("bisect: lo must not exceed hi");
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (std::isnan(f_lo) || std::isnan(f_hi)) throw DomainError("bisect: f is NaN at bracket end");
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw BracketError("bisect: f(lo) and f(hi) have the same sign");
  }
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= tol.abs_tol || hi - lo < tol.abs_tol) return mid;
    // Bracket collapsed to adjacent doubles.
    if (mid == lo || mid == hi) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("bisect: no convergence after " + std::to_string(tol.max_iter) +
                         " iterations");
}

}  // namespace edsense::numerics
