#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

namespace lelab {

/// Real polynomial with coefficients stored in ascending order of degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending);
  Polynomial(std::initializer_list<double> ascending);

  int degree() const noexcept { return static_cast<int>(coef_.size()) - 1; }
  std::span<const double> coefficients() const noexcept { return coef_; }

  double operator()(double x) const noexcept;
  Polynomial derivative() const;

  /// Upper bound on the modulus of every root: 1 + max_i |c_i / c_n|.
  double cauchy_bound() const;

  /// Bound on the rounding error of evaluating at x by Horner's rule.
  double evaluation_error(double x) const noexcept;

 private:
  std::vector<double> coef_;
};

/// All distinct real roots in increasing order.
///
/// Roots are isolated recursively: the real roots of the derivative split the
/// Cauchy interval into pieces on which the polynomial is monotone, and each
/// piece with a sign change is refined by bisection down to adjacent doubles.
/// A critical point where the value vanishes within evaluation error is
/// reported as a (tangential) root.
std::vector<double> real_roots(const Polynomial& poly);

/// Bisection of a sign change of `f` on [lo, hi] until the bracket cannot be
/// split further in double precision or its relative width drops below rel_tol.
template <class F>
double bisect_root(F&& f, double lo, double hi, double rel_tol = 0.0) {
  double f_lo = f(lo);
  if (f_lo == 0.0) return lo;
  const double f_hi = f(hi);
  if (f_hi == 0.0) return hi;
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (rel_tol > 0.0 && hi - lo <= rel_tol * scale) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace lelab
