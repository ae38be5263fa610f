#include "lelab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lelab/error.hpp"

namespace lelab {

namespace {

void trim(std::vector<double>& c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.empty()) c.push_back(0.0);
}

}  // namespace

Polynomial::Polynomial(std::vector<double> ascending) : coef_(std::move(ascending)) { trim(coef_); }

Polynomial::Polynomial(std::initializer_list<double> ascending) : coef_(ascending) { trim(coef_); }

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coef_.size() <= 1) return Polynomial{0.0};
  std::vector<double> d(coef_.size() - 1);
  for (std::size_t i = 1; i < coef_.size(); ++i) d[i - 1] = static_cast<double>(i) * coef_[i];
  return Polynomial(std::move(d));
}

double Polynomial::cauchy_bound() const {
  const double lead = coef_.back();
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < coef_.size(); ++i) m = std::max(m, std::abs(coef_[i] / lead));
  return 1.0 + m;
}

double Polynomial::evaluation_error(double x) const noexcept {
  double acc = 0.0;
  const double ax = std::abs(x);
  for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) acc = acc * ax + std::abs(*it);
  return 4.0 * static_cast<double>(coef_.size()) * std::numeric_limits<double>::epsilon() * acc;
}

std::vector<double> real_roots(const Polynomial& poly) {
  const int n = poly.degree();
  if (n <= 0) return {};
  if (n == 1) {
    const auto c = poly.coefficients();
    return {-c[0] / c[1]};
  }

  const double bound = poly.cauchy_bound();
  std::vector<double> knots{-bound};
  for (double c : real_roots(poly.derivative())) {
    if (c > -bound && c < bound) knots.push_back(c);
  }
  knots.push_back(bound);

  std::vector<double> roots;
  auto push = [&roots](double x) {
    if (roots.empty() || x > roots.back()) roots.push_back(x);
  };
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i];
    const double hi = knots[i + 1];
    const double f_lo = poly(lo);
    const double f_hi = poly(hi);
    if (i > 0 && std::abs(f_lo) <= poly.evaluation_error(lo)) {
      push(lo);
      continue;
    }
    if (std::signbit(f_lo) != std::signbit(f_hi) || f_hi == 0.0) {
      push(bisect_root(poly, lo, hi));
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace lelab
