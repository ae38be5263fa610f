#include "lelab/exponents.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "lelab/error.hpp"

namespace lelab {

SystemParams::SystemParams(double p, double q, double d) : p_(p), q_(q), d_(d) {
  std::ostringstream why;
  if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(d)) {
    why << "exponents and dimension must be finite";
  } else if (!(p >= q)) {
    why << "require p >= q (got p=" << p << ", q=" << q << ")";
  } else if (!(q >= 1.0)) {
    why << "require q >= 1 (got q=" << q << ")";
  } else if (!(p * q > 1.0)) {
    why << "require pq > 1 (got pq=" << p * q << ")";
  } else if (!(d >= 3.0)) {
    why << "require d >= 3 (got d=" << d << ")";
  } else {
    return;
  }
  throw Error(ErrorCode::InvalidParams, why.str());
}

bool SystemParams::admissible(double p, double q, double d) noexcept {
  return std::isfinite(p) && std::isfinite(q) && std::isfinite(d) && p >= q && q >= 1.0 && p * q > 1.0 &&
         d >= 3.0;
}

bool SystemParams::integer_dimension() const noexcept { return d_ == std::floor(d_); }

namespace detail {

DerivedConstants constants_unchecked(double p, double q, double d) {
  const double pq1 = p * q - 1.0;
  DerivedConstants c{};
  c.alpha = 2.0 * (p + 1.0) / pq1;
  c.beta = 2.0 * (q + 1.0) / pq1;
  c.gamma = c.alpha - c.beta;
  c.H = ((d - 2.0) * (d - 2.0) - c.gamma * c.gamma) / 4.0;
  c.lambda = c.alpha * (d - 2.0 - c.alpha);
  c.mu = c.beta * (d - 2.0 - c.beta);
  if (c.lambda > 0.0 && c.mu > 0.0) {
    // From a λ = b^p and b μ = a^q.
    c.a_coef = std::pow(c.lambda * std::pow(c.mu, p), 1.0 / pq1);
    c.b_coef = std::pow(c.mu * std::pow(c.lambda, q), 1.0 / pq1);
  }
  return c;
}

double jl_margin_unchecked(double p, double q, double d) {
  const auto c = constants_unchecked(p, q, d);
  return c.H * c.H - p * q * c.lambda * c.mu;
}

}  // namespace detail

DerivedConstants derive_constants(const SystemParams& params) {
  return detail::constants_unchecked(params.p(), params.q(), params.d());
}

SingularAmplitudes singular_amplitudes(const SystemParams& params) {
  const auto c = derive_constants(params);
  if (!c.a_coef || !c.b_coef) {
    std::ostringstream why;
    why << "singular solution needs lambda > 0 and mu > 0 (lambda=" << c.lambda << ", mu=" << c.mu << ")";
    throw Error(ErrorCode::UndefinedSingular, why.str());
  }
  return {*c.a_coef, *c.b_coef};
}

double criticality_gap(const SystemParams& params) {
  return 1.0 / (params.p() + 1.0) + 1.0 / (params.q() + 1.0) - (1.0 - 2.0 / params.d());
}

Polynomial quartic(const SystemParams& params, QuarticKind kind) {
  const auto c = derive_constants(params);
  const double k = params.p() * params.q() * c.alpha * c.beta;
  // -k (4x^2 - 2(α+β)x + αβ)
  std::vector<double> coef{-k * c.alpha * c.beta, 2.0 * k * (c.alpha + c.beta), -4.0 * k, 0.0, 1.0};
  if (kind == QuarticKind::JosephLundgren) {
    const double g2 = c.gamma * c.gamma / 4.0;
    coef[0] += g2 * g2;
    coef[2] -= 2.0 * g2;
  }
  return Polynomial(std::move(coef));
}

double quartic_eval(const SystemParams& params, QuarticKind kind, double x) {
  const auto c = derive_constants(params);
  const double k = params.p() * params.q() * c.alpha * c.beta;
  const double lead = kind == QuarticKind::PlainH ? x * x * x * x
                                                  : std::pow(x * x - c.gamma * c.gamma / 4.0, 2);
  return lead - k * (4.0 * x * x - 2.0 * (c.alpha + c.beta) * x + c.alpha * c.beta);
}

double largest_root(const SystemParams& params, QuarticKind kind) {
  const auto roots = real_roots(quartic(params, kind));
  if (roots.empty()) throw Error(ErrorCode::NoRealRoot, "quartic has no real root");
  return roots.back();
}

double jl_margin(const SystemParams& params) {
  return detail::jl_margin_unchecked(params.p(), params.q(), params.d());
}

MoserConstants moser_constants(const SystemParams& params, double a) {
  const double p = params.p();
  const double q = params.q();
  if (!(a >= (q + 1.0) / 2.0)) {
    std::ostringstream why;
    why << "Moser exponent a=" << a << " below (q+1)/2=" << (q + 1.0) / 2.0;
    throw Error(ErrorCode::InvalidMoserExponent, why.str());
  }
  const double b = a * (p + 1.0) / (q + 1.0);
  const double s = std::sqrt(p * q);
  return {a, b, s * (2.0 * a - 1.0) / (a * a), s * (2.0 * b - 1.0) / (b * b)};
}

}  // namespace lelab
