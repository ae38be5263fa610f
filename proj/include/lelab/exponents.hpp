#pragma once

#include <optional>

#include "lelab/polynomial.hpp"

namespace lelab {

/// Exponent triple (p, q, d) of the system -Δu = |v|^{p-1}v, -Δv = |u|^{q-1}u
/// in R^d, normalized so that p >= q >= 1, pq > 1 and d >= 3.
///
/// Non-integer d is accepted (every closed form is analytic in d); results
/// that rest on theorems stated for integer dimensions check
/// integer_dimension() before asserting anything.
class SystemParams {
 public:
  /// Throws Error(InvalidParams) when the normalization fails.
  SystemParams(double p, double q, double d);

  static bool admissible(double p, double q, double d) noexcept;

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double d() const noexcept { return d_; }
  bool integer_dimension() const noexcept;

  bool operator==(const SystemParams&) const = default;

 private:
  double p_;
  double q_;
  double d_;
};

struct DerivedConstants {
  double alpha;   // decay exponent of u in the singular solution
  double beta;    // decay exponent of v
  double gamma;   // alpha - beta
  double H;       // ((d-2)^2 - gamma^2) / 4
  double lambda;  // alpha (d - 2 - alpha)
  double mu;      // beta (d - 2 - beta)
  // Amplitudes of (a r^-alpha, b r^-beta); absent unless lambda, mu > 0.
  std::optional<double> a_coef;
  std::optional<double> b_coef;
};

DerivedConstants derive_constants(const SystemParams& params);

struct SingularAmplitudes {
  double a;
  double b;
};

/// Throws Error(UndefinedSingular) when lambda <= 0 or mu <= 0.
SingularAmplitudes singular_amplitudes(const SystemParams& params);

/// 1/(p+1) + 1/(q+1) - (1 - 2/d): negative in the supercritical range.
double criticality_gap(const SystemParams& params);

enum class QuarticKind { PlainH, JosephLundgren };

/// x^4 - pq αβ (4x^2 - 2(α+β)x + αβ), or with x^4 replaced by (x^2 - γ^2/4)^2.
Polynomial quartic(const SystemParams& params, QuarticKind kind);
double quartic_eval(const SystemParams& params, QuarticKind kind, double x);
double largest_root(const SystemParams& params, QuarticKind kind);

/// H^2 - pq λ μ. Non-negative means on or above the Joseph-Lundgren curve.
double jl_margin(const SystemParams& params);

struct MoserConstants {
  double a;
  double b;  // a (p+1)/(q+1)
  double A;  // sqrt(pq) (2a-1)/a^2
  double B;  // sqrt(pq) (2b-1)/b^2

  bool product_exceeds_one() const noexcept { return A * B > 1.0; }
};

/// Throws Error(InvalidMoserExponent) when a < (q+1)/2.
MoserConstants moser_constants(const SystemParams& params, double a);

namespace detail {

// Closed forms without the p >= q >= 1 normalization; used where curve
// tracing has to step across p = q. Requires pq > 1.
DerivedConstants constants_unchecked(double p, double q, double d);
double jl_margin_unchecked(double p, double q, double d);

}  // namespace detail

}  // namespace lelab
