#pragma once

#include <span>
#include <string>
#include <vector>

#include "lelab/exponents.hpp"
#include "lelab/radial.hpp"

namespace lelab {

/// Weights of the Pohozaev multiplier, a1 + a2 = d - 2.
struct PohozaevWeights {
  double a1;
  double a2;

  /// a2 is fixed as (d - 2) - a1.
  static PohozaevWeights from_a1(const SystemParams& params, double a1);
};

/// Outcome of one numerical check. passed holds exactly when
/// residual <= tolerance (a NaN residual never passes).
struct VerificationReport {
  std::string check;
  SystemParams params;
  double lhs;
  double rhs;
  double residual;
  double tolerance;
  bool passed;
  std::string details;
};

/// Both PDE residuals of (a r^-α, b r^-β) at the given radii, from the closed
/// form Laplacian Δ r^-α = α(α+2-d) r^-α-2. Reports the largest relative
/// residual. Throws Error(UndefinedSingular) when λ or μ is not positive.
VerificationReport check_singular_residual(const SystemParams& params, std::span<const double> radii);
/// Same with caller-chosen amplitudes (used to confirm perturbations fail).
VerificationReport check_singular_residual(const SystemParams& params, SingularAmplitudes amplitudes,
                                           std::span<const double> radii);

/// max over samples of v^{p+1}(q+1) / ((p+1) u^{q+1}) - 1, clipped at 0.
/// Throws Error(InvalidInput) unless the trajectory is positive.
VerificationReport check_comparison(const RadialSolution& sol);

/// Integral identity for radial solutions with the sphere measure cancelled:
///
///   (d/(q+1) - a1) ∫ u^{q+1} r^{d-1} + (d/(p+1) - a2) ∫ v^{p+1} r^{d-1}
///     = R^d (u^{q+1}/(q+1) + v^{p+1}/(p+1)) + R^{d-1}(a1 u v' + a2 v u') + R^d u' v'
///
/// with integrals over [0, R] and boundary terms at R. The residual is
/// |LHS - RHS| scaled by the largest single term, so it stays meaningful
/// when both sides vanish.
VerificationReport check_pohozaev(const RadialSolution& sol, double R, PohozaevWeights weights);

/// Log-log slope of M(R) = ∫_0^R u^s r^{d-1} dr over the radii, compared with
/// max(0, d - sα). A negative d - sα means M saturates; the details field
/// says so. Throws Error(InsufficientDecayWindow) for fewer than four radii,
/// non-increasing radii, s <= 0 or a solution that is not positive over them.
VerificationReport check_energy_growth(const RadialSolution& sol, double s, std::span<const double> radii);

/// Quotient [∫ φ'^2 r^{d-1} - γ²/4 ∫ φ² r^{d-3}] / ∫ φ² r^{d-3} for the
/// plateau family φ_t = r^{-(d-2)/2} k_t(ln r), t = 1..n. k_t is 1 on
/// |s| <= t and falls off as cos² over one more unit of s.
std::vector<double> rayleigh_quotients(const SystemParams& params, int n_cutoffs);

/// Compares inf_t Q(φ_t) (which approaches H from above) with the weight
/// √(pqλμ) of the linearization at the singular pair. lhs is the infimum, rhs
/// the weight. The residual is the relative gap between the infimum and H
/// when sign(inf Q - weight) agrees with sign(jl_margin) and +inf otherwise;
/// tolerance 0.02. Throws Error(UndefinedSingular) when λ or μ is not positive.
VerificationReport rayleigh_stability_margin(const SystemParams& params, int n_cutoffs);

/// m_ℓ = ℓ(ℓ+d-2) + H - √(pq) a^{(q-1)/2} b^{(p-1)/2} for ℓ = 0..l_max.
std::vector<double> spherical_margins(const SystemParams& params, int l_max);

/// lhs is min_ℓ m_ℓ as computed from the amplitudes, rhs the closed form
/// H - √(pqλμ); the residual is their relative difference, tolerance 1e-12.
VerificationReport spherical_mode_margins(const SystemParams& params, int l_max);

}  // namespace lelab
