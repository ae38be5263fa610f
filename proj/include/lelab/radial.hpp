#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "lelab/exponents.hpp"

namespace lelab {

/// One sample of a radial pair: u(r), v(r) and their radial derivatives.
struct RadialState {
  double r;
  double u;
  double v;
  double du;
  double dv;
};

enum class TerminationKind { Completed, UHitZero, VHitZero, Blowup, StepUnderflow };
std::string_view to_string(TerminationKind k) noexcept;

struct Termination {
  TerminationKind kind;
  double r;  // radius of the event, or the last radius reached
};

/// Regular data at the origin, u(0) = u0 and v(0) = v0.
struct InitialData {
  double u0;
  double v0;
};

/// Sampled radial pair together with how the integration ended.
///
/// Between samples the pair is reconstructed by quintic Hermite
/// interpolation: values and first derivatives come from the samples and
/// second (third) derivatives from the ODE itself, so evaluation is
/// sixth-order accurate whenever the samples solve the system.
class RadialSolution {
 public:
  RadialSolution(SystemParams params, std::optional<InitialData> origin, std::vector<RadialState> samples,
                 Termination status);

  const SystemParams& params() const noexcept { return params_; }
  const std::optional<InitialData>& origin() const noexcept { return origin_; }
  double u0() const noexcept { return origin_ ? origin_->u0 : 0.0; }
  double v0() const noexcept { return origin_ ? origin_->v0 : 0.0; }
  std::span<const RadialState> samples() const noexcept { return samples_; }
  const Termination& status() const noexcept { return status_; }

  double r_first() const noexcept { return samples_.front().r; }
  double r_last() const noexcept { return samples_.back().r; }
  bool covers(double r_lo, double r_hi) const noexcept;
  bool has_derivatives() const noexcept { return has_derivatives_; }
  /// u > 0 and v > 0 at every sample.
  bool positive() const noexcept;

  /// Dense evaluation. Throws Error(WindowNotCovered) outside the sampled
  /// range and Error(DerivativesMissing) without stored derivatives. For
  /// r < r_first the origin series is used when origin data is known.
  RadialState at(double r) const;

  /// ∫_0^R f(state) dr, integrating each sample interval adaptively. The
  /// piece below r_first uses the origin series (or is dropped when no
  /// origin data is attached, e.g. sampled singular profiles).
  double integrate(const std::function<double(const RadialState&)>& f, double R) const;

 private:
  SystemParams params_;
  std::optional<InitialData> origin_;
  std::vector<RadialState> samples_;
  Termination status_;
  bool has_derivatives_;
};

/// Radius where integration starts; the solution below it is the
/// second-order series forced by regularity at the origin.
inline constexpr double kRadialStart = 1e-6;
/// |u| or |v| above this counts as blowup.
inline constexpr double kBlowupThreshold = 1e8;

/// Integrates u'' + (d-1)/r u' + |v|^{p-1}v = 0, v'' + (d-1)/r v' + |u|^{q-1}u = 0
/// from the regular origin with an adaptive Dormand-Prince 5(4) pair. Stops
/// at r_max or at the first zero of u or v (located on the dense output).
RadialSolution integrate(const SystemParams& params, InitialData init, double r_max, double rel_tol);

/// Normalized start u(0) = 1, v(0) = v0.
RadialSolution integrate(const SystemParams& params, double v0, double r_max, double rel_tol);

/// Exact singular pair (a r^-α, b r^-β) sampled on a log-spaced grid.
RadialSolution sample_singular(const SystemParams& params, double r_lo, double r_hi, int n);

struct ShootOptions {
  double rel_tol = 1e-12;
  double r_decide = 1e14;  // integrate trial shots this far before calling them positive
  double r_output = 1e3;   // extent of the returned trajectory
  double v0_rel_width = 1e-12;
};

struct ShootResult {
  double v0;
  RadialSolution solution;
  int iterations;
};

/// Bisects v0 between two initial values whose trajectories end differently
/// (e.g. u reaches zero first versus v reaches zero first). The limit is the
/// trajectory that stays positive. Throws Error(BadBracket) when both ends
/// give the same outcome.
ShootResult shoot_separatrix(const SystemParams& params, std::pair<double, double> v0_bracket,
                             const ShootOptions& options = {});

/// Ground state on the critical hyperbola. Throws Error(InvalidParams) off the
/// hyperbola and Error(BadBracket) for a degenerate bracket.
ShootResult shoot_ground_state(const SystemParams& params, std::pair<double, double> v0_bracket,
                               const ShootOptions& options = {});

/// Outcomes of a log-spaced scan of v0, for locating brackets.
struct ShotSurveyEntry {
  double v0;
  Termination status;
};
std::vector<ShotSurveyEntry> survey_shots(const SystemParams& params, double v0_lo, double v0_hi, int n,
                                          double r_max, double rel_tol);

enum class DecayClass { Slow, Fast, Undetermined };
std::string_view to_string(DecayClass c) noexcept;

struct DecayFit {
  double exponent;
  double amplitude;
  double r_lo;
  double r_hi;
  double residual;  // max relative deviation of the fitted power law
  DecayClass classification;
};

/// Least-squares slope of log u (and log v) against log r on [r_lo, r_hi].
/// Throws Error(InsufficientWindow) unless r_hi >= 4 r_lo and the solution
/// is positive and sampled over the window.
std::pair<DecayFit, DecayFit> fit_decay(const RadialSolution& sol, double r_lo, double r_hi);

/// (R^α u(R r), R^β v(R r)) on the full sampled range.
RadialSolution blow_down(const RadialSolution& sol, double R);

/// Same, restricted to the output window [r_lo, r_hi]. Throws
/// Error(WindowNotCovered) unless sol covers [R r_lo, R r_hi].
RadialSolution blow_down(const RadialSolution& sol, double R, double r_lo, double r_hi);

namespace detail {

/// Second and third radial derivatives implied by the ODE at a state.
struct Curvature {
  double d2u, d2v, d3u, d3v;
};
Curvature curvature(const SystemParams& params, const RadialState& s);

/// Quintic Hermite reconstruction between two states at r in [a.r, b.r].
RadialState hermite(const SystemParams& params, const RadialState& a, const RadialState& b, double r);

/// Regular series about the origin to second order.
RadialState origin_series(const SystemParams& params, InitialData init, double r);

}  // namespace detail

}  // namespace lelab
