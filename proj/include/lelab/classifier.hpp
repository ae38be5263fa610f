#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lelab/exponents.hpp"

namespace lelab {

enum class Criticality { Subcritical, CriticalHyperbola, Supercritical };

std::string_view to_string(Criticality c) noexcept;

/// Half-width of the band around the critical hyperbola treated as equality.
inline constexpr double kHyperbolaBand = 1e-12;

Criticality criticality(const SystemParams& params);

/// Regime of a triple with respect to the Liouville-type results.
///
/// The four theorem flags are empty for non-integer d (those results are
/// stated in integer dimensions only). When set:
///  - thm_d_le_10_applies: d <= 10, no nonnegative stable solution but zero.
///  - thm_below_jl_applies: strictly below the Joseph-Lundgren curve, no
///    nontrivial stable solution that is asymptotically homogeneous.
///  - thm_quartic_applies: d < 2 + 2 x0_plain, no nontrivial stable solution.
///  - thm_stable_radial_exists: d >= 11, supercritical and on or above the
///    curve; a positive radial stable solution exists.
struct RegimeReport {
  SystemParams params;
  DerivedConstants constants;
  Criticality criticality;
  double jl_margin;
  double x0_plain;
  double x0_jl;
  bool on_or_above_jl;
  std::optional<bool> thm_d_le_10_applies;
  std::optional<bool> thm_below_jl_applies;
  std::optional<bool> thm_quartic_applies;
  std::optional<bool> thm_stable_radial_exists;
  std::vector<std::string> notes;
};

RegimeReport classify(const SystemParams& params);

enum class CurveKind { JosephLundgren, Hyperbola };
std::string_view to_string(CurveKind k) noexcept;

enum class PointStatus {
  OnCurve,        // admissible point with q in [1, p]
  AboveRange,     // crossing exists but q > p
  BelowRange,     // crossing exists but q < 1
  NoCrossing,     // no admissible q found for this p
};
std::string_view to_string(PointStatus s) noexcept;

struct CurvePoint {
  double p;
  double q;  // NaN when status is NoCrossing
  PointStatus status;
};

struct CurveTrace {
  double d;
  CurveKind curve;
  std::vector<CurvePoint> samples;  // one per requested p, sorted by p

  std::vector<CurvePoint> on_curve() const;
  bool empty() const { return on_curve().empty(); }
};

/// Relative tolerance on the margin for JL points: |margin| < kJlBand max(1, H^2).
inline constexpr double kJlBand = 1e-9;

/// q(p) = 1/(1 - 2/d - 1/(p+1)) - 1. Throws Error(EmptyTrace) when no sample
/// is admissible.
CurveTrace trace_hyperbola(double d, double p_min, double p_max, int n);

/// q*(p) with H^2 = pq λ μ by bisection in q at each sampled p. Samples fan
/// out over worker threads; output order is the sample order.
CurveTrace trace_jl_curve(double d, double p_min, double p_max, int n);

/// Dimension at which (p, q) crosses onto the Joseph-Lundgren curve, found by
/// bisection of the margin in d above the critical dimension 2 + α + β.
/// Requires pq > 1; the p >= q normalization is not needed here.
double jl_critical_dimension(double p, double q);

struct AxisRange {
  double lo;
  double hi;
};

/// Row-major sweep (p outer, q inner) over a resolution x resolution lattice,
/// skipping lattice points that violate p >= q >= 1, pq > 1.
std::vector<RegimeReport> grid_classify(double d, AxisRange p_range, AxisRange q_range, int resolution);

}  // namespace lelab
