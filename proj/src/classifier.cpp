#include "lelab/classifier.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "lelab/error.hpp"
#include "lelab/parallel.hpp"

namespace lelab {

std::string_view to_string(Criticality c) noexcept {
  switch (c) {
    case Criticality::Subcritical: return "SUBCRITICAL";
    case Criticality::CriticalHyperbola: return "CRITICAL_HYPERBOLA";
    case Criticality::Supercritical: return "SUPERCRITICAL";
  }
  return "UNKNOWN";
}

std::string_view to_string(CurveKind k) noexcept {
  return k == CurveKind::JosephLundgren ? "JL" : "HYPERBOLA";
}

std::string_view to_string(PointStatus s) noexcept {
  switch (s) {
    case PointStatus::OnCurve: return "on-curve";
    case PointStatus::AboveRange: return "out-of-range-high";
    case PointStatus::BelowRange: return "out-of-range-low";
    case PointStatus::NoCrossing: return "no-crossing";
  }
  return "unknown";
}

Criticality criticality(const SystemParams& params) {
  const double gap = criticality_gap(params);
  if (std::abs(gap) <= kHyperbolaBand) return Criticality::CriticalHyperbola;
  return gap > 0.0 ? Criticality::Subcritical : Criticality::Supercritical;
}

RegimeReport classify(const SystemParams& params) {
  RegimeReport r{params,
                 derive_constants(params),
                 criticality(params),
                 jl_margin(params),
                 largest_root(params, QuarticKind::PlainH),
                 largest_root(params, QuarticKind::JosephLundgren),
                 false,
                 std::nullopt,
                 std::nullopt,
                 std::nullopt,
                 std::nullopt,
                 {}};

  // The curve H^2 = pq λ μ only separates regimes in the supercritical range;
  // off it λ or μ can change sign and the margin loses its meaning.
  r.on_or_above_jl = r.criticality == Criticality::Supercritical && r.jl_margin >= 0.0;

  const double d = params.d();
  if (!params.integer_dimension()) {
    r.notes.emplace_back("analytic-continuation: non-integer dimension, theorem flags not applicable");
  } else {
    r.thm_d_le_10_applies = d <= 10.0;
    r.thm_below_jl_applies = !r.on_or_above_jl;
    r.thm_quartic_applies = d < 2.0 + 2.0 * r.x0_plain;
    r.thm_stable_radial_exists = d >= 11.0 && r.on_or_above_jl;
  }

  if (r.criticality == Criticality::CriticalHyperbola) {
    r.notes.emplace_back(
        "on the critical hyperbola: nonexistence for solutions stable outside a compact set does not apply "
        "(ground states exist)");
  } else {
    r.notes.emplace_back("off the critical hyperbola: nonexistence results extend to solutions stable outside a compact set");
  }
  if (r.criticality == Criticality::Subcritical) {
    r.notes.emplace_back("subcritical: no positive radial solution; the Joseph-Lundgren margin is not meaningful here");
  }
  if (r.thm_below_jl_applies.value_or(false)) {
    r.notes.emplace_back(
        "below-JL nonexistence is conditional on asymptotic homogeneity (blow-down limits homogeneous), "
        "which a radial sample cannot decide");
  }
  if (r.thm_stable_radial_exists.value_or(false)) {
    r.notes.emplace_back("positive radial stable solutions exist; the singular solution is stable");
  }
  return r;
}

std::vector<CurvePoint> CurveTrace::on_curve() const {
  std::vector<CurvePoint> out;
  for (const auto& s : samples) {
    if (s.status == PointStatus::OnCurve) out.push_back(s);
  }
  return out;
}

namespace {

void check_sweep(double p_min, double p_max, int n) {
  if (!(n >= 1) || !std::isfinite(p_min) || !std::isfinite(p_max) || p_min > p_max || (n == 1 && p_min != p_max)) {
    std::ostringstream why;
    why << "invalid sweep p in [" << p_min << ", " << p_max << "] with n=" << n;
    throw Error(ErrorCode::InvalidInput, why.str());
  }
}

double sample_p(double p_min, double p_max, int n, int i) {
  if (n == 1) return p_min;
  if (i == n - 1) return p_max;
  return p_min + (p_max - p_min) * static_cast<double>(i) / static_cast<double>(n - 1);
}

PointStatus range_status(double p, double q) {
  constexpr double band = 1e-12;
  if (q > p * (1.0 + band)) return PointStatus::AboveRange;
  if (q < 1.0 - band) return PointStatus::BelowRange;
  return PointStatus::OnCurve;
}

bool supercritical_unchecked(double p, double q, double d) {
  return 1.0 / (p + 1.0) + 1.0 / (q + 1.0) - (1.0 - 2.0 / d) < 0.0;
}

double jl_tolerance(double p, double q, double d) {
  const auto c = detail::constants_unchecked(p, q, d);
  return kJlBand * std::max(1.0, c.H * c.H);
}

// Root of the margin in q between two supercritical samples of opposite sign.
double refine_q(double p, double d, double q_lo, double q_hi) {
  return bisect_root([&](double q) { return detail::jl_margin_unchecked(p, q, d); }, q_lo, q_hi);
}

CurvePoint jl_point(double d, double p) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (!(p > 1.0)) return {p, nan, PointStatus::NoCrossing};

  auto margin = [&](double q) { return detail::jl_margin_unchecked(p, q, d); };
  auto usable = [&](double q) { return q * p > 1.0 && supercritical_unchecked(p, q, d); };

  // Scan [1, p]; an endpoint already within the band counts as on the curve.
  constexpr int kScan = 64;
  std::optional<double> prev_q;
  double prev_m = 0.0;
  bool any_negative = false;
  bool any_nonnegative = false;
  for (int k = 0; k <= kScan; ++k) {
    const double q = k == kScan ? p : 1.0 + (p - 1.0) * static_cast<double>(k) / kScan;
    if (!usable(q)) {
      prev_q.reset();
      continue;
    }
    const double m = margin(q);
    if (std::abs(m) < jl_tolerance(p, q, d)) return {p, q, PointStatus::OnCurve};
    (m < 0.0 ? any_negative : any_nonnegative) = true;
    if (prev_q && (prev_m < 0.0) != (m < 0.0)) {
      const double root = refine_q(p, d, *prev_q, q);
      return {p, root, range_status(p, root)};
    }
    prev_q = q;
    prev_m = m;
  }

  // No crossing inside [1, p]: expand the bracket monotonically outward.
  if (any_negative && !any_nonnegative) {
    double q_lo = p;
    for (int k = 0; k < 60; ++k) {
      const double q_hi = 2.0 * q_lo;
      if (!usable(q_hi)) break;
      if (margin(q_hi) >= 0.0) {
        const double root = refine_q(p, d, q_lo, q_hi);
        return {p, root, range_status(p, root)};
      }
      q_lo = q_hi;
    }
  } else if (any_nonnegative && !any_negative) {
    double q_hi = 1.0;
    for (int k = 1; k < 60; ++k) {
      const double q_lo = 1.0 / p + (1.0 - 1.0 / p) * std::ldexp(1.0, -k);
      if (!usable(q_lo)) break;
      if (margin(q_lo) < 0.0) {
        const double root = refine_q(p, d, q_lo, q_hi);
        return {p, root, range_status(p, root)};
      }
      q_hi = q_lo;
    }
  }
  return {p, nan, PointStatus::NoCrossing};
}

}  // namespace

CurveTrace trace_hyperbola(double d, double p_min, double p_max, int n) {
  check_sweep(p_min, p_max, n);
  CurveTrace trace{d, CurveKind::Hyperbola, {}};
  trace.samples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double p = sample_p(p_min, p_max, n, i);
    const double denom = 1.0 - 2.0 / d - 1.0 / (p + 1.0);
    if (!(denom > 0.0)) {
      trace.samples.push_back({p, std::numeric_limits<double>::quiet_NaN(), PointStatus::NoCrossing});
      continue;
    }
    const double q = 1.0 / denom - 1.0;
    trace.samples.push_back({p, q, range_status(p, q)});
  }
  if (trace.empty()) {
    std::ostringstream why;
    why << "no p in [" << p_min << ", " << p_max << "] gives q in [1, p] at d=" << d;
    throw Error(ErrorCode::EmptyTrace, why.str());
  }
  return trace;
}

CurveTrace trace_jl_curve(double d, double p_min, double p_max, int n) {
  check_sweep(p_min, p_max, n);
  CurveTrace trace{d, CurveKind::JosephLundgren, std::vector<CurvePoint>(static_cast<std::size_t>(n))};
  detail::parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    trace.samples[i] = jl_point(d, sample_p(p_min, p_max, n, static_cast<int>(i)));
  });
  return trace;
}

double jl_critical_dimension(double p, double q) {
  if (!(p * q > 1.0)) throw Error(ErrorCode::InvalidInput, "jl_critical_dimension requires pq > 1");
  const auto c = detail::constants_unchecked(p, q, 3.0);
  auto margin = [&](double d) { return detail::jl_margin_unchecked(p, q, d); };
  // At d = 2 + α + β the margin equals α²β²(1 - pq) < 0; it grows like d^4.
  const double d_lo = 2.0 + c.alpha + c.beta;
  double lo = d_lo;
  double hi = d_lo + 1.0;
  for (int k = 0; margin(hi) < 0.0; ++k) {
    if (k > 200) throw Error(ErrorCode::NoRealRoot, "no Joseph-Lundgren crossing in d");
    lo = hi;
    hi = d_lo + 2.0 * (hi - d_lo);
  }
  return bisect_root(margin, lo, hi);
}

std::vector<RegimeReport> grid_classify(double d, AxisRange p_range, AxisRange q_range, int resolution) {
  if (resolution < 2 || !(p_range.lo <= p_range.hi) || !(q_range.lo <= q_range.hi)) {
    throw Error(ErrorCode::InvalidInput, "grid needs nonempty ranges and resolution >= 2");
  }
  const auto n = static_cast<std::size_t>(resolution);
  std::vector<std::optional<RegimeReport>> cells(n * n);
  detail::parallel_for(n * n, [&](std::size_t idx) {
    const double p = sample_p(p_range.lo, p_range.hi, resolution, static_cast<int>(idx / n));
    const double q = sample_p(q_range.lo, q_range.hi, resolution, static_cast<int>(idx % n));
    if (SystemParams::admissible(p, q, d)) cells[idx] = classify(SystemParams(p, q, d));
  });
  std::vector<RegimeReport> rows;
  for (auto& c : cells) {
    if (c) rows.push_back(std::move(*c));
  }
  return rows;
}

}  // namespace lelab
