#include <cmath>
#include <sstream>
#include <utility>

#include "lelab/classifier.hpp"
#include "lelab/error.hpp"
#include "lelab/radial.hpp"

namespace lelab {

ShootResult shoot_separatrix(const SystemParams& params, std::pair<double, double> v0_bracket,
                             const ShootOptions& options) {
  auto [lo, hi] = v0_bracket;
  if (lo > hi) std::swap(lo, hi);
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    std::ostringstream why;
    why << "bracket (" << v0_bracket.first << ", " << v0_bracket.second << ") is degenerate";
    throw Error(ErrorCode::BadBracket, why.str());
  }

  auto outcome = [&](double v0) { return integrate(params, v0, options.r_decide, options.rel_tol).status().kind; };
  const TerminationKind at_lo = outcome(lo);
  const TerminationKind at_hi = outcome(hi);
  if (at_lo == at_hi) {
    std::ostringstream why;
    why << "both ends of (" << lo << ", " << hi << ") end with " << to_string(at_lo);
    throw Error(ErrorCode::BadBracket, why.str());
  }

  int iterations = 0;
  while (hi - lo > options.v0_rel_width * 0.5 * (lo + hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++iterations;
    const TerminationKind k = outcome(mid);
    if (k == at_lo) {
      lo = mid;
    } else if (k == at_hi) {
      hi = mid;
    } else {
      // A third outcome (typically positive all the way to r_decide) means
      // the separatrix is resolved as far as the integration can see.
      lo = hi = mid;
      break;
    }
  }
  const double v0 = 0.5 * (lo + hi);
  return {v0, integrate(params, v0, options.r_output, options.rel_tol), iterations};
}

ShootResult shoot_ground_state(const SystemParams& params, std::pair<double, double> v0_bracket,
                               const ShootOptions& options) {
  if (criticality(params) != Criticality::CriticalHyperbola) {
    std::ostringstream why;
    why << "ground states exist only on the critical hyperbola (gap=" << criticality_gap(params) << ")";
    throw Error(ErrorCode::InvalidParams, why.str());
  }
  return shoot_separatrix(params, v0_bracket, options);
}

std::vector<ShotSurveyEntry> survey_shots(const SystemParams& params, double v0_lo, double v0_hi, int n,
                                          double r_max, double rel_tol) {
  if (!(v0_lo > 0.0) || !(v0_hi >= v0_lo) || n < 1) throw Error(ErrorCode::InvalidInput, "bad v0 survey range");
  std::vector<ShotSurveyEntry> out;
  out.reserve(static_cast<std::size_t>(n));
  const double step = n > 1 ? std::log(v0_hi / v0_lo) / (n - 1) : 0.0;
  for (int i = 0; i < n; ++i) {
    const double v0 = i == n - 1 ? v0_hi : v0_lo * std::exp(step * i);
    out.push_back({v0, integrate(params, v0, r_max, rel_tol).status()});
  }
  return out;
}

}  // namespace lelab
