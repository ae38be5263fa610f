#include <cmath>
#include <sstream>
#include <vector>

#include "lelab/error.hpp"
#include "lelab/radial.hpp"

namespace lelab {

std::string_view to_string(DecayClass c) noexcept {
  switch (c) {
    case DecayClass::Slow: return "SLOW";
    case DecayClass::Fast: return "FAST";
    case DecayClass::Undetermined: return "UNDETERMINED";
  }
  return "UNKNOWN";
}

namespace {

constexpr double kClassBand = 0.05;

DecayClass classify_exponent(double exponent, double slow, double fast) {
  const double ds = std::abs(exponent - slow);
  const double df = std::abs(exponent - fast);
  const bool is_slow = ds < kClassBand * slow;
  const bool is_fast = df < kClassBand * fast;
  if (is_slow && is_fast) return ds <= df ? DecayClass::Slow : DecayClass::Fast;
  if (is_slow) return DecayClass::Slow;
  if (is_fast) return DecayClass::Fast;
  return DecayClass::Undetermined;
}

DecayFit fit_power_law(const std::vector<double>& log_r, const std::vector<double>& log_f, double r_lo, double r_hi,
                       double slow, double fast) {
  const auto n = static_cast<double>(log_r.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < log_r.size(); ++i) {
    sx += log_r[i];
    sy += log_f[i];
    sxx += log_r[i] * log_r[i];
    sxy += log_r[i] * log_f[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double residual = 0.0;
  for (std::size_t i = 0; i < log_r.size(); ++i) {
    residual = std::max(residual, std::abs(std::expm1(intercept + slope * log_r[i] - log_f[i])));
  }
  const double exponent = -slope;
  return {exponent, std::exp(intercept), r_lo, r_hi, residual, classify_exponent(exponent, slow, fast)};
}

}  // namespace

std::pair<DecayFit, DecayFit> fit_decay(const RadialSolution& sol, double r_lo, double r_hi) {
  if (!(r_lo > 0.0) || !(r_hi >= 4.0 * r_lo) || !sol.covers(r_lo, r_hi)) {
    std::ostringstream why;
    why << "decay window [" << r_lo << ", " << r_hi << "] needs r_hi >= 4 r_lo inside the sampled range ["
        << sol.r_first() << ", " << sol.r_last() << "]";
    throw Error(ErrorCode::InsufficientWindow, why.str());
  }

  std::vector<double> log_r, log_u, log_v;
  auto take = [&](const RadialState& s) {
    if (!(s.u > 0.0) || !(s.v > 0.0)) {
      throw Error(ErrorCode::InsufficientWindow, "solution is not positive on the decay window");
    }
    log_r.push_back(std::log(s.r));
    log_u.push_back(std::log(s.u));
    log_v.push_back(std::log(s.v));
  };
  if (sol.has_derivatives()) {
    constexpr int kPoints = 65;
    const double step = std::log(r_hi / r_lo) / (kPoints - 1);
    for (int i = 0; i < kPoints; ++i) take(sol.at(i == kPoints - 1 ? r_hi : r_lo * std::exp(step * i)));
  } else {
    for (const auto& s : sol.samples()) {
      if (s.r >= r_lo && s.r <= r_hi) take(s);
    }
    if (log_r.size() < 2) throw Error(ErrorCode::InsufficientWindow, "fewer than two samples in the decay window");
  }

  const auto c = derive_constants(sol.params());
  const double fast = sol.params().d() - 2.0;
  return {fit_power_law(log_r, log_u, r_lo, r_hi, c.alpha, fast), fit_power_law(log_r, log_v, r_lo, r_hi, c.beta, fast)};
}

namespace {

RadialState rescale(const RadialState& s, double R, double ra, double rb) {
  return {s.r / R, ra * s.u, rb * s.v, ra * R * s.du, rb * R * s.dv};
}

}  // namespace

RadialSolution blow_down(const RadialSolution& sol, double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorCode::InvalidInput, "blow-down factor must be positive");
  const auto c = derive_constants(sol.params());
  const double ra = std::pow(R, c.alpha);
  const double rb = std::pow(R, c.beta);
  std::vector<RadialState> out;
  out.reserve(sol.samples().size());
  for (const auto& s : sol.samples()) out.push_back(rescale(s, R, ra, rb));
  std::optional<InitialData> origin;
  if (sol.origin()) origin = InitialData{ra * sol.origin()->u0, rb * sol.origin()->v0};
  return RadialSolution(sol.params(), origin, std::move(out), {sol.status().kind, sol.status().r / R});
}

RadialSolution blow_down(const RadialSolution& sol, double R, double r_lo, double r_hi) {
  if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorCode::InvalidInput, "blow-down factor must be positive");
  if (!(r_lo > 0.0) || !(r_hi > r_lo) || !sol.covers(R * r_lo, R * r_hi)) {
    std::ostringstream why;
    why << "window [" << R * r_lo << ", " << R * r_hi << "] not covered by sampled range [" << sol.r_first() << ", "
        << sol.r_last() << "]";
    throw Error(ErrorCode::WindowNotCovered, why.str());
  }
  const auto c = derive_constants(sol.params());
  const double ra = std::pow(R, c.alpha);
  const double rb = std::pow(R, c.beta);
  std::vector<RadialState> out;
  out.push_back(rescale(sol.at(R * r_lo), R, ra, rb));
  for (const auto& s : sol.samples()) {
    const double x = s.r / R;
    if (x > out.back().r && x < r_hi) out.push_back(rescale(s, R, ra, rb));
  }
  const auto last = rescale(sol.at(R * r_hi), R, ra, rb);
  if (last.r > out.back().r) out.push_back(last);
  return RadialSolution(sol.params(), std::nullopt, std::move(out), {TerminationKind::Completed, out.back().r});
}

}  // namespace lelab
