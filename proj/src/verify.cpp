#include "lelab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lelab/error.hpp"
#include "lelab/serialize.hpp"

namespace lelab {

namespace {

VerificationReport make_report(std::string check, const SystemParams& params, double lhs, double rhs,
                               double residual, double tolerance, std::string details) {
  return {std::move(check), params, lhs, rhs, residual, tolerance, residual <= tolerance, std::move(details)};
}

double rel_diff(double x, double y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

PohozaevWeights PohozaevWeights::from_a1(const SystemParams& params, double a1) {
  if (!std::isfinite(a1)) throw Error(ErrorCode::InvalidInput, "Pohozaev weight a1 must be finite");
  return {a1, (params.d() - 2.0) - a1};
}

VerificationReport check_singular_residual(const SystemParams& params, std::span<const double> radii) {
  return check_singular_residual(params, singular_amplitudes(params), radii);
}

VerificationReport check_singular_residual(const SystemParams& params, SingularAmplitudes amp,
                                           std::span<const double> radii) {
  if (radii.empty()) throw Error(ErrorCode::InvalidInput, "singular residual needs at least one radius");
  const auto c = derive_constants(params);
  if (!(c.lambda > 0.0) || !(c.mu > 0.0)) {
    throw Error(ErrorCode::UndefinedSingular, "singular pair needs lambda > 0 and mu > 0");
  }
  const double d = params.d();
  double worst = 0.0, worst_lhs = 0.0, worst_rhs = 0.0, worst_r = radii.front();
  for (const double r : radii) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidInput, "radii must be positive");
    const double u = amp.a * std::pow(r, -c.alpha);
    const double v = amp.b * std::pow(r, -c.beta);
    // -Δu = v^p and -Δv = u^q, both sides evaluated independently.
    const double pairs[2][2] = {
        {-c.alpha * (c.alpha + 2.0 - d) * amp.a * std::pow(r, -c.alpha - 2.0), std::pow(v, params.p())},
        {-c.beta * (c.beta + 2.0 - d) * amp.b * std::pow(r, -c.beta - 2.0), std::pow(u, params.q())},
    };
    for (const auto& pr : pairs) {
      const double res = rel_diff(pr[0], pr[1]);
      if (res > worst || (res == worst && worst_lhs == 0.0)) {
        worst = res;
        worst_lhs = pr[0];
        worst_rhs = pr[1];
        worst_r = r;
      }
    }
  }
  std::ostringstream details;
  details << "a=" << format_number(amp.a) << " b=" << format_number(amp.b) << " worst at r=" << format_number(worst_r)
          << " over " << radii.size() << " radii";
  return make_report("singular", params, worst_lhs, worst_rhs, worst, 1e-12, details.str());
}

VerificationReport check_comparison(const RadialSolution& sol) {
  const auto& P = sol.params();
  const double p = P.p(), q = P.q();
  double worst = -std::numeric_limits<double>::infinity();
  double worst_l = 0.0, worst_r = 0.0, worst_at = 0.0;
  auto visit = [&](double r, double u, double v) {
    if (!(u > 0.0) || !(v > 0.0)) {
      std::ostringstream why;
      why << "comparison needs a positive trajectory (u=" << u << ", v=" << v << " at r=" << r << ")";
      throw Error(ErrorCode::InvalidInput, why.str());
    }
    const double lhs = std::pow(v, p + 1.0) / (p + 1.0);
    const double rhs = std::pow(u, q + 1.0) / (q + 1.0);
    const double ratio = lhs / rhs;
    if (ratio > worst) {
      worst = ratio;
      worst_l = lhs;
      worst_r = rhs;
      worst_at = r;
    }
  };
  if (sol.origin()) visit(0.0, sol.u0(), sol.v0());
  for (const auto& s : sol.samples()) visit(s.r, s.u, s.v);
  const double residual = std::max(worst - 1.0, 0.0);
  std::ostringstream details;
  details << "largest v^(p+1)/(p+1) over u^(q+1)/(q+1) is " << format_number(worst) << " at r=" << format_number(worst_at);
  return make_report("comparison", P, worst_l, worst_r, residual, 1e-10, details.str());
}

VerificationReport check_pohozaev(const RadialSolution& sol, double R, PohozaevWeights w) {
  if (!sol.has_derivatives()) throw Error(ErrorCode::DerivativesMissing, "Pohozaev boundary terms need u' and v'");
  if (!(R > 0.0) || R > sol.r_last()) {
    std::ostringstream why;
    why << "radius " << R << " outside the sampled range (r_last=" << sol.r_last() << ")";
    throw Error(ErrorCode::WindowNotCovered, why.str());
  }
  const auto& P = sol.params();
  const double p = P.p(), q = P.q(), d = P.d();
  if (std::abs(w.a1 + w.a2 - (d - 2.0)) > 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, d)) {
    throw Error(ErrorCode::InvalidInput, "Pohozaev weights must satisfy a1 + a2 = d - 2");
  }

  const double Iu = sol.integrate([&](const RadialState& s) { return std::pow(std::abs(s.u), q + 1.0) * std::pow(s.r, d - 1.0); }, R);
  const double Iv = sol.integrate([&](const RadialState& s) { return std::pow(std::abs(s.v), p + 1.0) * std::pow(s.r, d - 1.0); }, R);
  const RadialState b = sol.at(R);

  const double bulk_u = (d / (q + 1.0) - w.a1) * Iu;
  const double bulk_v = (d / (p + 1.0) - w.a2) * Iv;
  const double Rd = std::pow(R, d);
  const double Rd1 = std::pow(R, d - 1.0);
  const double terms[] = {
      Rd * std::pow(std::abs(b.u), q + 1.0) / (q + 1.0),
      Rd * std::pow(std::abs(b.v), p + 1.0) / (p + 1.0),
      Rd1 * w.a1 * b.u * b.dv,
      Rd1 * w.a2 * b.v * b.du,
      Rd * b.du * b.dv,
  };
  const double lhs = bulk_u + bulk_v;
  double rhs = 0.0;
  double scale = std::max({std::abs(bulk_u), std::abs(bulk_v), 1e-30});
  for (const double t : terms) {
    rhs += t;
    scale = std::max(scale, std::abs(t));
  }
  scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
  const double residual = std::abs(lhs - rhs) / scale;

  std::ostringstream details;
  details << "R=" << format_number(R) << " a1=" << format_number(w.a1) << " a2=" << format_number(w.a2)
          << " int_u=" << format_number(Iu) << " int_v=" << format_number(Iv) << " scale=" << format_number(scale);
  return make_report("pohozaev", P, lhs, rhs, residual, 1e-7, details.str());
}

VerificationReport check_energy_growth(const RadialSolution& sol, double s, std::span<const double> radii) {
  const auto& P = sol.params();
  if (!(s > 0.0) || radii.size() < 4) {
    throw Error(ErrorCode::InsufficientDecayWindow, "energy growth needs s > 0 and at least four radii");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw Error(ErrorCode::InsufficientDecayWindow, "radii must be positive and increasing");
    }
  }
  if (radii.back() > sol.r_last() || !sol.positive()) {
    std::ostringstream why;
    why << "solution must stay positive up to R=" << radii.back() << " (sampled to " << sol.r_last() << ")";
    throw Error(ErrorCode::InsufficientDecayWindow, why.str());
  }

  const double d = P.d();
  const double alpha = derive_constants(P).alpha;
  std::vector<double> log_r, log_m;
  for (const double R : radii) {
    const double M = sol.integrate([&](const RadialState& st) { return std::pow(st.u, s) * std::pow(st.r, d - 1.0); }, R);
    log_r.push_back(std::log(R));
    log_m.push_back(std::log(M));
  }
  const double slope = least_squares_slope(log_r, log_m);
  const double growth = d - s * alpha;
  const double expected = std::max(0.0, growth);

  std::ostringstream details;
  details << "s=" << format_number(s) << " d-s*alpha=" << format_number(growth);
  if (growth < 0.0) details << " saturated: M(R) stays bounded, expected slope 0";
  return make_report("energy", P, slope, expected, std::abs(slope - expected), 0.1, details.str());
}

namespace {

// Plateau profile in s = ln r and its s-derivative.
struct Cutoff {
  double t;
  double k(double s) const {
    const double x = std::abs(s) - t;
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    const double c = std::cos(0.5 * std::numbers::pi * x);
    return c * c;
  }
  double dk(double s) const {
    const double x = std::abs(s) - t;
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double sign = s < 0.0 ? -1.0 : 1.0;
    return -sign * 0.5 * std::numbers::pi * std::sin(std::numbers::pi * x);
  }
};

double rayleigh_quotient(const DerivedConstants& c, double d, int t) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  const Cutoff cut{static_cast<double>(t)};
  const double h = 0.5 * (d - 2.0);
  auto grad2 = [&](double r) {
    const double s = std::log(r);
    const double dphi = std::pow(r, -h - 1.0) * (cut.dk(s) - h * cut.k(s));
    return dphi * dphi * std::pow(r, d - 1.0);
  };
  auto mass = [&](double r) {
    const double phi = std::pow(r, -h) * cut.k(std::log(r));
    return phi * phi * std::pow(r, d - 3.0);
  };
  // Subintervals of one eighth in ln r keep each piece well resolved. Each
  // is mapped to [0, 1] so the adaptive error test sees a unit width.
  constexpr int kPerUnit = 8;
  const int pieces = 2 * (t + 1) * kPerUnit;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = std::exp(-(t + 1.0) + static_cast<double>(i) / kPerUnit);
    const double hi = std::exp(-(t + 1.0) + static_cast<double>(i + 1) / kPerUnit);
    const double w = hi - lo;
    num += w * Rule::integrate([&](double x) { return grad2(lo + w * x); }, 0.0, 1.0, 10, 1e-14);
    den += w * Rule::integrate([&](double x) { return mass(lo + w * x); }, 0.0, 1.0, 10, 1e-14);
  }
  return (num - 0.25 * c.gamma * c.gamma * den) / den;
}

void require_singular(const DerivedConstants& c) {
  if (!(c.lambda > 0.0) || !(c.mu > 0.0)) {
    throw Error(ErrorCode::UndefinedSingular, "singular pair needs lambda > 0 and mu > 0");
  }
}

}  // namespace

std::vector<double> rayleigh_quotients(const SystemParams& params, int n_cutoffs) {
  if (n_cutoffs < 1) throw Error(ErrorCode::InvalidInput, "need at least one cutoff");
  const auto c = derive_constants(params);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_cutoffs));
  for (int t = 1; t <= n_cutoffs; ++t) out.push_back(rayleigh_quotient(c, params.d(), t));
  return out;
}

VerificationReport rayleigh_stability_margin(const SystemParams& params, int n_cutoffs) {
  const auto c = derive_constants(params);
  require_singular(c);
  const auto Q = rayleigh_quotients(params, n_cutoffs);
  const double inf_q = *std::min_element(Q.begin(), Q.end());
  const double weight = std::sqrt(params.p() * params.q() * c.lambda * c.mu);
  const double margin = inf_q - weight;
  const double jl = jl_margin(params);
  const bool agree = (margin >= 0.0) == (jl >= 0.0);
  const double gap = std::abs(inf_q - c.H) / std::max(std::abs(c.H), 1e-300);
  const double residual = agree ? gap : std::numeric_limits<double>::infinity();

  std::ostringstream details;
  details << "inf Q=" << format_number(inf_q) << " H=" << format_number(c.H) << " margin=" << format_number(margin)
          << " jl_margin=" << format_number(jl) << (agree ? " signs agree" : " signs disagree");
  return make_report("rayleigh", params, inf_q, weight, residual, 0.02, details.str());
}

std::vector<double> spherical_margins(const SystemParams& params, int l_max) {
  if (l_max < 0) throw Error(ErrorCode::InvalidInput, "l_max must be non-negative");
  const auto c = derive_constants(params);
  require_singular(c);
  const auto amp = singular_amplitudes(params);
  const double p = params.p(), q = params.q(), d = params.d();
  const double weight = std::sqrt(p * q) * std::pow(amp.a, 0.5 * (q - 1.0)) * std::pow(amp.b, 0.5 * (p - 1.0));
  std::vector<double> m;
  m.reserve(static_cast<std::size_t>(l_max) + 1);
  for (int l = 0; l <= l_max; ++l) m.push_back(l * (l + d - 2.0) + c.H - weight);
  return m;
}

VerificationReport spherical_mode_margins(const SystemParams& params, int l_max) {
  const auto m = spherical_margins(params, l_max);
  const auto it = std::min_element(m.begin(), m.end());
  const auto c = derive_constants(params);
  const double closed = c.H - std::sqrt(params.p() * params.q() * c.lambda * c.mu);
  const double residual = std::abs(*it - closed) / std::max(1.0, std::abs(closed));
  std::ostringstream details;
  details << "minimum at l=" << (it - m.begin()) << " over l=0.." << l_max;
  return make_report("spherical", params, *it, closed, residual, 1e-12, details.str());
}

}  // namespace lelab
