#include "lelab/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lelab/error.hpp"

namespace lelab {

std::string_view to_string(TerminationKind k) noexcept {
  switch (k) {
    case TerminationKind::Completed: return "COMPLETED";
    case TerminationKind::UHitZero: return "U_HIT_ZERO";
    case TerminationKind::VHitZero: return "V_HIT_ZERO";
    case TerminationKind::Blowup: return "BLOWUP";
    case TerminationKind::StepUnderflow: return "STEP_UNDERFLOW";
  }
  return "UNKNOWN";
}

namespace {

// Sign-preserving power |x|^e sgn(x).
double spow(double x, double e) { return std::copysign(std::pow(std::abs(x), e), x); }

}  // namespace

namespace detail {

Curvature curvature(const SystemParams& params, const RadialState& s) {
  const double p = params.p();
  const double q = params.q();
  const double k = params.d() - 1.0;
  Curvature c{};
  c.d2u = -k * s.du / s.r - spow(s.v, p);
  c.d2v = -k * s.dv / s.r - spow(s.u, q);
  c.d3u = -k * (c.d2u / s.r - s.du / (s.r * s.r)) - p * std::pow(std::abs(s.v), p - 1.0) * s.dv;
  c.d3v = -k * (c.d2v / s.r - s.dv / (s.r * s.r)) - q * std::pow(std::abs(s.u), q - 1.0) * s.du;
  return c;
}

RadialState hermite(const SystemParams& params, const RadialState& a, const RadialState& b, double r) {
  const double h = b.r - a.r;
  const double t = (r - a.r) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  const double t5 = t4 * t;
  const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
  const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
  const double h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
  const double h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
  const double h5 = 0.5 * (t3 - 2.0 * t4 + t5);
  const auto ca = curvature(params, a);
  const auto cb = curvature(params, b);
  auto blend = [&](double f0, double df0, double ddf0, double f1, double df1, double ddf1) {
    return h0 * f0 + h * h1 * df0 + h * h * h2 * ddf0 + h3 * f1 + h * h4 * df1 + h * h * h5 * ddf1;
  };
  return {r,
          blend(a.u, a.du, ca.d2u, b.u, b.du, cb.d2u),
          blend(a.v, a.dv, ca.d2v, b.v, b.dv, cb.d2v),
          blend(a.du, ca.d2u, ca.d3u, b.du, cb.d2u, cb.d3u),
          blend(a.dv, ca.d2v, ca.d3v, b.dv, cb.d2v, cb.d3v)};
}

RadialState origin_series(const SystemParams& params, InitialData init, double r) {
  const double d = params.d();
  const double fu = spow(init.v0, params.p());
  const double fv = spow(init.u0, params.q());
  return {r, init.u0 - fu * r * r / (2.0 * d), init.v0 - fv * r * r / (2.0 * d), -fu * r / d, -fv * r / d};
}

}  // namespace detail

RadialSolution::RadialSolution(SystemParams params, std::optional<InitialData> origin,
                               std::vector<RadialState> samples, Termination status)
    : params_(params), origin_(origin), samples_(std::move(samples)), status_(status), has_derivatives_(true) {
  if (samples_.empty()) throw Error(ErrorCode::InvalidInput, "radial solution needs at least one sample");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!(s.r > 0.0) || (i > 0 && !(s.r > samples_[i - 1].r))) {
      throw Error(ErrorCode::InvalidInput, "radial grid must be positive and strictly increasing");
    }
    if (!std::isfinite(s.du) || !std::isfinite(s.dv)) has_derivatives_ = false;
  }
}

bool RadialSolution::covers(double r_lo, double r_hi) const noexcept {
  return r_lo >= r_first() && r_hi <= r_last() && r_lo <= r_hi;
}

bool RadialSolution::positive() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](const RadialState& s) { return s.u > 0.0 && s.v > 0.0; });
}

RadialState RadialSolution::at(double r) const {
  if (!has_derivatives_) throw Error(ErrorCode::DerivativesMissing, "dense evaluation needs du and dv samples");
  if (r < r_first() && origin_ && r >= 0.0) return detail::origin_series(params_, *origin_, r);
  if (!(r >= r_first() && r <= r_last())) {
    std::ostringstream why;
    why << "r=" << r << " outside sampled range [" << r_first() << ", " << r_last() << "]";
    throw Error(ErrorCode::WindowNotCovered, why.str());
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), r,
                             [](double x, const RadialState& s) { return x < s.r; });
  if (it == samples_.end()) return samples_.back();
  if (it == samples_.begin()) return samples_.front();
  const auto& b = *it;
  const auto& a = *(it - 1);
  if (r == a.r) return a;
  return detail::hermite(params_, a, b, r);
}

double RadialSolution::integrate(const std::function<double(const RadialState&)>& f, double R) const {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  if (!has_derivatives_) throw Error(ErrorCode::DerivativesMissing, "quadrature needs du and dv samples");
  if (R > r_last()) {
    std::ostringstream why;
    why << "integration radius " << R << " beyond sampled range (r_last=" << r_last() << ")";
    throw Error(ErrorCode::WindowNotCovered, why.str());
  }
  // Boost compares an unscaled error against a scaled estimate, so narrow
  // pieces never look converged. Each piece is mapped onto [0, 1] first.
  constexpr unsigned kDepth = 8;
  constexpr double kTol = 1e-13;
  double total = 0.0;
  if (origin_ && R > 0.0) {
    const double top = std::min(R, r_first());
    total += top * Rule::integrate([&](double t) { return f(detail::origin_series(params_, *origin_, top * t)); }, 0.0,
                                   1.0, kDepth, kTol);
  }
  for (std::size_t i = 0; i + 1 < samples_.size() && samples_[i].r < R; ++i) {
    const auto& a = samples_[i];
    const auto& b = samples_[i + 1];
    const double top = std::min(R, b.r);
    const double h = top - a.r;
    total += h * Rule::integrate([&](double t) { return f(detail::hermite(params_, a, b, a.r + h * t)); }, 0.0, 1.0,
                                 kDepth, kTol);
  }
  return total;
}

namespace {

using State = std::array<double, 4>;  // u, v, u', v'

State rhs(const SystemParams& params, double r, const State& y) {
  const double k = (params.d() - 1.0) / r;
  return {y[2], y[3], -k * y[2] - spow(y[1], params.p()), -k * y[3] - spow(y[0], params.q())};
}

RadialState to_radial(double r, const State& y) { return {r, y[0], y[1], y[2], y[3]}; }

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kAbsFloor = 1e-300;
constexpr double kMinStepRatio = 1e-14;
constexpr long kMaxSteps = 20'000'000;

// First zero of component `which` (0 = u, 1 = v) of the Hermite interpolant on
// [a, b], or nullopt. Sign changes are probed at a few interior points.
std::optional<double> locate_zero(const SystemParams& params, const RadialState& a, const RadialState& b,
                                  int which) {
  auto comp = [&](double r) {
    const auto s = detail::hermite(params, a, b, r);
    return which == 0 ? s.u : s.v;
  };
  constexpr int kProbes = 4;
  double lo = a.r;
  for (int k = 1; k <= kProbes; ++k) {
    const double hi = k == kProbes ? b.r : a.r + (b.r - a.r) * k / kProbes;
    const double f_hi = k == kProbes ? (which == 0 ? b.u : b.v) : comp(hi);
    if (f_hi <= 0.0) {
      // bisect to 1e-12 relative in r
      return bisect_root([&](double r) { return comp(r) > 0.0 ? 1.0 : -1.0; }, lo, hi, 1e-12);
    }
    lo = hi;
  }
  return std::nullopt;
}

}  // namespace

RadialSolution integrate(const SystemParams& params, InitialData init, double r_max, double rel_tol) {
  if (!(init.u0 > 0.0) || !(init.v0 > 0.0) || !std::isfinite(init.u0) || !std::isfinite(init.v0)) {
    throw Error(ErrorCode::InvalidInput, "initial values must be positive");
  }
  if (!(r_max > kRadialStart) || !std::isfinite(r_max)) {
    throw Error(ErrorCode::InvalidInput, "r_max must exceed the start radius");
  }
  if (!(rel_tol >= 1e-13 && rel_tol <= 1e-6)) {
    throw Error(ErrorCode::InvalidInput, "rel_tol must lie in [1e-13, 1e-6]");
  }

  const auto s0 = detail::origin_series(params, init, kRadialStart);
  std::vector<RadialState> samples{s0};
  double r = kRadialStart;
  State y{s0.u, s0.v, s0.du, s0.dv};
  State k1 = rhs(params, r, y);
  double h = 0.1 * kRadialStart;
  double err_prev = 1.0;

  auto scale = [&](const State& y0, const State& y1, double r1, int i) {
    double m = std::max(std::abs(y0[i]), std::abs(y1[i]));
    // u and v may pass through zero at an event; their natural size there is r |u'|.
    if (i < 2) m = std::max(m, r1 * std::abs(y1[i + 2]));
    return kAbsFloor + rel_tol * m;
  };

  for (long step = 0; step < kMaxSteps; ++step) {
    if (r >= r_max) return RadialSolution(params, init, std::move(samples), {TerminationKind::Completed, r});
    if (h < kMinStepRatio * r) {
      return RadialSolution(params, init, std::move(samples), {TerminationKind::StepUnderflow, r});
    }
    bool last = false;
    if (r + h >= r_max) {
      h = r_max - r;
      last = true;
    }

    State tmp{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, y1{};
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    k2 = rhs(params, r + c2 * h, tmp);
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(params, r + c3 * h, tmp);
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(params, r + c4 * h, tmp);
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(params, r + c5 * h, tmp);
    for (int i = 0; i < 4; ++i) {
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    k6 = rhs(params, r + h, tmp);
    for (int i = 0; i < 4; ++i) y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const double r1 = last ? r_max : r + h;
    k7 = rhs(params, r1, y1);

    double err = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, std::abs(e) / scale(y, y1, r1, i));
    }
    if (!std::isfinite(err)) {
      h *= 0.2;
      continue;
    }

    if (err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    // Accepted: check for events on [r, r1] before committing the sample.
    // While both components are positive, u and v are strictly decreasing,
    // so a zero inside the step shows up as a sign change at its end.
    const RadialState a = to_radial(r, y);
    const RadialState b = to_radial(r1, y1);
    if (b.u <= 0.0 || b.v <= 0.0) {
      const auto zu = locate_zero(params, a, b, 0);
      const auto zv = locate_zero(params, a, b, 1);
      if (zu || zv) {
        const bool u_first = zu && (!zv || *zu <= *zv);
        return RadialSolution(params, init, std::move(samples),
                              {u_first ? TerminationKind::UHitZero : TerminationKind::VHitZero, u_first ? *zu : *zv});
      }
    }
    if (std::abs(b.u) > kBlowupThreshold || std::abs(b.v) > kBlowupThreshold) {
      return RadialSolution(params, init, std::move(samples), {TerminationKind::Blowup, r1});
    }

    samples.push_back(b);
    r = r1;
    y = y1;
    k1 = k7;

    // PI step-size controller.
    const double e = std::max(err, 1e-10);
    double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
    fac = std::clamp(fac, 0.2, 5.0);
    err_prev = e;
    h *= fac;
  }
  return RadialSolution(params, init, std::move(samples), {TerminationKind::StepUnderflow, r});
}

RadialSolution integrate(const SystemParams& params, double v0, double r_max, double rel_tol) {
  return integrate(params, InitialData{1.0, v0}, r_max, rel_tol);
}

RadialSolution sample_singular(const SystemParams& params, double r_lo, double r_hi, int n) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo) || n < 2) throw Error(ErrorCode::InvalidInput, "bad singular sampling grid");
  const auto c = derive_constants(params);
  const auto amp = singular_amplitudes(params);
  std::vector<RadialState> samples;
  samples.reserve(static_cast<std::size_t>(n));
  const double step = std::log(r_hi / r_lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double r = i == n - 1 ? r_hi : r_lo * std::exp(step * i);
    const double u = amp.a * std::pow(r, -c.alpha);
    const double v = amp.b * std::pow(r, -c.beta);
    samples.push_back({r, u, v, -c.alpha * u / r, -c.beta * v / r});
  }
  return RadialSolution(params, std::nullopt, std::move(samples), {TerminationKind::Completed, r_hi});
}

}  // namespace lelab
