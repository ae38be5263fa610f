#include <doctest.h>

#include <cmath>
#include <thread>

#include "lelab/classifier.hpp"
#include "lelab/radial.hpp"
#include "support.hpp"

using namespace lelab;
using lelab::test::code_of;
using lelab::test::rel_err;

namespace {

double ground_state_553(double r) { return 1.0 / std::sqrt(1.0 + r * r / 3.0); }

// Positive trajectory of a supercritical p > q system found by separatrix shooting.
const ShootResult& positive_3_2_13() {
  static const ShootResult res = shoot_separatrix(SystemParams(3, 2, 13), {0.3, 3.0});
  return res;
}

}  // namespace

TEST_CASE("closed-form ground state solves the ODE") {
  // Substitution oracle: u = (1 + r^2/3)^(-1/2) in u'' + 2u'/r + u^5 = 0.
  for (double r : {0.1, 1.0, 3.0, 10.0}) {
    const double u = ground_state_553(r);
    const double du = -r / 3.0 * std::pow(u, 3);
    const double d2u = -std::pow(u, 3) / 3.0 + r * r / 3.0 * std::pow(u, 5);
    CHECK(std::abs(d2u + 2.0 * du / r + std::pow(u, 5)) < 1e-14);
  }
}

TEST_CASE("integration reproduces the (5,5,3) ground state") {
  const auto sol = integrate(SystemParams(5, 5, 3), 1.0, 10.0, 1e-12);
  CHECK(sol.status().kind == TerminationKind::Completed);
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double r = 0.01 * i;
    worst = std::max(worst, rel_err(sol.at(r).u, ground_state_553(r)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("symmetric data keeps u and v equal") {
  const auto sol = integrate(SystemParams(3, 3, 13), 1.0, 100.0, 1e-10);
  for (const auto& s : sol.samples()) {
    CHECK(s.u == s.v);
    CHECK(s.du == s.dv);
  }
}

TEST_CASE("subcritical shot reaches zero") {
  const auto sol = integrate(SystemParams(3, 3, 3), 1.0, 1e3, 1e-6);
  const auto k = sol.status().kind;
  CHECK((k == TerminationKind::UHitZero || k == TerminationKind::VHitZero));
  CHECK(sol.status().r < 1e3);
  CHECK(sol.positive());
}

TEST_CASE("(3,3,5) is supercritical, so the symmetric shot stays positive") {
  CHECK(criticality(SystemParams(3, 3, 5)) == Criticality::Supercritical);
  const auto sol = integrate(SystemParams(3, 3, 5), 1.0, 1e3, 1e-8);
  CHECK(sol.status().kind == TerminationKind::Completed);
}

TEST_CASE("integration preconditions") {
  const SystemParams s(3, 3, 13);
  CHECK(code_of([&] { integrate(s, 0.0, 10.0, 1e-10); }) == ErrorCode::InvalidInput);
  CHECK(code_of([&] { integrate(s, 1.0, 1e-7, 1e-10); }) == ErrorCode::InvalidInput);
  CHECK(code_of([&] { integrate(s, 1.0, 10.0, 1e-14); }) == ErrorCode::InvalidInput);
  CHECK(code_of([&] { integrate(s, 1.0, 10.0, 1e-5); }) == ErrorCode::InvalidInput);
}

TEST_CASE("termination sample and event radius") {
  const auto sol = integrate(SystemParams(5, 5, 3), 0.9, 100.0, 1e-12);
  REQUIRE(sol.status().kind == TerminationKind::VHitZero);
  const double rz = sol.status().r;
  CHECK(rz > sol.r_last());
  // Reintegrating just short of the event stays positive.
  const auto before = integrate(SystemParams(5, 5, 3), 0.9, rz * (1 - 1e-9), 1e-12);
  CHECK(before.status().kind == TerminationKind::Completed);
  CHECK(before.at(before.r_last()).v > 0.0);
}

TEST_CASE("ODE residual at dense checkpoints") {
  for (double tol : {1e-8, 1e-10}) {
    const SystemParams s(3, 2, 13);
    const auto sol = integrate(s, 1.3, 50.0, tol);
    const double d = s.d();
    double worst = 0.0;
    const auto samples = sol.samples();
    for (std::size_t i = 1; i + 1 < samples.size(); i += 3) {
      const double r = 0.5 * (samples[i].r + samples[i + 1].r);
      const double h = 1e-4 * (samples[i + 1].r - samples[i].r);
      const auto a = sol.at(r - h), b = sol.at(r + h), m = sol.at(r);
      const double d2u = (b.du - a.du) / (2 * h), d2v = (b.dv - a.dv) / (2 * h);
      const double fu = std::pow(m.v, s.p()), fv = std::pow(m.u, s.q());
      const double su = std::abs(d2u) + std::abs((d - 1) / r * m.du) + fu;
      const double sv = std::abs(d2v) + std::abs((d - 1) / r * m.dv) + fv;
      worst = std::max({worst, std::abs(d2u + (d - 1) / r * m.du + fu) / su, std::abs(d2v + (d - 1) / r * m.dv + fv) / sv});
    }
    CHECK(worst <= 10 * tol);
  }
}

TEST_CASE("scaling covariance") {
  const SystemParams s(3, 2, 13);
  const auto c = derive_constants(s);
  const double tol = 1e-11, R = 2.0, v0 = 1.3;
  const auto base = integrate(s, v0, 20.0, tol);
  const auto scaled = blow_down(base, R);
  const auto direct = integrate(s, InitialData{std::pow(R, c.alpha), std::pow(R, c.beta) * v0}, 10.0, tol);
  const double r_end = std::min(scaled.r_last(), direct.r_last());
  REQUIRE(r_end > 1.0);
  CHECK(rel_err(scaled.status().r, direct.status().r) < 1e-8);
  double worst = 0.0;
  for (double r = 0.05; r <= r_end; r *= 1.2) {
    const auto x = scaled.at(r), y = direct.at(r);
    worst = std::max({worst, rel_err(x.u, y.u), rel_err(x.v, y.v)});
  }
  CHECK(worst <= 10 * tol);
}

TEST_CASE("positive trajectories satisfy the comparison inequality and decrease") {
  const auto& res = positive_3_2_13();
  const auto& sol = res.solution;
  REQUIRE(sol.status().kind == TerminationKind::Completed);
  const SystemParams& s = sol.params();
  for (const auto& st : sol.samples()) {
    CHECK(std::pow(st.v, s.p() + 1) / (s.p() + 1) <= std::pow(st.u, s.q() + 1) / (s.q() + 1) + 1e-12);
    CHECK(st.du < 0.0);
    CHECK(st.dv < 0.0);
  }
}

TEST_CASE("ground state shooting") {
  const auto res = shoot_ground_state(SystemParams(5, 5, 3), {0.5, 2.0});
  CHECK(std::abs(res.v0 - 1.0) < 1e-9);
  const auto& sol = res.solution;
  REQUIRE(sol.status().kind == TerminationKind::Completed);
  CHECK(sol.r_last() >= 1e3);
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) worst = std::max(worst, rel_err(sol.at(0.01 * i).u, ground_state_553(0.01 * i)));
  CHECK(worst < 1e-6);
  const auto [fu, fv] = fit_decay(sol, 10.0, 100.0);
  CHECK(fu.classification == DecayClass::Fast);
  CHECK(std::abs(fu.exponent - 1.0) < 0.05);
  CHECK(fv.classification == DecayClass::Fast);
}

TEST_CASE("ground state on the d = 4 hyperbola separates outcomes") {
  const SystemParams s(3, 3, 4);
  const auto res = shoot_ground_state(s, {0.5, 2.0});
  const auto lo = integrate(s, res.v0 * (1 - 1e-6), 1e14, 1e-12).status().kind;
  const auto hi = integrate(s, res.v0 * (1 + 1e-6), 1e14, 1e-12).status().kind;
  CHECK(lo != hi);
  CHECK(res.solution.status().kind == TerminationKind::Completed);
}

TEST_CASE("shooting errors") {
  const SystemParams s(5, 5, 3);
  CHECK(code_of([&] { shoot_ground_state(s, {1.5, 1.5}); }) == ErrorCode::BadBracket);
  CHECK(code_of([&] { shoot_ground_state(s, {0.1, 0.2}); }) == ErrorCode::BadBracket);
  CHECK(code_of([] { shoot_ground_state(SystemParams(3, 3, 13), {0.5, 2.0}); }) == ErrorCode::InvalidParams);
}

TEST_CASE("survey shows both outcomes on either side of the separatrix") {
  const auto survey = survey_shots(SystemParams(3, 2, 13), 0.01, 100.0, 9, 1e8, 1e-10);
  REQUIRE(survey.size() == 9);
  CHECK(survey.front().status.kind == TerminationKind::VHitZero);
  CHECK(survey.back().status.kind == TerminationKind::UHitZero);
  CHECK(survey.back().v0 == 100.0);
}

TEST_CASE("decay fits") {
  const SystemParams s(3, 3, 13);
  const auto sing = sample_singular(s, 1.0, 1e3, 400);
  const auto [fu, fv] = fit_decay(sing, 10.0, 100.0);
  CHECK(std::abs(fu.exponent - 1.0) < 1e-12);
  CHECK(fu.residual < 1e-12);
  CHECK(fu.classification == DecayClass::Slow);
  CHECK(rel_err(fu.amplitude, std::sqrt(10.0)) < 1e-12);

  const auto sol = integrate(s, 1.0, 1e3, 1e-12);
  const auto [gu, gv] = fit_decay(sol, 100.0, 1000.0);
  CHECK(std::abs(gu.exponent - 1.0) < 0.05);
  CHECK(gu.classification == DecayClass::Slow);

  const auto& pos = positive_3_2_13();
  const auto [hu, hv] = fit_decay(pos.solution, 100.0, 1000.0);
  const auto c = derive_constants(SystemParams(3, 2, 13));
  CHECK(std::abs(hu.exponent - c.alpha) < 0.05 * c.alpha);
  CHECK(std::abs(hv.exponent - c.beta) < 0.05 * c.beta);

  CHECK(code_of([&] { fit_decay(sol, 100.0, 300.0); }) == ErrorCode::InsufficientWindow);
  CHECK(code_of([&] { fit_decay(sol, 500.0, 4000.0); }) == ErrorCode::InsufficientWindow);
}

TEST_CASE("blow-down") {
  const SystemParams s(3, 3, 13);
  const auto sol = integrate(s, 1.0, 1e3, 1e-12);
  const auto same = blow_down(sol, 1.0);
  REQUIRE(same.samples().size() == sol.samples().size());
  for (std::size_t i = 0; i < sol.samples().size(); ++i) {
    CHECK(same.samples()[i].u == sol.samples()[i].u);
    CHECK(same.samples()[i].r == sol.samples()[i].r);
  }

  const auto sing = sample_singular(s, 1e-2, 1e4, 3000);
  for (double R : {0.5, 3.0, 100.0}) {
    const auto bd = blow_down(sing, R, 0.5, 2.0);
    for (const auto& st : bd.samples()) {
      CHECK(rel_err(st.u, std::sqrt(10.0) / st.r) < 1e-12);
      CHECK(rel_err(st.du, -std::sqrt(10.0) / (st.r * st.r)) < 1e-10);
    }
  }

  const auto bd = blow_down(sol, 100.0, 0.5, 2.0);
  CHECK(bd.r_first() == doctest::Approx(0.5));
  CHECK(bd.r_last() == doctest::Approx(2.0));
  for (const auto& st : bd.samples()) {
    CHECK(rel_err(st.u, std::sqrt(10.0) / st.r) < 0.1);
    CHECK(rel_err(st.v, std::sqrt(10.0) / st.r) < 0.1);
  }
  CHECK(code_of([&] { blow_down(sol, 1e3, 0.5, 2.0); }) == ErrorCode::WindowNotCovered);
}

TEST_CASE("concurrent integrations agree bitwise") {
  const SystemParams s(4, 2, 15);
  const auto ref = integrate(s, 0.8, 100.0, 1e-11);
  std::vector<double> last(4);
  {
    std::vector<std::jthread> pool;
    for (int i = 0; i < 4; ++i) {
      pool.emplace_back([&, i] { last[i] = integrate(s, 0.8, 100.0, 1e-11).samples().back().u; });
    }
  }
  for (double x : last) CHECK(x == ref.samples().back().u);
}
