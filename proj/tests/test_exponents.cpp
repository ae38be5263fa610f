#include <doctest.h>

#include <cmath>

#include "lelab/exponents.hpp"
#include "support.hpp"

using namespace lelab;
using lelab::test::code_of;
using lelab::test::rel_err;

TEST_CASE("parameter normalization") {
  CHECK_NOTHROW(SystemParams(3, 3, 13));
  CHECK(code_of([] { SystemParams(1, 3, 13); }) == ErrorCode::InvalidParams);   // p < q
  CHECK(code_of([] { SystemParams(1, 1, 13); }) == ErrorCode::InvalidParams);   // pq = 1
  CHECK(code_of([] { SystemParams(3, 0.5, 13); }) == ErrorCode::InvalidParams); // q < 1
  CHECK(code_of([] { SystemParams(3, 3, 2.5); }) == ErrorCode::InvalidParams);  // d < 3
  CHECK(code_of([] { SystemParams(NAN, 3, 13); }) == ErrorCode::InvalidParams);
  CHECK(SystemParams(3, 3, 13).integer_dimension());
  CHECK_FALSE(SystemParams(3, 3, 12.5).integer_dimension());
}

TEST_CASE("derived constants, symmetric example") {
  const auto c = derive_constants(SystemParams(3, 3, 13));
  CHECK(c.alpha == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.beta == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.gamma == 0.0);
  CHECK(c.H == doctest::Approx(121.0 / 4).epsilon(1e-15));
  CHECK(c.lambda == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(c.mu == doctest::Approx(10.0).epsilon(1e-15));
  REQUIRE(c.a_coef);
  REQUIRE(c.b_coef);
  CHECK(rel_err(*c.a_coef, std::sqrt(10.0)) < 1e-14);
  CHECK(rel_err(*c.b_coef, std::sqrt(10.0)) < 1e-14);
}

TEST_CASE("derived constants, asymmetric example") {
  const auto c = derive_constants(SystemParams(5, 1, 12));
  CHECK(c.alpha == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(c.beta == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.gamma == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c.H == doctest::Approx(24.0).epsilon(1e-15));
  CHECK(c.lambda == doctest::Approx(21.0).epsilon(1e-15));
  CHECK(c.mu == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("amplitudes are undefined when lambda or mu vanishes") {
  // (3,3,3): alpha = 1 = d - 2, so lambda = 0.
  const SystemParams s(3, 3, 3);
  const auto c = derive_constants(s);
  CHECK_FALSE(c.a_coef.has_value());
  CHECK_FALSE(c.b_coef.has_value());
  CHECK(code_of([&] { singular_amplitudes(s); }) == ErrorCode::UndefinedSingular);
}

TEST_CASE("algebraic identities on random triples") {
  lelab::test::TripleSource src(11);
  for (int i = 0; i < 2000; ++i) {
    const auto s = src.any();
    const auto c = derive_constants(s);
    CHECK(std::abs(c.alpha * s.q() - c.beta - 2.0) < 1e-12 * std::max(1.0, c.alpha * s.q()));
    CHECK(std::abs(c.beta * s.p() - c.alpha - 2.0) < 1e-12 * std::max(1.0, c.beta * s.p()));
    CHECK(c.gamma >= 0.0);
    CHECK(c.gamma <= 2.0 + 1e-12);
    if (c.a_coef) {
      const double a = *c.a_coef, b = *c.b_coef;
      CHECK(rel_err(a * c.lambda, std::pow(b, s.p())) < 1e-12);
      CHECK(rel_err(b * c.mu, std::pow(a, s.q())) < 1e-12);
      CHECK(rel_err(std::pow(a, s.q() - 1.0) * std::pow(b, s.p() - 1.0), c.lambda * c.mu) < 1e-12);
    }
  }
}

TEST_CASE("supercritical range has positive lambda and mu") {
  lelab::test::TripleSource src(12);
  for (int i = 0; i < 2000; ++i) {
    const auto s = src.supercritical();
    const auto c = derive_constants(s);
    CHECK(c.lambda > 0.0);
    CHECK(c.mu > 0.0);
  }
}

TEST_CASE("supercriticality and alpha + beta <= d - 2 agree") {
  lelab::test::TripleSource src(13);
  int compared = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto s = src.any();
    const double lhs = 1.0 / (s.p() + 1.0) + 1.0 / (s.q() + 1.0) - (1.0 - 2.0 / s.d());
    const double alpha = 2.0 * (s.p() + 1.0) / (s.p() * s.q() - 1.0);
    const double beta = 2.0 * (s.q() + 1.0) / (s.p() * s.q() - 1.0);
    const double rhs = alpha + beta - (s.d() - 2.0);
    if (std::abs(lhs) <= 1e-12 || std::abs(rhs) <= 1e-12) continue;
    ++compared;
    CHECK((lhs <= 0.0) == (rhs <= 0.0));
  }
  CHECK(compared > 9900);
}

TEST_CASE("quartic values") {
  const SystemParams s(3, 3, 13);
  const auto c = derive_constants(s);
  const double pq = s.p() * s.q();
  CHECK(quartic_eval(s, QuarticKind::PlainH, 0.0) == doctest::Approx(-pq * c.alpha * c.alpha * c.beta * c.beta));
  for (double x : {0.5, 1.0, 2.0, 7.5}) {
    const double ref = std::pow(x, 4) - s.p() * s.p() * c.alpha * c.alpha * std::pow(2 * x - c.alpha, 2);
    CHECK(quartic_eval(s, QuarticKind::PlainH, x) == doctest::Approx(ref).epsilon(1e-13));
  }
  const double x0 = 3.0 + std::sqrt(6.0);
  CHECK(std::abs(quartic_eval(s, QuarticKind::PlainH, x0)) < 1e-10);
  // Polynomial object agrees with direct evaluation.
  const SystemParams t(5, 2, 9);
  for (auto k : {QuarticKind::PlainH, QuarticKind::JosephLundgren}) {
    const auto poly = quartic(t, k);
    CHECK(poly.degree() == 4);
    for (double x : {-1.0, 0.3, 4.0}) CHECK(poly(x) == doctest::Approx(quartic_eval(t, k, x)).epsilon(1e-13));
  }
}

TEST_CASE("largest roots") {
  const SystemParams s(3, 3, 13);
  const double x0 = largest_root(s, QuarticKind::PlainH);
  CHECK(rel_err(x0, 3.0 + std::sqrt(6.0)) < 1e-12);
  CHECK(rel_err(largest_root(s, QuarticKind::JosephLundgren), x0) < 1e-12);
}

TEST_CASE("plain quartic dominates and its root sits past (q+1) alpha / 2") {
  lelab::test::TripleSource src(14);
  for (int i = 0; i < 500; ++i) {
    const auto s = src.any();
    const auto c = derive_constants(s);
    const double x_plain = largest_root(s, QuarticKind::PlainH);
    const double x_jl = largest_root(s, QuarticKind::JosephLundgren);
    CHECK(x_plain > 4.0);
    CHECK(x_plain > 0.5 * (s.q() + 1.0) * c.alpha);
    CHECK(x_jl >= x_plain * (1.0 - 1e-12));
    for (double x : {x_plain, x_jl, 0.5 * (x_plain + 10.0), 20.0}) {
      if (x * x >= c.gamma * c.gamma / 8.0) {
        CHECK(quartic_eval(s, QuarticKind::PlainH, x) >= quartic_eval(s, QuarticKind::JosephLundgren, x) - 1e-9 * x * x * x * x);
      }
    }
  }
}

TEST_CASE("symmetric threshold: 2 + 2 x0 is the root in d of jl_margin") {
  const double d_star = 2.0 + 2.0 * largest_root(SystemParams(3, 3, 13), QuarticKind::PlainH);
  CHECK(std::abs(d_star - (8.0 + 2.0 * std::sqrt(6.0))) < 1e-12);
  CHECK(std::abs(jl_margin(SystemParams(3, 3, d_star))) < 1e-9);
}

TEST_CASE("jl_margin examples") {
  CHECK(jl_margin(SystemParams(3, 3, 13)) == doctest::Approx(15.0625).epsilon(1e-13));
  CHECK(jl_margin(SystemParams(3, 3, 11)) == doctest::Approx(410.0625 - 576.0).epsilon(1e-13));
}

TEST_CASE("margin sign matches the Joseph-Lundgren quartic threshold") {
  lelab::test::TripleSource src(15);
  int compared = 0;
  while (compared < 1000) {
    const auto s = src.supercritical();
    const double m = jl_margin(s);
    if (std::abs(m) < 1e-8) continue;
    ++compared;
    const double d_star = 2.0 + 2.0 * largest_root(s, QuarticKind::JosephLundgren);
    CHECK((m < 0.0) == (s.d() < d_star));
  }
}

TEST_CASE("Moser constants") {
  const auto m = moser_constants(SystemParams(3, 3, 13), 2.0);
  CHECK(m.b == doctest::Approx(2.0));
  CHECK(m.A == doctest::Approx(2.25));
  CHECK(m.B == doctest::Approx(2.25));
  CHECK(m.product_exceeds_one());
  CHECK(m.A * m.B == doctest::Approx(5.0625));

  const auto n = moser_constants(SystemParams(2, 2, 5), 1.5);
  CHECK(n.A == doctest::Approx(2.0 * 2.0 / 2.25));
  CHECK(n.A * n.B == doctest::Approx(std::pow(2.0 * 2.0 / 2.25, 2)));

  CHECK(code_of([] { moser_constants(SystemParams(3, 3, 13), 1.9); }) == ErrorCode::InvalidMoserExponent);
}

TEST_CASE("Moser product at the smallest exponent") {
  lelab::test::TripleSource src(16);
  for (int i = 0; i < 500; ++i) {
    const auto s = src.any();
    if (!(s.q() > 1.0)) continue;
    const double p = s.p(), q = s.q();
    const auto m = moser_constants(s, 0.5 * (q + 1.0));
    CHECK(m.b == doctest::Approx(0.5 * (p + 1.0)));
    const double closed = (16 * p * p * q * q - std::pow((p + 1) * (q + 1), 2)) / std::pow((p + 1) * (q + 1), 2);
    CHECK(m.A * m.B - 1.0 == doctest::Approx(closed).epsilon(1e-10));
    CHECK(m.product_exceeds_one());
  }
}

TEST_CASE("AB > 1 exactly when the plain quartic is negative at a alpha") {
  lelab::test::TripleSource src(17);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto s = src.any();
    const auto c = derive_constants(s);
    const double a = 0.5 * (s.q() + 1.0) * (1.0 + 3.0 * std::uniform_real_distribution<double>(0, 1)(src.engine()));
    const double h = quartic_eval(s, QuarticKind::PlainH, a * c.alpha);
    const auto m = moser_constants(s, a);
    if (std::abs(m.A * m.B - 1.0) < 1e-9) continue;
    ++checked;
    CHECK(m.product_exceeds_one() == (h < 0.0));
  }
  CHECK(checked > 1900);
}
