#include "smoothsafe/errors.hpp"
#include "smoothsafe/scalar_funcs.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace smoothsafe;

TEST_CASE("gate is one inside the inner band and zero beyond sensing range") {
  const GateParams p{0.5, 2.0};
  CHECK(gate_eval(0.25, p) == 1.0);
  CHECK(gate_eval(3.0, p) == 0.0);
  CHECK(gate_eval(1.25, p) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gate_eval(-10.0, p) == 1.0);
  CHECK(gate_eval(0.5, p) == 1.0);
  CHECK(gate_eval(2.0, p) == 0.0);
}

TEST_CASE("transition saturates and hits the cubic midpoint") {
  CHECK(transition_eval(-1.0, {1.0}) == 1.0);
  CHECK(transition_eval(0.3, {0.3}) == 0.0);
  CHECK(transition_eval(1.0, {2.0}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("transition derivative matches closed form and finite differences") {
  CHECK(transition_deriv(-5.0, {1.0}) == 0.0);
  CHECK(transition_deriv(0.5, {1.0}) == doctest::Approx(-1.5).epsilon(1e-15));
  CHECK(transition_deriv(3.0, {1.0}) == 0.0);

  testsupport::Rng rng(11);
  for (TransitionShape shape : {TransitionShape::Cubic, TransitionShape::Quintic}) {
    for (int i = 0; i < 1000; ++i) {
      const TransitionParams p{rng.uniform(0.1, 3.0), shape};
      const double z = rng.uniform(-0.5 * p.tau, 1.5 * p.tau);
      const double h = 1e-5;
      const double fd = (transition_eval(z + h, p) - transition_eval(z - h, p)) / (2 * h);
      const double an = transition_deriv(z, p);
      CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
    }
  }
}

TEST_CASE("gate and transition are non-increasing and stay in [0, 1]") {
  const GateParams g{0.2, 1.0};
  const TransitionParams t{0.7};
  double prev_g = 2.0, prev_t = 2.0;
  for (int i = 0; i <= 10000; ++i) {
    const double z = -1.0 + 3.0 * i / 10000.0;
    const double gv = gate_eval(z, g);
    const double tv = transition_eval(z, t);
    CHECK(gv <= prev_g);
    CHECK(tv <= prev_t);
    CHECK(gv >= 0.0);
    CHECK(gv <= 1.0);
    CHECK(tv >= 0.0);
    CHECK(tv <= 1.0);
    prev_g = gv;
    prev_t = tv;
  }
}

TEST_CASE("one-sided difference quotients agree at the joins") {
  const double step = 1e-6;
  auto check_join = [&](auto f, double z) {
    const double left = (f(z) - f(z - step)) / step;
    const double right = (f(z + step) - f(z)) / step;
    CHECK(std::abs(left - right) <= 1e-5);
  };
  const GateParams g{0.3, 1.4};
  const TransitionParams t{0.8};
  auto gf = [&](double z) { return gate_eval(z, g); };
  auto tf = [&](double z) { return transition_eval(z, t); };
  check_join(gf, g.epsilon);
  check_join(gf, g.delta);
  check_join(tf, 0.0);
  check_join(tf, t.tau);
}

TEST_CASE("quintic transition has continuous second derivative at the joins") {
  const TransitionParams t{1.0, TransitionShape::Quintic};
  const double step = 1e-4;
  for (double z : {0.0, 1.0}) {
    const double left = (transition_deriv(z, t) - transition_deriv(z - step, t)) / step;
    const double right = (transition_deriv(z + step, t) - transition_deriv(z, t)) / step;
    // Both one-sided quotients vanish like O(step); a jump would leave O(1).
    CHECK(std::abs(left - right) <= 40.0 * step);
  }
  // The cubic's second derivative jumps by 6 / tau^2 at the joins.
  const TransitionParams c{1.0};
  const double right = (transition_deriv(step, c) - transition_deriv(0.0, c)) / step;
  CHECK(std::abs(right + 6.0) < 1e-3);
}

TEST_CASE("linear class-K map") {
  CHECK(classk_eval(0.0, {}) == 0.0);
  CHECK(classk_eval(2.0, {1.5}) == 3.0);
  CHECK(classk_eval(-0.5, {2.0}) == -1.0);

  testsupport::Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const ClassK k{rng.uniform(0.1, 5.0)};
    const double a = rng.uniform(-5, 5), b = rng.uniform(-5, 5);
    if (a == b) continue;
    const double lo = std::min(a, b), hi = std::max(a, b);
    CHECK(classk_eval(lo, k) < classk_eval(hi, k));
    CHECK((classk_eval(a, k) > 0) == (a > 0));
  }
}

TEST_CASE("penalty weight vanishes outside the band and saturates in deep violation") {
  const PenaltyParams p{1.0, 1.0};
  CHECK(psi_eval(p.delta + 0.1, -3.0, 1.0, p) == 0.0);
  CHECK(psi_eval(-0.4, p.mu + 1.0, 1.0, p) == 0.0);
  CHECK(psi_eval(-0.1, -0.1, 1.0, p) == p.psi_max);
  CHECK(psi_eval(0.5, 0.5, 1.0, p) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  const PenaltyParams q{2.0, 0.4};
  CHECK(psi_eval(1.0, 0.2, 1.0, q, q.h_transition(), q.sigma_transition()) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // Halving the quadratic form doubles psi.
  CHECK(psi_eval(1.0, 0.2, 0.5, q) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("penalty weight is in range and grows along rays toward the origin") {
  const PenaltyParams p{1.0, 1.0};
  testsupport::Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double h = rng.uniform(-2, 3), s = rng.uniform(-2, 3), w = rng.uniform(0.1, 4);
    const double v = psi_eval(h, s, w, p);
    CHECK(v >= 0.0);
    CHECK(v <= p.psi_max);
    if (h >= p.delta || s >= p.mu) CHECK(v == 0.0);
  }
  for (int ray = 0; ray < 50; ++ray) {
    const double angle = rng.uniform(0.0, 0.5 * M_PI);
    const double dh = std::cos(angle), ds = std::sin(angle);
    double prev = -1.0;
    for (int i = 100; i >= 1; --i) {
      const double r = 1.5 * i / 100.0;
      const double v = psi_eval(r * dh, r * ds, 1.0, p);
      CHECK(v >= prev);
      prev = v;
    }
  }
  // Unbounded as h -> 0 with sigma <= 0, up to the ceiling.
  CHECK(psi_eval(1e-3, -0.5, 1.0, p) > 1e4);
  CHECK(psi_eval(0.0, -0.5, 1.0, p) == p.psi_max);
}

TEST_CASE("parameter validation names the key and the constraint") {
  try {
    GateParams{1.0, 0.5}.validate("filter.gate");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "filter.gate.delta");
    CHECK(std::string(e.what()).find("GateParams") != std::string::npos);
  }
  CHECK_THROWS_AS(GateParams({0.0, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(TransitionParams{0.0}.validate(), ConfigError);
  CHECK_THROWS_AS(ClassK{-1.0}.validate(), ConfigError);
  CHECK_THROWS_AS((PenaltyParams{1.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((PenaltyParams{1.0, 1.0, -1.0}.validate()), ConfigError);
  CHECK_NOTHROW(GateParams{}.validate());
  CHECK_NOTHROW(PenaltyParams{}.validate());
}

TEST_CASE("transition shape names round-trip") {
  for (TransitionShape s : {TransitionShape::Cubic, TransitionShape::Quintic})
    CHECK(parse_transition_shape(to_string(s)) == s);
  CHECK_THROWS_AS(parse_transition_shape("Septic"), ConfigError);
}
