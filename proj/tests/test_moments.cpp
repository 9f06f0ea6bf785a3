#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "momenttoc/control.hpp"
#include "momenttoc/hausdorff.hpp"
#include "momenttoc/moments.hpp"

using namespace mtoc;

TEST_CASE("direct substitution") {
  const InitialState s{{1.0, 0.0, 0.0, 0.0}};
  const MomentSequence c = assemble_moments(s, 0.0, 1.0, 1.0);
  CHECK(c.at1(1) == doctest::Approx(0.0));
  CHECK(c.at1(2) == doctest::Approx(-0.5));
  CHECK(c.at1(3) == doctest::Approx(-1.0 / 3));
  CHECK(c.at1(4) == doctest::Approx(-0.25));
}

TEST_CASE("worked example moments at the solved endpoint") {
  const InitialState s{{1.0, -2.0, -6.0, 2.0}};
  const MomentSequence c = assemble_moments(s, -1.66366, 1.0, 0.0);
  CHECK(c.at1(1) == doctest::Approx(-4.32731).epsilon(1e-4));  // theta - 4.32731 at theta = 0
  CHECK(c.at1(2) == doctest::Approx(4.26776).epsilon(1e-4));
  CHECK(c.at1(3) == doctest::Approx(2.59693).epsilon(1e-4));
}

TEST_CASE("preconditions") {
  const InitialState s{{1.0, 0.0, 0.0, 0.0}};
  CHECK_THROWS_AS(assemble_moments(s, 0.5, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(assemble_moments(s, 0.0, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(assemble_moments(s, 0.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("moments match the step measure of a matching profile") {
  // Build a stair-step control, derive the x0 it steers to the origin,
  // and compare assemble_moments against the step-function moments. This
  // is the integral definition made exact.
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> wdist(0.4, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    SynthesisSpec spec;
    spec.b = 1.8;
    spec.x1_0 = 0.9;
    spec.a = -1.3;
    spec.interior_nodes = {0.8, -0.6};
    spec.interior_weights = {wdist(rng), wdist(rng)};
    spec.weight_at_b = wdist(rng);
    spec.weight_at_a = wdist(rng);
    const StairStepControl u = synthesize_control(spec);
    const double theta = u.total_time();

    const int n = 6;
    std::vector<double> probe(n, 0.0);
    probe[0] = spec.x1_0;
    const std::vector<double> fin = simulate_exact(probe, u);
    std::vector<double> x0(n, 0.0);
    x0[0] = spec.x1_0;
    for (int j = 2; j <= n; ++j) x0[static_cast<size_t>(j - 1)] = -fin[static_cast<size_t>(j - 1)];

    const MomentSequence c = assemble_moments(InitialState{x0}, spec.a, spec.b, theta);
    StepFunction sf;
    sf.a = spec.a;
    sf.b = spec.b;
    sf.nodes = {spec.b, 0.8, -0.6, spec.a};
    sf.weights = {spec.weight_at_b, spec.interior_weights[0], spec.interior_weights[1],
                  spec.weight_at_a};
    const MomentSequence want = moments_of(sf, n);
    for (int j = 1; j <= n; ++j)
      CHECK(c.at1(j) == doctest::Approx(want.at1(j)).epsilon(1e-8));
  }
}

TEST_CASE("normalization identity, involution, and rejection") {
  const auto id = normalize_initial_state(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(!id.mirrored);
  CHECK(id.state.x0 == std::vector<double>{1.0, 2.0, 3.0, 4.0});

  const std::vector<double> x0{-1.0, 2.0, -6.0, -2.0};
  const auto m = normalize_initial_state(x0);
  CHECK(m.mirrored);
  CHECK(m.state.x1() > 0.0);
  CHECK(mirror_state(mirror_state(x0)) == x0);

  CHECK_THROWS_AS(normalize_initial_state(std::vector<double>{0.0, 1.0, 1.0, 1.0}),
                  NonGenericError);
  CHECK_THROWS_AS(normalize_initial_state(std::vector<double>{1.0, 1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("mirror map is validated by the simulator") {
  // If u steers x0 to the origin, -u steers the mirrored state there.
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> wdist(0.3, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    SynthesisSpec spec;
    spec.b = 1.5;
    spec.x1_0 = 1.0;
    spec.a = -0.8;
    spec.interior_nodes = {0.4};
    spec.interior_weights = {wdist(rng)};
    spec.weight_at_a = wdist(rng);
    const StairStepControl u = synthesize_control(spec);

    const int n = 5;
    std::vector<double> probe(n, 0.0);
    probe[0] = spec.x1_0;
    const std::vector<double> fin = simulate_exact(probe, u);
    std::vector<double> x0(n, 0.0);
    x0[0] = spec.x1_0;
    for (int j = 2; j <= n; ++j) x0[static_cast<size_t>(j - 1)] = -fin[static_cast<size_t>(j - 1)];

    const std::vector<double> mirrored = mirror_state(x0);
    const std::vector<double> back = simulate_exact(mirrored, negated(u));
    for (double v : back) CHECK(std::abs(v) <= 1e-10);
  }
}

TEST_CASE("c1 has unit slope in theta") {
  const InitialState s{{1.0, -2.0, -6.0, 2.0}};
  const double h = 1e-3;
  const MomentSequence lo = assemble_moments(s, -1.0, 2.0, 5.0 - h);
  const MomentSequence hi = assemble_moments(s, -1.0, 2.0, 5.0 + h);
  CHECK((hi.at1(1) - lo.at1(1)) / (2 * h) == doctest::Approx(1.0).epsilon(1e-12));
  for (int j = 2; j <= 4; ++j) CHECK(hi.at1(j) == lo.at1(j));
}

TEST_CASE("moving a away from zero adds 2a^j/j") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> av(-2.0, -0.1);
  for (int trial = 0; trial < 30; ++trial) {
    const InitialState s{{1.2, 0.4, -0.7, 2.2, -0.3}};
    const double a = av(rng);
    const MomentSequence with_a = assemble_moments(s, a, 2.0, 3.0);
    const MomentSequence at_zero = assemble_moments(s, 0.0, 2.0, 3.0);
    double ap = a;
    for (int j = 2; j <= 5; ++j) {
      ap *= a;
      CHECK(with_a.at1(j) - at_zero.at1(j) == doctest::Approx(2.0 * ap / j).epsilon(1e-12));
    }
  }
}

TEST_CASE("case polynomials reproduce the pinned-endpoint formulas") {
  const InitialState s{{1.0, -2.0, -6.0, 2.0}};
  const auto cases = enumerate_cases(4);

  // Case 4 pins b = x1: c2 = a^2 + 3/2, c3 = (2/3)a^3 + 17/3, c4 = a^4/2 - 9/4.
  const MomentPolynomials mp4 = case_polynomials(s, cases[1]);
  CHECK(mp4.c_of(2).eval(0.7, 0.0) == doctest::Approx(0.49 + 1.5).epsilon(1e-12));
  CHECK(mp4.c_of(3).eval(0.7, 0.0) ==
        doctest::Approx(2.0 / 3 * 0.343 + 17.0 / 3).epsilon(1e-12));
  CHECK(mp4.c_of(4).eval(0.7, 0.0) == doctest::Approx(0.5 * 0.2401 - 2.25).epsilon(1e-12));

  // Case 1 (odd n) pins both endpoints: c_j = -x_j - x1^j / j.
  const InitialState s5{{2.0, 1.0, -1.0, 0.5, 3.0}};
  const auto cases5 = enumerate_cases(5);
  const MomentPolynomials mp1 = case_polynomials(s5, cases5[0]);
  for (int j = 2; j <= 5; ++j) {
    double x1p = 1.0;
    for (int i = 0; i < j; ++i) x1p *= 2.0;
    const double want = -s5.x0[static_cast<size_t>(j - 1)] - x1p / j;
    CHECK(mp1.c_of(j).eval(0.0, 0.0) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("case polynomials agree with direct assembly") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> av(-2.0, -0.1), bext(0.1, 1.5), th(0.0, 6.0);
  for (int n : {4, 5, 6, 7}) {
    std::vector<double> x0(static_cast<size_t>(n));
    std::uniform_real_distribution<double> xv(-2.0, 2.0);
    for (double& v : x0) v = xv(rng);
    x0[0] = 1.0 + bext(rng);
    const InitialState s{x0};
    for (const CaseDescriptor& cse : enumerate_cases(n)) {
      const MomentPolynomials mp = case_polynomials(s, cse);
      const double a = cse.a_fixed ? 0.0 : av(rng);
      const double b = cse.b_fixed ? s.x1() : s.x1() + bext(rng);
      const double theta = th(rng);
      const MomentSequence c = assemble_moments(s, a, b, theta);
      CHECK(theta + mp.c1_offset.eval(a, b) == doctest::Approx(c.at1(1)).epsilon(1e-12));
      for (int j = 2; j <= n; ++j)
        CHECK(mp.c_of(j).eval(a, b) == doctest::Approx(c.at1(j)).epsilon(1e-12));
    }
  }
}
