#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "momenttoc/control.hpp"

using namespace mtoc;

namespace {

// Classical fixed-step RK4 for the chain, segment-aware so the control
// discontinuities never fall inside a step. Test-only reference.
std::vector<double> rk4_reference(std::span<const double> x0, const StairStepControl& u,
                                  double h) {
  std::vector<double> x(x0.begin(), x0.end());
  const int n = static_cast<int>(x.size());
  auto deriv = [&](const std::vector<double>& s, int level, std::vector<double>& d) {
    d[0] = level;
    double p = 1.0;
    for (int j = 2; j <= n; ++j) {
      p *= s[0];
      d[static_cast<size_t>(j - 1)] = p;
    }
  };
  std::vector<double> k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size()), tmp(x.size());
  for (const auto& seg : u.segments) {
    const int steps = std::max(1, static_cast<int>(std::ceil(seg.duration / h)));
    const double dt = seg.duration / steps;
    for (int s = 0; s < steps; ++s) {
      deriv(x, seg.level, k1);
      for (size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
      deriv(tmp, seg.level, k2);
      for (size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
      deriv(tmp, seg.level, k3);
      for (size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + dt * k3[i];
      deriv(tmp, seg.level, k4);
      for (size_t i = 0; i < x.size(); ++i)
        x[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
  }
  return x;
}

}  // namespace

TEST_CASE("synthesis reproduces the worked-example control") {
  SynthesisSpec spec;
  spec.x1_0 = 1.0;
  spec.a = -1.66366;
  spec.b = 1.0;
  spec.interior_nodes = {0.608501};
  spec.interior_weights = {7.01356};
  const StairStepControl u = synthesize_control(spec);

  REQUIRE(u.segments.size() == 4);
  CHECK(u.segments[0].level == -1);
  CHECK(u.segments[0].duration == doctest::Approx(0.391499).epsilon(1e-6));
  CHECK(u.segments[1].level == 0);
  CHECK(u.segments[1].duration == doctest::Approx(7.01356).epsilon(1e-6));
  CHECK(u.segments[2].level == -1);
  CHECK(u.segments[2].duration == doctest::Approx(2.272161).epsilon(1e-5));
  CHECK(u.segments[3].level == +1);
  CHECK(u.segments[3].duration == doctest::Approx(1.66366).epsilon(1e-6));
  CHECK(u.total_time() == doctest::Approx(11.34087).epsilon(1e-5));
}

TEST_CASE("pinned-endpoint shape has no rises") {
  SynthesisSpec spec;
  spec.x1_0 = 1.0;
  spec.a = 0.0;
  spec.b = 1.0;
  spec.interior_nodes = {0.5};
  spec.interior_weights = {2.0};
  const StairStepControl u = synthesize_control(spec);
  REQUIRE(u.segments.size() == 3);
  CHECK(u.segments.front().level == -1);
  CHECK(u.segments.back().level == -1);
  CHECK(u.segments[1].level == 0);
}

TEST_CASE("endpoint-mass shape with one sweep") {
  SynthesisSpec spec;
  spec.x1_0 = 1.0;
  spec.a = -0.71829;
  spec.b = 1.240801;
  spec.weight_at_a = 3.51338;
  const StairStepControl u = synthesize_control(spec);
  REQUIRE(u.segments.size() == 4);
  CHECK(u.segments[0].level == +1);
  CHECK(u.segments[0].duration == doctest::Approx(0.240801).epsilon(1e-6));
  CHECK(u.segments[1].level == -1);
  CHECK(u.segments[1].duration == doctest::Approx(1.959091).epsilon(1e-5));
  CHECK(u.segments[2].level == 0);
  CHECK(u.segments[3].level == +1);
  CHECK(u.total_time() == doctest::Approx(6.43157).epsilon(1e-5));
}

TEST_CASE("invalid ladders are rejected") {
  SynthesisSpec spec;
  spec.x1_0 = 1.0;
  spec.a = -1.0;
  spec.b = 1.0;
  spec.interior_nodes = {1.4};  // above b
  spec.interior_weights = {1.0};
  CHECK_THROWS_AS(synthesize_control(spec), std::runtime_error);
}

TEST_CASE("monomial integrals under full thrust") {
  const std::vector<double> x0(4, 0.0);
  StairStepControl u;
  u.segments = {{+1, 2.0}};
  const std::vector<double> fin = simulate_exact(x0, u);
  CHECK(fin[0] == doctest::Approx(2.0));
  CHECK(fin[1] == doctest::Approx(2.0));        // T^2/2
  CHECK(fin[2] == doctest::Approx(8.0 / 3));    // T^3/3
  CHECK(fin[3] == doctest::Approx(4.0));        // T^4/4
}

TEST_CASE("closed form tracks a fine-step integrator") {
  std::mt19937_64 rng(12321);
  std::uniform_real_distribution<double> dur(0.1, 1.5), xv(-1.0, 1.0);
  std::uniform_int_distribution<int> lvl(-1, 1);
  for (int trial = 0; trial < 8; ++trial) {
    StairStepControl u;
    for (int s = 0; s < 5; ++s) u.segments.push_back({lvl(rng), dur(rng)});
    std::vector<double> x0(6);
    for (double& v : x0) v = xv(rng);
    const std::vector<double> exact = simulate_exact(x0, u);
    const std::vector<double> ref = rk4_reference(x0, u, 1e-3);
    for (size_t i = 0; i < x0.size(); ++i)
      CHECK(std::abs(exact[i] - ref[i]) <= 1e-7 * std::max(1.0, std::abs(ref[i])));
  }
}

TEST_CASE("breakpoints carry the level ladder") {
  SynthesisSpec spec;
  spec.x1_0 = 1.0;
  spec.a = -1.66366;
  spec.b = 1.0;
  spec.interior_nodes = {0.608501};
  spec.interior_weights = {7.01356};
  const StairStepControl u = synthesize_control(spec);

  std::vector<double> x0{1.0, -2.0, -6.0, 2.0};
  Trajectory bp;
  simulate_exact(x0, u, &bp);
  REQUIRE(bp.states.size() == u.segments.size() + 1);
  // x1 visits b, z2, z2, a, 0 across the breakpoints of this control.
  CHECK(bp.states[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bp.states[1][0] == doctest::Approx(0.608501).epsilon(1e-6));
  CHECK(bp.states[2][0] == doctest::Approx(0.608501).epsilon(1e-6));
  CHECK(bp.states[3][0] == doctest::Approx(-1.66366).epsilon(1e-6));
  CHECK(std::abs(bp.states[4][0]) <= 1e-9);

  // Time identity: total = 2b - 2a - x1 + sum of dwell durations.
  double dwell = 0.0;
  for (const auto& s : u.segments)
    if (s.level == 0) dwell += s.duration;
  CHECK(u.total_time() ==
        doctest::Approx(2 * spec.b - 2 * spec.a - spec.x1_0 + dwell).epsilon(1e-12));
}

TEST_CASE("uniform sampling is exact and self-consistent") {
  std::vector<double> x0{0.5, 0.0, 0.0, 0.0};
  StairStepControl u;
  u.segments = {{+1, 0.7}, {0, 0.4}, {-1, 1.7}};

  const Trajectory two = sample_trajectory(x0, u, 2);
  REQUIRE(two.times.size() == 2);
  CHECK(two.times[0] == 0.0);
  CHECK(two.times[1] == doctest::Approx(u.total_time()));
  const std::vector<double> fin = simulate_exact(x0, u);
  for (size_t i = 0; i < x0.size(); ++i) CHECK(two.states[1][i] == doctest::Approx(fin[i]));

  // Piecewise-affine first component at every sample.
  const Trajectory many = sample_trajectory(x0, u, 101);
  for (size_t i = 0; i < many.times.size(); ++i) {
    const double t = many.times[i];
    double want = 0.5, used = 0.0;
    for (const auto& seg : u.segments) {
      const double dt = std::min(std::max(t - used, 0.0), seg.duration);
      want += seg.level * dt;
      used += seg.duration;
    }
    CHECK(many.states[i][0] == doctest::Approx(want).epsilon(1e-12));
  }

  // Shared grid points agree exactly between m and 2m-1 samples.
  const Trajectory coarse = sample_trajectory(x0, u, 11);
  const Trajectory fine = sample_trajectory(x0, u, 21);
  for (size_t i = 0; i < coarse.times.size(); ++i) {
    CHECK(coarse.times[i] == fine.times[2 * i]);
    for (size_t j = 0; j < x0.size(); ++j) CHECK(coarse.states[i][j] == fine.states[2 * i][j]);
  }
}
