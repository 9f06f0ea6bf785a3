#include "momenttoc/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtoc {

namespace {

constexpr double kDropTol = 1e-12;

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Increment of x_j over a piece where x1(t) = z + eps*t, t in [0, tau]:
//   integral of (z + eps t)^(j-1) = sum_i C(j-1,i) z^(j-1-i) eps^i tau^(i+1)/(i+1).
double piece_increment(int j, double z, int eps, double tau) {
  const int p = j - 1;
  if (p == 0) return tau;
  double binom = 1.0;  // C(p, i)
  double zp = 1.0;     // z^(p-i) built downward
  for (int i = 0; i < p; ++i) zp *= z;
  double epsi = 1.0;
  double taup = tau;
  double acc = 0.0;
  for (int i = 0; i <= p; ++i) {
    acc += binom * zp * epsi * taup / (i + 1);
    binom = binom * (p - i) / (i + 1);
    if (z != 0.0)
      zp /= z;
    else
      zp = (i + 1 == p) ? 1.0 : 0.0;  // z^(p-i-1) with z = 0
    epsi *= eps;
    taup *= tau;
  }
  return acc;
}

}  // namespace

double StairStepControl::total_time() const {
  CompensatedSum t;
  for (const auto& s : segments) t.add(s.duration);
  return t.value();
}

StairStepControl negated(StairStepControl u) {
  for (auto& s : u.segments) s.level = -s.level;
  return u;
}

StairStepControl synthesize_control(const SynthesisSpec& spec) {
  const size_t kminus1 = spec.interior_nodes.size();
  if (spec.interior_weights.size() != kminus1)
    throw std::invalid_argument("synthesize_control: node/weight count mismatch");

  const double a1 = spec.b - spec.x1_0;
  const double a2 = -spec.a;
  if (a1 < -kDropTol || a2 < -kDropTol)
    throw std::runtime_error("synthesize_control: negative rise duration");

  // Level ladder b = z_1 > z_2 > ... > z_k > z_{k+1} = a and dwell times.
  std::vector<double> levels{spec.b};
  levels.insert(levels.end(), spec.interior_nodes.begin(), spec.interior_nodes.end());
  levels.push_back(spec.a);
  std::vector<double> dwells{spec.weight_at_b};
  dwells.insert(dwells.end(), spec.interior_weights.begin(), spec.interior_weights.end());
  dwells.push_back(spec.weight_at_a);

  StairStepControl u;
  auto push = [&u](int level, double dur) {
    if (dur < -kDropTol) throw std::runtime_error("synthesize_control: negative duration");
    if (dur > kDropTol) u.segments.push_back({level, dur});
  };

  push(+1, a1);
  for (size_t s = 0; s + 1 < levels.size(); ++s) {
    push(0, dwells[s]);
    const double sweep = levels[s] - levels[s + 1];
    if (sweep <= kDropTol) throw std::runtime_error("synthesize_control: non-positive sweep duration");
    push(-1, sweep);
  }
  push(0, dwells.back());
  push(+1, a2);

  // Trailing dwell at a requires the final rise (a < 0) to be present.
  if (dwells.back() > kDropTol && a2 <= kDropTol)
    throw std::runtime_error("synthesize_control: dwell at a without final rise");

  // x1 + a1 + a2 must equal the total sweep b - a.
  const double balance = (spec.x1_0 + a1 + a2) - (spec.b - spec.a);
  if (std::abs(balance) > 1e-9 * std::max(1.0, std::abs(spec.b - spec.a)))
    throw std::runtime_error("synthesize_control: duration balance violated");

  return u;
}

std::vector<double> simulate_exact(std::span<const double> x0, const StairStepControl& u,
                                   Trajectory* breakpoints) {
  const int n = static_cast<int>(x0.size());
  std::vector<CompensatedSum> acc(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) acc[static_cast<size_t>(j)].add(x0[static_cast<size_t>(j)]);
  CompensatedSum clock;

  auto snapshot = [&]() {
    if (!breakpoints) return;
    breakpoints->times.push_back(clock.value());
    std::vector<double> st(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) st[static_cast<size_t>(j)] = acc[static_cast<size_t>(j)].value();
    breakpoints->states.push_back(std::move(st));
  };

  snapshot();
  for (const auto& seg : u.segments) {
    const double z = acc[0].value();
    for (int j = 2; j <= n; ++j)
      acc[static_cast<size_t>(j - 1)].add(piece_increment(j, z, seg.level, seg.duration));
    acc[0].add(seg.level * seg.duration);
    clock.add(seg.duration);
    snapshot();
  }
  if (breakpoints) {
    // Level active from each breakpoint onward; the final entry repeats the
    // closing segment's level.
    const size_t count = breakpoints->times.size();
    breakpoints->levels.resize(count, 0);
    for (size_t i = 0; i < count; ++i) {
      const size_t seg = std::min(i, u.segments.empty() ? 0 : u.segments.size() - 1);
      breakpoints->levels[i] = u.segments.empty() ? 0 : u.segments[seg].level;
    }
  }

  std::vector<double> final_state(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) final_state[static_cast<size_t>(j)] = acc[static_cast<size_t>(j)].value();
  return final_state;
}

Trajectory sample_trajectory(std::span<const double> x0, const StairStepControl& u, int m) {
  if (m < 2) throw std::invalid_argument("sample_trajectory: need m >= 2");
  const int n = static_cast<int>(x0.size());

  Trajectory bp;
  simulate_exact(x0, u, &bp);
  const double total = u.total_time();

  Trajectory out;
  out.times.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double t = (i == m - 1) ? total : total * i / (m - 1);
    // Locate the segment containing t (right-continuous in the level).
    size_t seg = 0;
    while (seg + 1 < u.segments.size() && t >= bp.times[seg + 1]) ++seg;
    if (u.segments.empty()) {
      out.times.push_back(0.0);
      out.states.push_back(bp.states[0]);
      out.levels.push_back(0);
      continue;
    }
    const double tau = t - bp.times[seg];
    const std::vector<double>& base = bp.states[seg];
    std::vector<double> st(static_cast<size_t>(n));
    const int eps = u.segments[seg].level;
    for (int j = 2; j <= n; ++j)
      st[static_cast<size_t>(j - 1)] =
          base[static_cast<size_t>(j - 1)] + piece_increment(j, base[0], eps, tau);
    st[0] = base[0] + eps * tau;
    out.times.push_back(t);
    out.states.push_back(std::move(st));
    out.levels.push_back(eps);
  }
  return out;
}

}  // namespace mtoc
