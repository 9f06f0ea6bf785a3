#ifndef MOMENTTOC_CONTROL_HPP
#define MOMENTTOC_CONTROL_HPP

#include <span>
#include <vector>

namespace mtoc {

/// One constant piece of a stair-step control; level is +1, 0, or -1.
struct ControlSegment {
  int level = 0;
  double duration = 0.0;
};

struct StairStepControl {
  std::vector<ControlSegment> segments;
  double total_time() const;
};

StairStepControl negated(StairStepControl u);

/// Data needed to lay out the stair-step pattern
///   +1 (a1) | 0 (s_b) | -1,0,-1,0,... through the interior levels | 0 (s_a) | +1 (-a)
/// from recovered jump data. Interior nodes are strictly inside (a,b),
/// descending; endpoint weights are zero when the mass is absent.
struct SynthesisSpec {
  double x1_0 = 0.0;
  double a = 0.0;
  double b = 0.0;
  std::vector<double> interior_nodes;
  std::vector<double> interior_weights;
  double weight_at_b = 0.0;
  double weight_at_a = 0.0;
};

/// Assembles the control: rise a1 = b - x1, dwell at each level for its
/// jump value, sweep between consecutive levels at -1, final rise -a.
/// Zero-length pieces are dropped. Throws when a sweep duration is
/// non-positive or the duration balance fails.
StairStepControl synthesize_control(const SynthesisSpec& spec);

/// Exact states at segment boundaries (and optionally on a uniform grid).
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<int> levels;  // control level active from each time onward
};

/// Propagates the chain x1' = u, x_j' = x1^(j-1) in closed form segment by
/// segment (x1 is piecewise affine, so each increment is a polynomial in
/// the segment duration). Compensated accumulation across segments.
std::vector<double> simulate_exact(std::span<const double> x0, const StairStepControl& u,
                                   Trajectory* breakpoints = nullptr);

/// Exact states at m >= 2 uniform times spanning [0, total_time].
Trajectory sample_trajectory(std::span<const double> x0, const StairStepControl& u, int m);

}  // namespace mtoc

#endif  // MOMENTTOC_CONTROL_HPP
