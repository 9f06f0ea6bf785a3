#ifndef MOMENTTOC_ORACLE_HPP
#define MOMENTTOC_ORACLE_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "momenttoc/cases.hpp"
#include "momenttoc/control.hpp"
#include "momenttoc/moments.hpp"

namespace mtoc {

/// Brute-force search settings. Each case family is parameterized by its
/// free durations (the balance constraint eliminates one sweep length);
/// every refinement pass tightens the feasibility tolerance tenfold and
/// zooms the grid around the incumbent.
struct GridSpec {
  int resolution = 24;          ///< grid points per free parameter
  int refinements = 2;          ///< extra passes beyond the initial sweep
  int zooms = 5;                ///< zoom-in iterations within each pass
  double initial_feas_tol = 1e-2;  ///< times (1 + |x0|_inf)
  double duration_upper = 10.0;    ///< search box edge for every duration
};

struct GridSearchOutcome {
  bool feasible = false;  ///< false: infeasible at the tested resolution
  double approx_theta = std::numeric_limits<double>::infinity();
  int case_id = 0;
  double residual = std::numeric_limits<double>::infinity();
  double feas_tol_used = 0.0;
  std::vector<double> theta_by_pass;  ///< running minimum, non-increasing
};

/// Exhaustive minimal-time search over the stair-step families of the
/// given cases, entirely independent of the moment-problem machinery.
/// Desk scale: n = 4 or 5.
GridSearchOutcome grid_search_min_time(const InitialState& x0,
                                       std::span<const CaseDescriptor> cases,
                                       const GridSpec& spec);

struct RoundTripResult {
  bool pass = false;
  std::string detail;
};

/// Draws a random valid step function of the given type (nodes keep a 0.05
/// margin from zero, weights in [0.1, 10]), builds its moments, and checks
/// that the conditions hold and that nodes and weights are reproduced to
/// 1e-6 relative.
RoundTripResult random_step_roundtrip(std::uint64_t seed, LemmaType type, int k, int n);

/// A controllable instance built by forward construction: a random control
/// conforming to one of the parity's cases, with x0 chosen so the control
/// steers it exactly to the origin.
struct ConstructedInstance {
  std::vector<double> x0;
  StairStepControl control;
  double total_time = 0.0;
  int case_id = 0;
};

ConstructedInstance random_controllable_instance(std::uint64_t seed, int n);

}  // namespace mtoc

#endif  // MOMENTTOC_ORACLE_HPP
