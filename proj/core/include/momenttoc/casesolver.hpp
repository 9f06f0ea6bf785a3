#ifndef MOMENTTOC_CASESOLVER_HPP
#define MOMENTTOC_CASESOLVER_HPP

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "momenttoc/cases.hpp"
#include "momenttoc/config.hpp"
#include "momenttoc/control.hpp"
#include "momenttoc/hausdorff.hpp"
#include "momenttoc/moments.hpp"

namespace mtoc {

/// One evaluated endpoint pair for one case, accepted or rejected with a
/// reason. Endpoint, node and weight data are in the normalized frame
/// (x1 > 0); the control is in the caller's frame.
struct CandidateSolution {
  CaseDescriptor cse;
  double a = 0.0;
  double b = 0.0;
  double theta = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> nodes;    // interior jump points, descending
  std::vector<double> weights;  // positional: [mass at b], interior..., [mass at a]
  ConditionReport report;
  std::optional<StairStepControl> control;
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::string> reject_reason;

  bool accepted() const { return !reject_reason.has_value(); }
};

enum class Verdict { optimal_found, not_controllable, non_generic };

struct SolveReport {
  std::vector<double> x0;  // input as given
  bool mirrored = false;
  std::vector<CandidateSolution> candidates;  // sorted by case id
  std::optional<size_t> best_index;
  Verdict verdict = Verdict::not_controllable;
  std::vector<std::string> notes;

  const CandidateSolution* best() const {
    return best_index ? &candidates[*best_index] : nullptr;
  }
};

/// The theta-free determinant equations of a case (d = 1..d_max) in the
/// case's free endpoint variables; pinned endpoints are substituted.
std::vector<BivariatePoly> endpoint_equations(const InitialState& x0,
                                              const CaseDescriptor& cse);

/// Admissible endpoint pairs (a, b) solving the case's d >= 1 equations,
/// boundary roots snapped onto the pinned value. Two-unknown cases go
/// through resultant elimination, common roots, and a joint Newton polish.
/// An identically vanishing resultant is reported through degenerate_note.
std::vector<std::pair<double, double>> solve_endpoints(const InitialState& x0,
                                                       const CaseDescriptor& cse,
                                                       const Config& cfg,
                                                       std::string* degenerate_note = nullptr);

/// Optimal-time value from the d = 0 equation, which is affine in c_1:
/// c_1 = -det0 / (gamma * cofactor). Empty when the cofactor vanishes.
std::optional<double> solve_theta(const InitialState& x0, const CaseDescriptor& cse, double a,
                                  double b, const Config& cfg);

/// Runs the full per-candidate pipeline: theta, conditions, nodes, weights,
/// control synthesis, and the exact-simulation residual gate.
CandidateSolution evaluate_candidate(const InitialState& x0, const CaseDescriptor& cse,
                                     double a, double b, const Config& cfg);

/// Full solve: normalize, enumerate the parity's cases, evaluate every
/// admissible endpoint pair, deduplicate, and rank accepted candidates by
/// theta. Controls are negated on output when the input was mirrored.
SolveReport solve(std::span<const double> x0raw, const Config& cfg = {});

}  // namespace mtoc

#endif  // MOMENTTOC_CASESOLVER_HPP
