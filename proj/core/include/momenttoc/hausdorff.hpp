#ifndef MOMENTTOC_HAUSDORFF_HPP
#define MOMENTTOC_HAUSDORFF_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "momenttoc/hankel.hpp"
#include "momenttoc/polynomial.hpp"

namespace mtoc {

/// The four solvability regimes for the truncated moment problem on [a,b]:
///   A - all mass strictly inside (a,b), at k-1 nonzero points
///   B - mass at both endpoints plus k-1 interior points
///   C - mass at b plus k-1 interior points
///   D - mass at a plus k-1 interior points
enum class LemmaType { A, B, C, D };

char lemma_type_name(LemmaType t);

/// Which shifted sequences drive the three condition families and how large
/// the tested blocks are, as a function of the node count k and sequence
/// length n.
struct LemmaTraits {
  ShiftKind driving;    // singularity family, the two k-1 blocks, node polynomial
  ShiftKind cond3;      // complementary positive-definiteness block
  int cond3_size;       // block size for condition 3
  int d_max;            // singularity family runs d = 0..d_max
  bool mass_at_b;
  bool mass_at_a;
  int mass_count;       // number of jump points
};

LemmaTraits lemma_traits(LemmaType t, int k, int n);

/// Outcome of the three-part condition check. Singularity residuals are
/// diagnostics only (the solve path enforces them by construction); passed
/// is the conjunction of the three positive-definiteness verdicts.
struct ConditionReport {
  std::vector<double> singular_residuals;        // d = 0..d_max, normalized |det|
  std::array<bool, 3> pd{false, false, false};   // driving d=0, driving d=2, cond 3
  std::array<std::vector<double>, 3> minors;     // leading principal minors per check
  bool passed = false;
};

ConditionReport check_conditions(const MomentSequence& c, LemmaType type, int k, double a,
                                 double b, double tol_pd = 1e-9, double tol_sing = 1e-7);

/// Interior nodes z_2..z_k as roots of the bordered-determinant polynomial
/// of the driving sequence, sorted descending. k = 1 yields an empty list.
/// Throws when the polynomial's leading block is singular.
std::vector<RealRoot> recover_nodes(const MomentSequence& c, LemmaType type, int k, double a,
                                    double b, double tol_root = 1e-10,
                                    double merge_tol = 1e-7);

/// Jump values from the square Vandermonde system of the type's first
/// moment equations; positional order (mass at b, interior descending,
/// mass at a). The remaining moment equations are verified as a
/// consistency check. Throws on a singular system or on residuals beyond
/// consistency_tol * max(1, |c|_inf).
std::vector<double> recover_weights(const MomentSequence& c, LemmaType type,
                                    std::span<const double> interior_nodes_desc, double a,
                                    double b, double consistency_tol = 1e-6);

/// Appendix-style global solvability test: both parity matrices
/// non-negative definite within -tol * scale.
bool general_solvability(const MomentSequence& c, double a, double b, double tol = 1e-9);

/// Step function on [a,b]: jump locations (descending) and positive jump
/// values; endpoint masses are represented by nodes equal to a or b.
struct StepFunction {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// First n power moments of the step measure: c_j = sum w_s z_s^{j-1}.
MomentSequence moments_of(const StepFunction& s, int n);

/// Sum of per-point indices: interior discontinuities count 2, endpoint
/// discontinuities count 1.
int step_index(const StepFunction& s);

}  // namespace mtoc

#endif  // MOMENTTOC_HAUSDORFF_HPP
