#ifndef MOMENTTOC_MOMENTS_HPP
#define MOMENTTOC_MOMENTS_HPP

#include <span>
#include <vector>

#include "momenttoc/bivariate.hpp"
#include "momenttoc/cases.hpp"
#include "momenttoc/config.hpp"
#include "momenttoc/hankel.hpp"

namespace mtoc {

/// Initial state with x1 > 0 (the normalized orientation).
struct InitialState {
  std::vector<double> x0;

  int n() const { return static_cast<int>(x0.size()); }
  double x1() const { return x0[0]; }
  double inf_norm() const;
};

struct NormalizedState {
  InitialState state;
  bool mirrored = false;
};

/// The sign map of the u -> -u symmetry: y_1 = -x_1, y_j = (-1)^(j-1) x_j.
/// Applying it twice is the identity.
std::vector<double> mirror_state(std::span<const double> x0);

/// Validates n >= 4 and finite entries, then orients the state so that
/// x1 > 0, mirroring when x1 < 0. Throws NonGenericError when x1 == 0
/// (the generic analysis does not cover that hyperplane).
NormalizedState normalize_initial_state(std::span<const double> x0raw);

/// The moment sequence attached to endpoints (a, b) and time theta:
///   c_1 = theta + x1 - 2b + 2a
///   c_j = -x_j + (x1^j - 2 b^j + 2 a^j) / j,   j = 2..n.
/// Preconditions a <= 0, b >= x1, theta >= 0.
MomentSequence assemble_moments(const InitialState& x0, double a, double b, double theta);

/// c_2..c_n as polynomials in the case's free endpoint variables (pinned
/// endpoints already substituted), plus the affine part of c_1:
/// c_1 = theta + c1_offset(a, b).
struct MomentPolynomials {
  std::vector<BivariatePoly> cj;  // index j-2 holds c_j
  BivariatePoly c1_offset;

  const BivariatePoly& c_of(int j) const { return cj[static_cast<size_t>(j - 2)]; }
  int n() const { return static_cast<int>(cj.size()) + 1; }
};

MomentPolynomials case_polynomials(const InitialState& x0, const CaseDescriptor& cse);

}  // namespace mtoc

#endif  // MOMENTTOC_MOMENTS_HPP
