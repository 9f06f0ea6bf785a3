#ifndef MOMENTTOC_HANKEL_HPP
#define MOMENTTOC_HANKEL_HPP

#include <vector>

namespace mtoc {

/// Moment sequence c_1..c_n; entries are accessed 1-based through at1()
/// to stay aligned with the Hankel index conventions.
struct MomentSequence {
  std::vector<double> c;

  MomentSequence() = default;
  explicit MomentSequence(std::vector<double> values) : c(std::move(values)) {}

  int size() const { return static_cast<int>(c.size()); }
  double at1(int j) const { return c[static_cast<size_t>(j - 1)]; }
  double& at1(int j) { return c[static_cast<size_t>(j - 1)]; }
  double max_abs() const;
};

/// The shifted sequences of Lemma-style moment conditions:
///   a_shift:  c^a_j = c_{j+1} - a c_j          (length n-1)
///   b_shift:  c^b_j = -c_{j+1} + b c_j         (length n-1)
///   ab_shift: c^{a,b}_j = -c_{j+2} + (a+b) c_{j+1} - a b c_j   (length n-2)
enum class ShiftKind { plain, a_shift, b_shift, ab_shift };

MomentSequence shift_sequence(const MomentSequence& c, ShiftKind kind, double a, double b);

/// Determinant of the k x k Hankel block {c_{i+j-1+d}}. Fraction-free
/// elimination up to 8x8, partial-pivot LU beyond. k = 0 yields 1.
double hankel_det(const MomentSequence& c, int k, int d);

/// Leading principal minors of {c_{i+j-1+d}}_{i,j=1..k}, sizes 1..k.
std::vector<double> hankel_leading_minors(const MomentSequence& c, int k, int d);

/// Sylvester criterion with a scale-relative margin: every leading minor of
/// order i must exceed tol * g^i, where g is the geometric mean of the
/// diagonal magnitudes. k = 0 is vacuously true.
bool is_positive_definite(const MomentSequence& c, int k, int d, double tol);

/// Normalized |det| used for the by-construction singularity diagnostics:
/// |det| / max(1, max|entry|)^k.
double hankel_singularity_residual(const MomentSequence& c, int k, int d);

}  // namespace mtoc

#endif  // MOMENTTOC_HANKEL_HPP
