#ifndef MOMENTTOC_BIVARIATE_HPP
#define MOMENTTOC_BIVARIATE_HPP

#include <vector>

#include "momenttoc/polynomial.hpp"

namespace mtoc {

/// Polynomial in two variables (a, b), stored as a polynomial in b whose
/// coefficients are Polynomials in a. Substituting either variable yields
/// a univariate Polynomial in the other; the two substitution orders
/// commute.
class BivariatePoly {
 public:
  BivariatePoly() = default;
  explicit BivariatePoly(std::vector<Polynomial> b_coeffs);

  static BivariatePoly constant(double v);
  static BivariatePoly var_a();
  static BivariatePoly var_b();
  static BivariatePoly from_poly_in_a(Polynomial pa);
  static BivariatePoly from_poly_in_b(const Polynomial& pb);

  bool is_zero() const { return b_coeffs_.empty(); }
  int degree_b() const { return static_cast<int>(b_coeffs_.size()) - 1; }
  int degree_a() const;
  double max_abs_coeff() const;

  const std::vector<Polynomial>& b_coeffs() const { return b_coeffs_; }

  double eval(double a, double b) const;
  Polynomial substitute_a(double a) const;  // -> Polynomial in b
  Polynomial substitute_b(double b) const;  // -> Polynomial in a

  /// Conversions for polynomials that are univariate in disguise; throw
  /// std::logic_error when the other variable is genuinely present.
  Polynomial as_poly_in_a() const;
  Polynomial as_poly_in_b() const;
  BivariatePoly deriv_a() const;
  BivariatePoly deriv_b() const;

  BivariatePoly operator-() const;
  BivariatePoly& operator+=(const BivariatePoly& o);
  BivariatePoly& operator-=(const BivariatePoly& o);
  BivariatePoly& operator*=(double s);
  friend BivariatePoly operator+(BivariatePoly l, const BivariatePoly& r) { return l += r; }
  friend BivariatePoly operator-(BivariatePoly l, const BivariatePoly& r) { return l -= r; }
  friend BivariatePoly operator*(BivariatePoly l, double s) { return l *= s; }
  friend BivariatePoly operator*(double s, BivariatePoly r) { return r *= s; }
  friend BivariatePoly operator*(const BivariatePoly& l, const BivariatePoly& r);

 private:
  void trim();
  std::vector<Polynomial> b_coeffs_;
};

/// Determinant of a square matrix of univariate polynomials.
/// Fraction-free (Bareiss) elimination up to bareiss_limit rows with a
/// sampled cross-check against numeric LU; evaluation-interpolation on
/// the unit circle otherwise.
Polynomial poly_matrix_det(std::vector<std::vector<Polynomial>> m, int bareiss_limit = 24);

/// Determinant of a square matrix of bivariate polynomials by cofactor
/// expansion (intended for the small Hankel blocks, size <= 5).
BivariatePoly bipoly_matrix_det(const std::vector<std::vector<BivariatePoly>>& m);

/// Determinant of the Sylvester matrix of p and q with respect to b;
/// a polynomial in a whose roots contain every a at which p(a,.) and
/// q(a,.) share a common root. Throws std::invalid_argument when both
/// inputs have degree 0 in b.
Polynomial sylvester_resultant(const BivariatePoly& p, const BivariatePoly& q);

/// Numeric value of the same Sylvester determinant at one point a, via a
/// scaled LU factorization. Exact sign-change scans of this function
/// locate resultant roots without going through global coefficients.
double sylvester_det_at(const BivariatePoly& p, const BivariatePoly& q, double a);

/// Variable substitution a -> r*a (coefficients of a^i scaled by r^i).
BivariatePoly scale_var_a(const BivariatePoly& p, double r);

/// Common real roots of p and q inside `window`: candidates from either
/// root set, polished by Gauss-Newton on the pair, kept when both
/// residuals pass the scale-relative tolerance. Ascending, deduplicated.
std::vector<double> common_roots(const Polynomial& p, const Polynomial& q,
                                 Interval window = {}, double tol = 1e-8,
                                 double merge_tol = 1e-7);

}  // namespace mtoc

#endif  // MOMENTTOC_BIVARIATE_HPP
