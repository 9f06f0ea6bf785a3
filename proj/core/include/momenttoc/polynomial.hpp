#ifndef MOMENTTOC_POLYNOMIAL_HPP
#define MOMENTTOC_POLYNOMIAL_HPP

#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace mtoc {

/// Dense univariate polynomial with real coefficients, ascending degree.
/// Trailing zero coefficients are trimmed on construction, so degree() is
/// the index of the last nonzero entry (-1 for the zero polynomial).
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double v);
  static Polynomial variable();  // p(x) = x
  static Polynomial monomial(int degree, double coeff = 1.0);
  static Polynomial from_roots(std::span<const double> roots, double lead = 1.0);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  double operator()(double x) const;  // Horner
  double derivative_at(double x) const;
  Polynomial derivative() const;

  std::span<const double> coeffs() const { return coeffs_; }
  double coeff(int i) const;  // zero outside [0, degree]
  double max_abs_coeff() const;

  /// |p| evaluation scale used by residual bounds: max|coeff| * max(1,|x|)^deg.
  double residual_scale(double x) const;

  /// Drops leading coefficients with |c| <= rel_tol * max|coeff|.
  Polynomial trimmed_leading(double rel_tol) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial l, const Polynomial& r) { return l += r; }
  friend Polynomial operator-(Polynomial l, const Polynomial& r) { return l -= r; }
  friend Polynomial operator*(Polynomial l, double s) { return l *= s; }
  friend Polynomial operator*(double s, Polynomial r) { return r *= s; }
  friend Polynomial operator*(const Polynomial& l, const Polynomial& r);

  /// Exact quotient l / r when the division is known to be remainder-free
  /// (fraction-free elimination); the discarded remainder is not checked.
  static Polynomial exact_quotient(const Polynomial& num, const Polynomial& den);

 private:
  void trim();
  std::vector<double> coeffs_;
};

/// Optional one-sided or two-sided root window; bounds are inclusive up to
/// a small relative slack.
struct Interval {
  std::optional<double> lo;
  std::optional<double> hi;
  bool contains(double x, double slack = 1e-12) const;
};

struct RealRoot {
  double x = 0.0;
  int multiplicity = 1;
  bool merged = false;  ///< produced by clustering nearly coincident roots
};

/// All real roots of p (restricted to `window` when given), ascending,
/// polished by Newton iteration against p itself. Nearly coincident roots
/// are merged into one entry with the cluster size as multiplicity.
/// Throws std::invalid_argument for the zero polynomial or non-finite
/// coefficients; a degree-0 polynomial yields an empty list.
std::vector<RealRoot> real_roots(const Polynomial& p, Interval window = {},
                                 double tol_root = 1e-10,
                                 double merge_tol = 1e-7);

}  // namespace mtoc

#endif  // MOMENTTOC_POLYNOMIAL_HPP
