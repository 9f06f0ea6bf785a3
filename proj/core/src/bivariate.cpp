#include "momenttoc/bivariate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

namespace mtoc {

BivariatePoly::BivariatePoly(std::vector<Polynomial> b_coeffs)
    : b_coeffs_(std::move(b_coeffs)) {
  trim();
}

void BivariatePoly::trim() {
  while (!b_coeffs_.empty() && b_coeffs_.back().is_zero()) b_coeffs_.pop_back();
}

BivariatePoly BivariatePoly::constant(double v) {
  return BivariatePoly({Polynomial::constant(v)});
}

BivariatePoly BivariatePoly::var_a() { return BivariatePoly({Polynomial::variable()}); }

BivariatePoly BivariatePoly::var_b() {
  return BivariatePoly({Polynomial{}, Polynomial::constant(1.0)});
}

BivariatePoly BivariatePoly::from_poly_in_a(Polynomial pa) {
  return BivariatePoly({std::move(pa)});
}

BivariatePoly BivariatePoly::from_poly_in_b(const Polynomial& pb) {
  std::vector<Polynomial> c;
  c.reserve(static_cast<size_t>(pb.degree()) + 1);
  for (int i = 0; i <= pb.degree(); ++i) c.push_back(Polynomial::constant(pb.coeff(i)));
  return BivariatePoly(std::move(c));
}

int BivariatePoly::degree_a() const {
  int d = -1;
  for (const auto& p : b_coeffs_) d = std::max(d, p.degree());
  return d;
}

double BivariatePoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& p : b_coeffs_) m = std::max(m, p.max_abs_coeff());
  return m;
}

double BivariatePoly::eval(double a, double b) const {
  double acc = 0.0;
  for (auto it = b_coeffs_.rbegin(); it != b_coeffs_.rend(); ++it) acc = acc * b + (*it)(a);
  return acc;
}

Polynomial BivariatePoly::substitute_a(double a) const {
  std::vector<double> c;
  c.reserve(b_coeffs_.size());
  for (const auto& p : b_coeffs_) c.push_back(p(a));
  return Polynomial(std::move(c));
}

Polynomial BivariatePoly::substitute_b(double b) const {
  Polynomial acc;
  for (auto it = b_coeffs_.rbegin(); it != b_coeffs_.rend(); ++it) {
    // acc = acc*b + coeff (Horner over Polynomial coefficients)
    acc *= b;
    acc += *it;
  }
  return acc;
}

Polynomial BivariatePoly::as_poly_in_a() const {
  if (degree_b() > 0) throw std::logic_error("as_poly_in_a: depends on b");
  return is_zero() ? Polynomial{} : b_coeffs_[0];
}

Polynomial BivariatePoly::as_poly_in_b() const {
  if (degree_a() > 0) throw std::logic_error("as_poly_in_b: depends on a");
  std::vector<double> c;
  c.reserve(b_coeffs_.size());
  for (const auto& p : b_coeffs_) c.push_back(p.coeff(0));
  return Polynomial(std::move(c));
}

BivariatePoly BivariatePoly::deriv_a() const {
  std::vector<Polynomial> c;
  c.reserve(b_coeffs_.size());
  for (const auto& p : b_coeffs_) c.push_back(p.derivative());
  return BivariatePoly(std::move(c));
}

BivariatePoly BivariatePoly::deriv_b() const {
  if (b_coeffs_.size() <= 1) return {};
  std::vector<Polynomial> c;
  c.reserve(b_coeffs_.size() - 1);
  for (size_t i = 1; i < b_coeffs_.size(); ++i)
    c.push_back(b_coeffs_[i] * static_cast<double>(i));
  return BivariatePoly(std::move(c));
}

BivariatePoly BivariatePoly::operator-() const {
  std::vector<Polynomial> c;
  c.reserve(b_coeffs_.size());
  for (const auto& p : b_coeffs_) c.push_back(-p);
  return BivariatePoly(std::move(c));
}

BivariatePoly& BivariatePoly::operator+=(const BivariatePoly& o) {
  if (o.b_coeffs_.size() > b_coeffs_.size()) b_coeffs_.resize(o.b_coeffs_.size());
  for (size_t i = 0; i < o.b_coeffs_.size(); ++i) b_coeffs_[i] += o.b_coeffs_[i];
  trim();
  return *this;
}

BivariatePoly& BivariatePoly::operator-=(const BivariatePoly& o) {
  if (o.b_coeffs_.size() > b_coeffs_.size()) b_coeffs_.resize(o.b_coeffs_.size());
  for (size_t i = 0; i < o.b_coeffs_.size(); ++i) b_coeffs_[i] -= o.b_coeffs_[i];
  trim();
  return *this;
}

BivariatePoly& BivariatePoly::operator*=(double s) {
  for (auto& p : b_coeffs_) p *= s;
  trim();
  return *this;
}

BivariatePoly operator*(const BivariatePoly& l, const BivariatePoly& r) {
  if (l.is_zero() || r.is_zero()) return {};
  std::vector<Polynomial> c(l.b_coeffs_.size() + r.b_coeffs_.size() - 1);
  for (size_t i = 0; i < l.b_coeffs_.size(); ++i)
    for (size_t j = 0; j < r.b_coeffs_.size(); ++j) c[i + j] += l.b_coeffs_[i] * r.b_coeffs_[j];
  return BivariatePoly(std::move(c));
}

namespace {

std::complex<double> eval_complex(const Polynomial& p, std::complex<double> x) {
  std::complex<double> acc = 0.0;
  for (int i = p.degree(); i >= 0; --i) acc = acc * x + p.coeff(i);
  return acc;
}

// Fraction-free elimination; pivots are exact minors so the polynomial
// divisions are remainder-free up to roundoff.
Polynomial bareiss_det(std::vector<std::vector<Polynomial>> m, double zero_tol) {
  const size_t n = m.size();
  Polynomial prev = Polynomial::constant(1.0);
  double sign = 1.0;
  for (size_t k = 0; k + 1 < n; ++k) {
    // Pivot by largest coefficient magnitude.
    size_t piv = k;
    double best = m[k][k].max_abs_coeff();
    for (size_t r = k + 1; r < n; ++r) {
      const double v = m[r][k].max_abs_coeff();
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= zero_tol) return {};  // column of zeros: singular
    if (piv != k) {
      std::swap(m[piv], m[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        Polynomial num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        m[i][j] = Polynomial::exact_quotient(num, prev);
      }
      m[i][k] = {};
    }
    prev = m[k][k];
  }
  return sign * 1.0 * m[n - 1][n - 1];
}

// Evaluation-interpolation on a circle: sample the numeric determinant at
// roots of unity and invert the DFT. Row scaling keeps LU values bounded.
Polynomial interpolated_det(const std::vector<std::vector<Polynomial>>& m) {
  const size_t n = m.size();
  int degree_bound = 0;
  double scale = 1.0;
  std::vector<std::vector<Polynomial>> rows = m;
  for (size_t i = 0; i < n; ++i) {
    int rd = 0;
    double rmax = 0.0;
    for (const auto& p : rows[i]) {
      rd = std::max(rd, std::max(0, p.degree()));
      rmax = std::max(rmax, p.max_abs_coeff());
    }
    if (rmax == 0.0) return {};  // zero row
    degree_bound += rd;
    for (auto& p : rows[i]) p *= 1.0 / rmax;
    scale *= rmax;
  }
  if (!std::isfinite(scale))
    throw std::runtime_error("poly_matrix_det: row scale overflow");

  const int samples = degree_bound + 1;
  std::vector<std::complex<double>> values(static_cast<size_t>(samples));
  Eigen::MatrixXcd num(n, n);
  for (int s = 0; s < samples; ++s) {
    const double phi = 2.0 * M_PI * s / samples;
    const std::complex<double> node(std::cos(phi), std::sin(phi));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) num(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eval_complex(rows[i][j], node);
    values[static_cast<size_t>(s)] = Eigen::PartialPivLU<Eigen::MatrixXcd>(num).determinant();
  }

  std::vector<double> coeffs(static_cast<size_t>(samples), 0.0);
  for (int t = 0; t < samples; ++t) {
    std::complex<double> acc = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double phi = -2.0 * M_PI * s * t / samples;
      acc += values[static_cast<size_t>(s)] * std::complex<double>(std::cos(phi), std::sin(phi));
    }
    coeffs[static_cast<size_t>(t)] = acc.real() / samples * scale;
  }
  return Polynomial(std::move(coeffs));
}

double numeric_det_at(const std::vector<std::vector<Polynomial>>& m, double x) {
  const size_t n = m.size();
  Eigen::MatrixXd num(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) num(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j](x);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(num).determinant();
}

}  // namespace

Polynomial poly_matrix_det(std::vector<std::vector<Polynomial>> m, int bareiss_limit) {
  const size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("poly_matrix_det: matrix not square");
  if (n == 0) return Polynomial::constant(1.0);
  if (n == 1) return m[0][0];

  double mscale = 0.0;
  for (const auto& row : m)
    for (const auto& p : row) mscale = std::max(mscale, p.max_abs_coeff());
  if (mscale == 0.0) return {};

  if (n <= static_cast<size_t>(bareiss_limit)) {
    Polynomial det = bareiss_det(m, 1e-14 * mscale);
    // Cross-check at a few sample points; fall back when division noise
    // has crept in.
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    bool ok = std::isfinite(det.max_abs_coeff());
    for (int t = 0; t < 3 && ok; ++t) {
      const double x = dist(rng);
      const double ref = numeric_det_at(m, x);
      const double got = det.is_zero() ? 0.0 : det(x);
      const double tol = 1e-9 * std::max({1e-300, std::abs(ref), det.max_abs_coeff()});
      if (!(std::abs(got - ref) <= tol)) ok = false;
    }
    if (ok) return det;
  }
  return interpolated_det(m);
}

BivariatePoly bipoly_matrix_det(const std::vector<std::vector<BivariatePoly>>& m) {
  const size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("bipoly_matrix_det: matrix not square");
  if (n == 0) return BivariatePoly::constant(1.0);
  if (n == 1) return m[0][0];
  // Laplace expansion along the first row; fine for the Hankel block sizes
  // arising here (k <= 5).
  BivariatePoly det;
  for (size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<BivariatePoly>> minor;
    minor.reserve(n - 1);
    for (size_t i = 1; i < n; ++i) {
      std::vector<BivariatePoly> row;
      row.reserve(n - 1);
      for (size_t t = 0; t < n; ++t)
        if (t != j) row.push_back(m[i][t]);
      minor.push_back(std::move(row));
    }
    BivariatePoly term = m[0][j] * bipoly_matrix_det(minor);
    if (j % 2 == 1) term = -term;
    det += term;
  }
  return det;
}

Polynomial sylvester_resultant(const BivariatePoly& p, const BivariatePoly& q) {
  const int mp = p.degree_b();
  const int mq = q.degree_b();
  if (mp <= 0 && mq <= 0)
    throw std::invalid_argument("sylvester_resultant: both inputs constant in eliminated variable");
  if (mp <= 0) {
    Polynomial base = p.is_zero() ? Polynomial{} : p.b_coeffs()[0];
    Polynomial acc = Polynomial::constant(1.0);
    for (int i = 0; i < mq; ++i) acc = acc * base;
    return acc;
  }
  if (mq <= 0) {
    Polynomial base = q.is_zero() ? Polynomial{} : q.b_coeffs()[0];
    Polynomial acc = Polynomial::constant(1.0);
    for (int i = 0; i < mp; ++i) acc = acc * base;
    return acc;
  }

  const int size = mp + mq;
  std::vector<std::vector<Polynomial>> s(static_cast<size_t>(size),
                                         std::vector<Polynomial>(static_cast<size_t>(size)));
  // mq rows of p coefficients (descending in b), then mp rows of q.
  for (int r = 0; r < mq; ++r)
    for (int i = 0; i <= mp; ++i) s[static_cast<size_t>(r)][static_cast<size_t>(r + i)] = p.b_coeffs()[static_cast<size_t>(mp - i)];
  for (int r = 0; r < mp; ++r)
    for (int i = 0; i <= mq; ++i) s[static_cast<size_t>(mq + r)][static_cast<size_t>(r + i)] = q.b_coeffs()[static_cast<size_t>(mq - i)];
  return poly_matrix_det(std::move(s));
}

double sylvester_det_at(const BivariatePoly& p, const BivariatePoly& q, double a) {
  const int mp = p.degree_b();
  const int mq = q.degree_b();
  if (mp <= 0 && mq <= 0)
    throw std::invalid_argument("sylvester_det_at: both inputs constant in eliminated variable");
  auto coeff_at = [a](const BivariatePoly& poly, int i) {
    return poly.b_coeffs()[static_cast<size_t>(i)](a);
  };
  if (mp <= 0) {
    const double base = p.is_zero() ? 0.0 : coeff_at(p, 0);
    double acc = 1.0;
    for (int i = 0; i < mq; ++i) acc *= base;
    return acc;
  }
  if (mq <= 0) {
    const double base = q.is_zero() ? 0.0 : coeff_at(q, 0);
    double acc = 1.0;
    for (int i = 0; i < mp; ++i) acc *= base;
    return acc;
  }
  const int size = mp + mq;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(size, size);
  for (int r = 0; r < mq; ++r)
    for (int i = 0; i <= mp; ++i) s(r, r + i) = coeff_at(p, mp - i);
  for (int r = 0; r < mp; ++r)
    for (int i = 0; i <= mq; ++i) s(mq + r, r + i) = coeff_at(q, mq - i);
  // Row equilibration keeps the value in range for sign scans.
  double log_scale = 0.0;
  for (int r = 0; r < size; ++r) {
    const double m = s.row(r).cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    s.row(r) /= m;
    log_scale += std::log(m);
  }
  const double det = Eigen::PartialPivLU<Eigen::MatrixXd>(s).determinant();
  if (det == 0.0) return 0.0;
  const double mag = log_scale + std::log(std::abs(det));
  return std::copysign(std::exp(std::min(mag, 700.0)), det);
}

BivariatePoly scale_var_a(const BivariatePoly& p, double r) {
  std::vector<Polynomial> out;
  out.reserve(p.b_coeffs().size());
  for (const Polynomial& c : p.b_coeffs()) {
    std::vector<double> scaled(c.coeffs().begin(), c.coeffs().end());
    double f = 1.0;
    for (size_t i = 0; i < scaled.size(); ++i) {
      scaled[i] *= f;
      f *= r;
    }
    out.push_back(Polynomial(std::move(scaled)));
  }
  return BivariatePoly(std::move(out));
}

std::vector<double> common_roots(const Polynomial& p, const Polynomial& q, Interval window,
                                 double tol, double merge_tol) {
  if (p.is_zero() && q.is_zero())
    throw std::invalid_argument("common_roots: both polynomials are zero");

  std::vector<double> cand;
  auto collect = [&](const Polynomial& poly) {
    if (poly.is_zero() || poly.degree() < 1) return;
    for (const RealRoot& r : real_roots(poly, window, 1e-8, merge_tol)) cand.push_back(r.x);
  };
  collect(p);
  collect(q);

  std::vector<double> out;
  for (double x0 : cand) {
    // Gauss-Newton on the residual pair (p, q).
    double x = x0;
    for (int it = 0; it < 40; ++it) {
      const double f1 = p.is_zero() ? 0.0 : p(x);
      const double f2 = q.is_zero() ? 0.0 : q(x);
      const double d1 = p.is_zero() ? 0.0 : p.derivative_at(x);
      const double d2 = q.is_zero() ? 0.0 : q.derivative_at(x);
      const double denom = d1 * d1 + d2 * d2;
      if (denom == 0.0 || !std::isfinite(denom)) break;
      const double step = (f1 * d1 + f2 * d2) / denom;
      x -= step;
      if (!std::isfinite(x) || std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    const bool ok_p = p.is_zero() || std::abs(p(x)) <= tol * p.residual_scale(x);
    const bool ok_q = q.is_zero() || std::abs(q(x)) <= tol * q.residual_scale(x);
    if (ok_p && ok_q && window.contains(x)) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  std::vector<double> dedup;
  for (double x : out) {
    if (dedup.empty() || x - dedup.back() >= merge_tol * std::max(1.0, std::abs(x)))
      dedup.push_back(x);
  }
  return dedup;
}

}  // namespace mtoc
