#include "momenttoc/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtoc {

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : coeffs_(coeffs) {
  trim();
}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

Polynomial Polynomial::constant(double v) { return Polynomial({v}); }

Polynomial Polynomial::variable() { return Polynomial({0.0, 1.0}); }

Polynomial Polynomial::monomial(int degree, double coeff) {
  std::vector<double> c(static_cast<size_t>(degree) + 1, 0.0);
  c.back() = coeff;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(std::span<const double> roots, double lead) {
  Polynomial p = constant(lead);
  for (double r : roots) p = p * Polynomial({-r, 1.0});
  return p;
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Polynomial::derivative_at(double x) const {
  double acc = 0.0;
  for (int i = degree(); i >= 1; --i) acc = acc * x + coeffs_[static_cast<size_t>(i)] * i;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
  return Polynomial(std::move(d));
}

double Polynomial::coeff(int i) const {
  if (i < 0 || i > degree()) return 0.0;
  return coeffs_[static_cast<size_t>(i)];
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double Polynomial::residual_scale(double x) const {
  double s = max_abs_coeff();
  double ax = std::max(1.0, std::abs(x));
  for (int i = 0; i < degree(); ++i) s *= ax;
  return std::max(s, 1e-300);
}

Polynomial Polynomial::trimmed_leading(double rel_tol) const {
  const double thr = rel_tol * max_abs_coeff();
  std::vector<double> c(coeffs_);
  while (!c.empty() && std::abs(c.back()) <= thr) c.pop_back();
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-() const {
  std::vector<double> c(coeffs_);
  for (double& v : c) v = -v;
  return Polynomial(std::move(c));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (double& v : coeffs_) v *= s;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& l, const Polynomial& r) {
  if (l.is_zero() || r.is_zero()) return {};
  std::vector<double> c(l.coeffs_.size() + r.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < l.coeffs_.size(); ++i)
    for (size_t j = 0; j < r.coeffs_.size(); ++j) c[i + j] += l.coeffs_[i] * r.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::exact_quotient(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw std::invalid_argument("polynomial division by zero");
  if (num.is_zero()) return {};
  const int dn = num.degree(), dd = den.degree();
  if (dn < dd) return {};
  std::vector<double> rem(num.coeffs_.begin(), num.coeffs_.end());
  std::vector<double> quot(static_cast<size_t>(dn - dd) + 1, 0.0);
  const double lead = den.coeffs_.back();
  for (int i = dn - dd; i >= 0; --i) {
    const double q = rem[static_cast<size_t>(i + dd)] / lead;
    quot[static_cast<size_t>(i)] = q;
    for (int j = 0; j <= dd; ++j) rem[static_cast<size_t>(i + j)] -= q * den.coeffs_[static_cast<size_t>(j)];
  }
  return Polynomial(std::move(quot));
}

bool Interval::contains(double x, double slack) const {
  const double s = slack * std::max(1.0, std::abs(x));
  if (lo && x < *lo - s) return false;
  if (hi && x > *hi + s) return false;
  return true;
}

namespace {

// Newton polish against p; returns the refined abscissa (best residual seen).
double polish_root(const Polynomial& p, double x0) {
  double x = x0;
  double best_x = x0;
  double best_res = std::abs(p(x0));
  for (int it = 0; it < 60; ++it) {
    const double f = p(x);
    const double df = p.derivative_at(x);
    if (df == 0.0 || !std::isfinite(df)) break;
    const double step = f / df;
    x -= step;
    if (!std::isfinite(x)) break;
    const double res = std::abs(p(x));
    if (res < best_res) {
      best_res = res;
      best_x = x;
    }
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return best_x;
}

// Parlett-Reinsch balancing (diagonal similarity with radix-2 scaling);
// the eigensolver does not balance on its own and the companion of a
// monic polynomial with spread-out coefficients needs it badly.
void balance_in_place(Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  constexpr double radix = 2.0, sq = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(m(j, i));
        r += std::abs(m(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0, g = r / radix;
      while (c < g) {
        f *= radix;
        c *= sq;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sq;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        m.row(i) *= 1.0 / f;
        m.col(i) *= f;
      }
    }
  }
}

std::vector<double> companion_roots_real(const Polynomial& p) {
  const int d = p.degree();
  const double lead = p.coeff(d);

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) companion(0, i) = -p.coeff(d - 1 - i) / lead;
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  balance_in_place(companion);

  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
  std::vector<double> out;
  out.reserve(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    const std::complex<double> lam = es.eigenvalues()(i);
    // Keep anything even loosely near the real axis; ill-conditioned real
    // roots surface as slightly complex pairs, and the polish + residual
    // gate downstream rejects genuine complex pairs.
    if (std::abs(lam.imag()) <= 0.1 * std::max(1.0, std::abs(lam))) out.push_back(lam.real());
  }
  return out;
}

}  // namespace

std::vector<RealRoot> real_roots(const Polynomial& p, Interval window, double tol_root,
                                 double merge_tol) {
  for (double c : p.coeffs())
    if (!std::isfinite(c)) throw std::invalid_argument("real_roots: non-finite coefficient");
  if (p.is_zero()) throw std::invalid_argument("real_roots: polynomial is identically zero");

  const Polynomial q = p.trimmed_leading(1e-13);
  if (q.degree() <= 0) return {};

  std::vector<double> cand;
  if (q.degree() == 1) {
    cand.push_back(-q.coeff(0) / q.coeff(1));
  } else {
    cand = companion_roots_real(q);
  }

  // Polish on the untrimmed polynomial and keep verified roots only.
  std::vector<double> polished;
  for (double x : cand) {
    const double r = polish_root(p, x);
    if (std::abs(p(r)) <= tol_root * p.residual_scale(r)) polished.push_back(r);
  }
  std::sort(polished.begin(), polished.end());

  std::vector<RealRoot> out;
  for (size_t i = 0; i < polished.size();) {
    size_t j = i + 1;
    while (j < polished.size() &&
           polished[j] - polished[j - 1] < merge_tol * std::max(1.0, std::abs(polished[j])))
      ++j;
    RealRoot r;
    r.multiplicity = static_cast<int>(j - i);
    r.merged = r.multiplicity > 1;
    // Cluster representative: member with the smallest residual.
    r.x = polished[i];
    double best = std::abs(p(r.x));
    for (size_t t = i + 1; t < j; ++t) {
      const double res = std::abs(p(polished[t]));
      if (res < best) {
        best = res;
        r.x = polished[t];
      }
    }
    if (window.contains(r.x)) out.push_back(r);
    i = j;
  }
  return out;
}

}  // namespace mtoc
