#include "momenttoc/hankel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtoc {

double MomentSequence::max_abs() const {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

MomentSequence shift_sequence(const MomentSequence& c, ShiftKind kind, double a, double b) {
  const int n = c.size();
  switch (kind) {
    case ShiftKind::plain:
      return c;
    case ShiftKind::a_shift: {
      if (n < 2) throw std::invalid_argument("shift_sequence: sequence too short for a-shift");
      MomentSequence out;
      out.c.resize(static_cast<size_t>(n - 1));
      for (int j = 1; j <= n - 1; ++j) out.at1(j) = c.at1(j + 1) - a * c.at1(j);
      return out;
    }
    case ShiftKind::b_shift: {
      if (n < 2) throw std::invalid_argument("shift_sequence: sequence too short for b-shift");
      MomentSequence out;
      out.c.resize(static_cast<size_t>(n - 1));
      for (int j = 1; j <= n - 1; ++j) out.at1(j) = -c.at1(j + 1) + b * c.at1(j);
      return out;
    }
    case ShiftKind::ab_shift: {
      if (n < 3) throw std::invalid_argument("shift_sequence: sequence too short for ab-shift");
      MomentSequence out;
      out.c.resize(static_cast<size_t>(n - 2));
      for (int j = 1; j <= n - 2; ++j)
        out.at1(j) = -c.at1(j + 2) + (a + b) * c.at1(j + 1) - a * b * c.at1(j);
      return out;
    }
  }
  throw std::logic_error("shift_sequence: unknown kind");
}

namespace {

void check_extent(const MomentSequence& c, int k, int d) {
  if (k < 0 || d < 0) throw std::invalid_argument("hankel: negative block size or offset");
  if (k > 0 && 2 * k - 1 + d > c.size())
    throw std::invalid_argument("hankel: block indices exceed sequence length");
}

// Fraction-free (Bareiss) determinant without pivoting; falls back to LU on
// a vanishing pivot. Keeps intermediate growth in check for the severely
// scaled sequences this solver produces.
bool bareiss_det(Eigen::MatrixXd m, double& out) {
  const Eigen::Index n = m.rows();
  double prev = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0.0) return false;
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  out = m(n - 1, n - 1);
  return std::isfinite(out);
}

Eigen::MatrixXd hankel_block(const MomentSequence& c, int k, int d) {
  Eigen::MatrixXd m(k, k);
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) m(i - 1, j - 1) = c.at1(i + j - 1 + d);
  return m;
}

double det_of(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 1.0;
  if (m.rows() == 1) return m(0, 0);
  if (m.rows() <= 8) {
    double det = 0.0;
    if (bareiss_det(m, det)) return det;
  }
  return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
}

}  // namespace

double hankel_det(const MomentSequence& c, int k, int d) {
  check_extent(c, k, d);
  if (k == 0) return 1.0;
  return det_of(hankel_block(c, k, d));
}

std::vector<double> hankel_leading_minors(const MomentSequence& c, int k, int d) {
  check_extent(c, k, d);
  std::vector<double> minors;
  minors.reserve(static_cast<size_t>(k));
  const Eigen::MatrixXd full = k > 0 ? hankel_block(c, k, d) : Eigen::MatrixXd();
  for (int i = 1; i <= k; ++i) minors.push_back(det_of(full.topLeftCorner(i, i)));
  return minors;
}

bool is_positive_definite(const MomentSequence& c, int k, int d, double tol) {
  if (k == 0) return true;
  check_extent(c, k, d);
  double log_gm = 0.0;
  bool zero_diag = false;
  for (int i = 1; i <= k; ++i) {
    const double v = std::abs(c.at1(2 * i - 1 + d));
    if (v == 0.0) {
      zero_diag = true;
      break;
    }
    log_gm += std::log(v);
  }
  // Flat margin tol * geometric mean of the diagonal magnitudes; minors of
  // higher order shrink fast near degeneracy, so per-order scaling would
  // reject genuinely definite blocks.
  const double threshold = tol * (zero_diag ? 0.0 : std::exp(log_gm / k));
  for (double minor : hankel_leading_minors(c, k, d))
    if (!(minor > threshold)) return false;
  return true;
}

double hankel_singularity_residual(const MomentSequence& c, int k, int d) {
  check_extent(c, k, d);
  if (k == 0) return 0.0;
  double scale = 1.0;
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) scale = std::max(scale, std::abs(c.at1(i + j - 1 + d)));
  double norm = 1.0;
  for (int i = 0; i < k; ++i) norm *= scale;
  return std::abs(hankel_det(c, k, d)) / norm;
}

}  // namespace mtoc
