#include "momenttoc/hausdorff.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtoc {

char lemma_type_name(LemmaType t) {
  switch (t) {
    case LemmaType::A: return 'A';
    case LemmaType::B: return 'B';
    case LemmaType::C: return 'C';
    case LemmaType::D: return 'D';
  }
  return '?';
}

LemmaTraits lemma_traits(LemmaType t, int k, int n) {
  LemmaTraits tr{};
  switch (t) {
    case LemmaType::A:
      if (2 * k - 1 > n) throw std::invalid_argument("lemma_traits: need 2k-1 <= n for type A");
      tr = {ShiftKind::plain, ShiftKind::ab_shift, k - 1, n + 1 - 2 * k, false, false, k - 1};
      break;
    case LemmaType::B:
      if (2 * k + 1 > n) throw std::invalid_argument("lemma_traits: need 2k+1 <= n for type B");
      tr = {ShiftKind::ab_shift, ShiftKind::plain, k + 1, n - 1 - 2 * k, true, true, k + 1};
      break;
    case LemmaType::C:
      if (2 * k > n) throw std::invalid_argument("lemma_traits: need 2k <= n for type C");
      tr = {ShiftKind::b_shift, ShiftKind::a_shift, k, n - 2 * k, true, false, k};
      break;
    case LemmaType::D:
      if (2 * k > n) throw std::invalid_argument("lemma_traits: need 2k <= n for type D");
      tr = {ShiftKind::a_shift, ShiftKind::b_shift, k, n - 2 * k, false, true, k};
      break;
  }
  return tr;
}

ConditionReport check_conditions(const MomentSequence& c, LemmaType type, int k, double a,
                                 double b, double tol_pd, double tol_sing) {
  (void)tol_sing;
  const int n = c.size();
  if (n < 4) throw std::invalid_argument("check_conditions: need at least four moments");
  if (k < 1) throw std::invalid_argument("check_conditions: k must be >= 1");
  const LemmaTraits tr = lemma_traits(type, k, n);

  const MomentSequence driving = shift_sequence(c, tr.driving, a, b);
  const MomentSequence comp = shift_sequence(c, tr.cond3, a, b);

  ConditionReport rep;
  for (int d = 0; d <= tr.d_max; ++d)
    rep.singular_residuals.push_back(hankel_singularity_residual(driving, k, d));

  rep.pd[0] = is_positive_definite(driving, k - 1, 0, tol_pd);
  rep.pd[1] = is_positive_definite(driving, k - 1, 2, tol_pd);
  rep.pd[2] = is_positive_definite(comp, tr.cond3_size, 0, tol_pd);
  rep.minors[0] = hankel_leading_minors(driving, k - 1, 0);
  rep.minors[1] = hankel_leading_minors(driving, k - 1, 2);
  rep.minors[2] = hankel_leading_minors(comp, tr.cond3_size, 0);
  rep.passed = rep.pd[0] && rep.pd[1] && rep.pd[2];
  return rep;
}

std::vector<RealRoot> recover_nodes(const MomentSequence& c, LemmaType type, int k, double a,
                                    double b, double tol_root, double merge_tol) {
  if (k < 1) throw std::invalid_argument("recover_nodes: k must be >= 1");
  if (k == 1) return {};
  const LemmaTraits tr = lemma_traits(type, k, c.size());
  const MomentSequence s = shift_sequence(c, tr.driving, a, b);
  if (2 * k - 2 > s.size())
    throw std::invalid_argument("recover_nodes: sequence too short for node polynomial");

  // Bordered determinant expanded along its z row: coefficient of z^{j-1}
  // is the signed minor dropping column j of the (k-1) x k Hankel block.
  const int rows = k - 1;
  Eigen::MatrixXd top(rows, k);
  double scale = 0.0;
  for (int i = 1; i <= rows; ++i)
    for (int j = 1; j <= k; ++j) {
      top(i - 1, j - 1) = s.at1(i + j - 1);
      scale = std::max(scale, std::abs(top(i - 1, j - 1)));
    }

  std::vector<double> coeffs(static_cast<size_t>(k), 0.0);
  for (int j = 1; j <= k; ++j) {
    Eigen::MatrixXd minor(rows, rows);
    for (int i = 0; i < rows; ++i) {
      int col = 0;
      for (int t = 0; t < k; ++t) {
        if (t == j - 1) continue;
        minor(i, col++) = top(i, t);
      }
    }
    double det = rows == 0 ? 1.0 : Eigen::PartialPivLU<Eigen::MatrixXd>(minor).determinant();
    if ((k + j) % 2 == 1) det = -det;
    coeffs[static_cast<size_t>(j - 1)] = det;
  }

  Polynomial node_poly((std::vector<double>(coeffs)));
  double lead_scale = 1.0;
  for (int i = 0; i < k - 1; ++i) lead_scale *= std::max(1.0, scale);
  if (node_poly.degree() < k - 1 ||
      std::abs(node_poly.coeff(k - 1)) <= 1e-12 * std::max(lead_scale, node_poly.max_abs_coeff()))
    throw std::runtime_error("recover_nodes: degenerate node polynomial");

  std::vector<RealRoot> roots = real_roots(node_poly, {}, tol_root, merge_tol);
  std::reverse(roots.begin(), roots.end());
  return roots;
}

std::vector<double> recover_weights(const MomentSequence& c, LemmaType type,
                                    std::span<const double> interior_nodes_desc, double a,
                                    double b, double consistency_tol) {
  const int n = c.size();
  const int k = static_cast<int>(interior_nodes_desc.size()) + 1;
  const LemmaTraits tr = lemma_traits(type, k, n);

  std::vector<double> nodes;
  if (tr.mass_at_b) nodes.push_back(b);
  nodes.insert(nodes.end(), interior_nodes_desc.begin(), interior_nodes_desc.end());
  if (tr.mass_at_a) nodes.push_back(a);
  const int p = static_cast<int>(nodes.size());
  if (p != tr.mass_count) throw std::logic_error("recover_weights: node count mismatch");
  if (p > n) throw std::invalid_argument("recover_weights: more masses than moments");

  Eigen::MatrixXd vand(p, p);
  Eigen::VectorXd rhs(p);
  for (int j = 0; j < p; ++j) {
    rhs(j) = c.at1(j + 1);
    for (int s = 0; s < p; ++s)
      vand(j, s) = std::pow(nodes[static_cast<size_t>(s)], j);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(vand);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw std::runtime_error("recover_weights: singular weight system");
  Eigen::VectorXd sigma = lu.solve(rhs);

  const double tol = consistency_tol * std::max(1.0, c.max_abs());
  for (int j = p + 1; j <= n; ++j) {
    double acc = 0.0;
    for (int s = 0; s < p; ++s)
      acc += sigma(s) * std::pow(nodes[static_cast<size_t>(s)], j - 1);
    if (std::abs(acc - c.at1(j)) > tol)
      throw std::runtime_error("recover_weights: inconsistent moments");
  }
  return std::vector<double>(sigma.data(), sigma.data() + p);
}

namespace {

bool nonneg_definite(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

Eigen::MatrixXd hankel_of(const MomentSequence& s, int k, int d) {
  Eigen::MatrixXd m(k, k);
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) m(i - 1, j - 1) = s.at1(i + j - 1 + d);
  return m;
}

}  // namespace

bool general_solvability(const MomentSequence& c, double a, double b, double tol) {
  const int n = c.size();
  if (n < 2) throw std::invalid_argument("general_solvability: need at least two moments");
  if (n % 2 == 1) {
    const int m = (n - 1) / 2;
    const MomentSequence ab = shift_sequence(c, ShiftKind::ab_shift, a, b);
    return nonneg_definite(hankel_of(c, m + 1, 0), tol) &&
           nonneg_definite(hankel_of(ab, m, 0), tol);
  }
  const int m = n / 2;
  const MomentSequence ca = shift_sequence(c, ShiftKind::a_shift, a, b);
  const MomentSequence cb = shift_sequence(c, ShiftKind::b_shift, a, b);
  return nonneg_definite(hankel_of(ca, m, 0), tol) && nonneg_definite(hankel_of(cb, m, 0), tol);
}

MomentSequence moments_of(const StepFunction& s, int n) {
  MomentSequence out;
  out.c.assign(static_cast<size_t>(n), 0.0);
  for (size_t i = 0; i < s.nodes.size(); ++i) {
    double zp = 1.0;
    for (int j = 1; j <= n; ++j) {
      out.at1(j) += s.weights[i] * zp;
      zp *= s.nodes[i];
    }
  }
  return out;
}

int step_index(const StepFunction& s) {
  int idx = 0;
  for (double z : s.nodes) {
    const double tol = 1e-12 * std::max({1.0, std::abs(s.a), std::abs(s.b)});
    const bool endpoint = std::abs(z - s.a) <= tol || std::abs(z - s.b) <= tol;
    idx += endpoint ? 1 : 2;
  }
  return idx;
}

}  // namespace mtoc
