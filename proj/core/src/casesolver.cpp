#include "momenttoc/casesolver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mtoc {

namespace {

// Driving shifted sequence entries s_j (j >= 2) as bivariate polynomials;
// j >= 2 never touches c_1, so these are theta-free.
std::vector<BivariatePoly> driving_tail(const MomentPolynomials& mp, const CaseDescriptor& cse,
                                        double x1, int jmax) {
  const BivariatePoly A =
      cse.a_fixed ? BivariatePoly::constant(0.0) : BivariatePoly::var_a();
  const BivariatePoly B =
      cse.b_fixed ? BivariatePoly::constant(x1) : BivariatePoly::var_b();
  const LemmaTraits tr = lemma_traits(cse.type, cse.k, mp.n());

  std::vector<BivariatePoly> s(static_cast<size_t>(jmax + 1));  // index j
  for (int j = 2; j <= jmax; ++j) {
    switch (tr.driving) {
      case ShiftKind::plain:
        s[static_cast<size_t>(j)] = mp.c_of(j);
        break;
      case ShiftKind::a_shift:
        s[static_cast<size_t>(j)] = mp.c_of(j + 1) - A * mp.c_of(j);
        break;
      case ShiftKind::b_shift:
        s[static_cast<size_t>(j)] = -mp.c_of(j + 1) + B * mp.c_of(j);
        break;
      case ShiftKind::ab_shift:
        s[static_cast<size_t>(j)] =
            -mp.c_of(j + 2) + (A + B) * mp.c_of(j + 1) - A * B * mp.c_of(j);
        break;
    }
  }
  return s;
}

std::pair<double, double> polish_pair(const BivariatePoly& p, const BivariatePoly& q, double a,
                                      double b) {
  const BivariatePoly pa = p.deriv_a(), pb = p.deriv_b();
  const BivariatePoly qa = q.deriv_a(), qb = q.deriv_b();
  double x = a, y = b;
  double bx = x, by = y;
  double best = std::abs(p.eval(x, y)) + std::abs(q.eval(x, y));
  for (int it = 0; it < 40; ++it) {
    const double f1 = p.eval(x, y), f2 = q.eval(x, y);
    const double j00 = pa.eval(x, y), j01 = pb.eval(x, y);
    const double j10 = qa.eval(x, y), j11 = qb.eval(x, y);
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double dx = (f1 * j11 - f2 * j01) / det;
    const double dy = (j00 * f2 - j10 * f1) / det;
    x -= dx;
    y -= dy;
    if (!std::isfinite(x) || !std::isfinite(y)) break;
    const double res = std::abs(p.eval(x, y)) + std::abs(q.eval(x, y));
    if (res < best) {
      best = res;
      bx = x;
      by = y;
    }
    const double step = std::abs(dx) + std::abs(dy);
    if (step <= 1e-16 * std::max({1.0, std::abs(x), std::abs(y)})) break;
  }
  return {bx, by};
}

double theta_gamma(LemmaType t, double a, double b) {
  switch (t) {
    case LemmaType::A: return 1.0;
    case LemmaType::B: return -a * b;
    case LemmaType::C: return b;
    case LemmaType::D: return -a;
  }
  return 0.0;
}

std::string condition_failure_reason(const ConditionReport& rep, LemmaType type) {
  const char t = lemma_type_name(type);
  std::ostringstream os;
  if (!rep.pd[0] || !rep.pd[1])
    os << "condition (" << t << "2) not satisfied";
  else
    os << "condition (" << t << "3) not satisfied";
  return os.str();
}

// Full candidate pipeline evaluated without accept/reject gates: the
// endpoint residual of the synthesized control as a function of (a, b).
std::optional<std::vector<double>> steering_residual(const InitialState& x0,
                                                     const CaseDescriptor& cse, double a,
                                                     double b, const Config& cfg) {
  a = std::min(a, 0.0);
  b = std::max(b, x0.x1());
  const auto theta = solve_theta(x0, cse, a, b, cfg);
  if (!theta || !(*theta > 0.0)) return std::nullopt;
  const MomentSequence c = assemble_moments(x0, a, b, *theta);

  std::vector<RealRoot> roots;
  try {
    roots = recover_nodes(c, cse.type, cse.k, a, b, cfg.tol_root, cfg.root_merge_tol);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (static_cast<int>(roots.size()) != cse.k - 1) return std::nullopt;
  std::vector<double> nodes;
  for (const RealRoot& r : roots) nodes.push_back(r.x);

  std::vector<double> weights;
  try {
    weights = recover_weights(c, cse.type, nodes, a, b, 1e12);  // no consistency gate here
  } catch (const std::exception&) {
    return std::nullopt;
  }

  const LemmaTraits tr = lemma_traits(cse.type, cse.k, x0.n());
  SynthesisSpec spec;
  spec.x1_0 = x0.x1();
  spec.a = a;
  spec.b = b;
  spec.interior_nodes = nodes;
  spec.interior_weights.assign(weights.begin() + (tr.mass_at_b ? 1 : 0),
                               weights.end() - (tr.mass_at_a ? 1 : 0));
  spec.weight_at_b = tr.mass_at_b ? weights.front() : 0.0;
  spec.weight_at_a = tr.mass_at_a ? weights.back() : 0.0;
  try {
    return simulate_exact(x0.x0, synthesize_control(spec));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// Gauss-Newton over the case's free endpoint variables against the exact
// steering residual. The determinant systems are badly conditioned for
// larger n and leave polynomial-space roots short of simulation accuracy;
// this drives the pair onto the true candidate whenever one is nearby.
std::pair<double, double> refine_pair_by_steering(const InitialState& x0,
                                                  const CaseDescriptor& cse, double a, double b,
                                                  const Config& cfg) {
  const bool free_a = !cse.a_fixed;
  const bool free_b = !cse.b_fixed;
  const int dims = (free_a ? 1 : 0) + (free_b ? 1 : 0);
  if (dims == 0) return {a, b};

  auto resid_of = [&](double aa, double bb) -> std::optional<Eigen::VectorXd> {
    const auto r = steering_residual(x0, cse, aa, bb, cfg);
    if (!r) return std::nullopt;
    Eigen::VectorXd v(static_cast<Eigen::Index>(r->size()));
    for (size_t i = 0; i < r->size(); ++i) v(static_cast<Eigen::Index>(i)) = (*r)[i];
    return v;
  };

  auto f0 = resid_of(a, b);
  if (!f0) return {a, b};
  double best_a = a, best_b = b;
  double best = f0->cwiseAbs().maxCoeff();

  for (int it = 0; it < 25; ++it) {
    Eigen::MatrixXd jac(f0->size(), dims);
    int col = 0;
    bool ok = true;
    for (int d = 0; d < 2; ++d) {
      if ((d == 0 && !free_a) || (d == 1 && !free_b)) continue;
      const double base = d == 0 ? a : b;
      const double h = 1e-6 * std::max(1.0, std::abs(base));
      auto fp = resid_of(d == 0 ? a + h : a, d == 1 ? b + h : b);
      if (fp) {
        jac.col(col++) = (*fp - *f0) / h;
      } else {
        auto fm = resid_of(d == 0 ? a - h : a, d == 1 ? b - h : b);
        if (!fm) {
          ok = false;
          break;
        }
        jac.col(col++) = (*f0 - *fm) / h;
      }
    }
    if (!ok) break;

    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-*f0);
    if (!step.allFinite()) break;

    double lambda = 1.0;
    bool improved = false;
    for (int bt = 0; bt < 8; ++bt, lambda *= 0.5) {
      double an = a, bn = b;
      int idx = 0;
      if (free_a) an = std::min(0.0, a + lambda * step(idx++));
      if (free_b) bn = std::max(x0.x1(), b + lambda * step(idx++));
      auto fn = resid_of(an, bn);
      if (!fn) continue;
      const double rn = fn->cwiseAbs().maxCoeff();
      if (rn < best) {
        a = an;
        b = bn;
        f0 = fn;
        best = rn;
        best_a = an;
        best_b = bn;
        improved = true;
        break;
      }
    }
    if (!improved || best <= 1e-13 * (1.0 + x0.inf_norm())) break;
  }
  return {best_a, best_b};
}

}  // namespace

std::vector<BivariatePoly> endpoint_equations(const InitialState& x0,
                                              const CaseDescriptor& cse) {
  const MomentPolynomials mp = case_polynomials(x0, cse);
  const int k = cse.k;
  std::vector<BivariatePoly> eqs;
  if (cse.d_max < 1) return eqs;

  const int jmax = 2 * k - 1 + cse.d_max;
  const std::vector<BivariatePoly> s = driving_tail(mp, cse, x0.x1(), jmax);
  for (int d = 1; d <= cse.d_max; ++d) {
    std::vector<std::vector<BivariatePoly>> block(
        static_cast<size_t>(k), std::vector<BivariatePoly>(static_cast<size_t>(k)));
    for (int i = 1; i <= k; ++i)
      for (int j = 1; j <= k; ++j)
        block[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] =
            s[static_cast<size_t>(i + j - 1 + d)];
    eqs.push_back(bipoly_matrix_det(block));
  }
  return eqs;
}

std::vector<std::pair<double, double>> solve_endpoints(const InitialState& x0,
                                                       const CaseDescriptor& cse,
                                                       const Config& cfg,
                                                       std::string* degenerate_note) {
  const double x1 = x0.x1();
  const double slack = cfg.endpoint_slack;
  std::vector<std::pair<double, double>> pairs;

  if (cse.a_fixed && cse.b_fixed) {
    pairs.emplace_back(0.0, x1);
    return pairs;
  }

  const std::vector<BivariatePoly> eqs = endpoint_equations(x0, cse);

  auto snap_a = [&](double a) { return a > -slack ? 0.0 : a; };
  auto snap_b = [&](double b) { return std::abs(b - x1) <= slack ? x1 : b; };

  if (cse.d_max == 1) {
    if (cse.a_fixed) {
      // Free variable is b; admissible roots lie at b >= x1.
      const Polynomial pb = eqs[0].as_poly_in_b();
      if (pb.is_zero() || pb.degree() < 1) {
        if (degenerate_note && pb.is_zero())
          *degenerate_note = "endpoint equation vanishes identically";
        return pairs;
      }
      for (const RealRoot& r : real_roots(pb, {x1 - slack, {}}, cfg.tol_root, cfg.root_merge_tol)) {
        const double b = snap_b(r.x);
        if (b >= x1) pairs.emplace_back(0.0, b);
      }
    } else {
      // Free variable is a; admissible roots lie at a <= 0.
      const Polynomial pa = eqs[0].as_poly_in_a();
      if (pa.is_zero() || pa.degree() < 1) {
        if (degenerate_note && pa.is_zero())
          *degenerate_note = "endpoint equation vanishes identically";
        return pairs;
      }
      for (const RealRoot& r : real_roots(pa, {{}, slack}, cfg.tol_root, cfg.root_merge_tol)) {
        const double a = snap_a(r.x);
        if (a <= 0.0) pairs.emplace_back(a, x1);
      }
    }
    return pairs;
  }

  // Two unknowns: eliminate b by the resultant, back-substitute, polish.
  const BivariatePoly& p = eqs[0];
  const BivariatePoly& q = eqs[1];

  // Candidate values of a on the negative axis. Resultant roots are
  // computed at several variable scales (interpolation noise in the
  // high-degree coefficients is only benign near the sampling circle),
  // and a sign scan of the numeric Sylvester determinant backs them up.
  // Every candidate is verified downstream, so recall matters here, not
  // precision.
  std::vector<double> acands;
  bool degenerate = false;
  for (double r : {0.25, 1.0, 4.0, 16.0}) {
    Polynomial res;
    try {
      res = sylvester_resultant(scale_var_a(p, r), scale_var_a(q, r));
    } catch (const std::invalid_argument&) {
      if (degenerate_note) *degenerate_note = "endpoint system constant in b";
      return pairs;
    } catch (const std::runtime_error&) {
      continue;  // determinant overflows at this variable scale
    }
    const Polynomial rt = res.trimmed_leading(1e-12);
    if (r == 1.0 && rt.is_zero()) degenerate = true;
    if (rt.degree() < 1) continue;
    for (const RealRoot& w : real_roots(rt, {{}, slack / r}, 1e-6, cfg.root_merge_tol))
      acands.push_back(w.x * r);
  }
  {
    auto det_at = [&](double a) { return sylvester_det_at(p, q, a); };
    auto bisect = [&](double l, double r, double fl) {
      for (int it = 0; it < 80 && fl != 0.0; ++it) {
        const double mid = 0.5 * (l + r);
        const double fm = det_at(mid);
        if ((fm < 0.0) == (fl < 0.0)) {
          l = mid;
          fl = fm;
        } else {
          r = mid;
        }
      }
      return 0.5 * (l + r);
    };
    // Linear sub-scan of [l, r]: bisected sign changes plus the minimum of
    // |det| (a cluster of nearby roots may not change the sign at all).
    auto scan_segment = [&](double l, double r, int steps) {
      double prev_a = l, prev_v = det_at(l);
      double min_a = l, min_v = std::abs(prev_v);
      for (int i = 1; i <= steps; ++i) {
        const double a = l + (r - l) * i / steps;
        const double v = det_at(a);
        if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0) || v == 0.0)
          acands.push_back(bisect(prev_a, a, prev_v));
        if (std::abs(v) < min_v) {
          min_v = std::abs(v);
          min_a = a;
        }
        prev_a = a;
        prev_v = v;
      }
      acands.push_back(min_a);
    };

    const int per_decade = 240;
    const double lo = 1e-3, hi = 64.0;
    const int steps = static_cast<int>(per_decade * std::log10(hi / lo));
    std::vector<double> grid(static_cast<size_t>(steps) + 1);
    std::vector<double> vals(static_cast<size_t>(steps) + 1);
    bool any_nonzero = false;
    for (int i = 0; i <= steps; ++i) {
      grid[static_cast<size_t>(i)] = -lo * std::pow(hi / lo, static_cast<double>(i) / steps);
      vals[static_cast<size_t>(i)] = det_at(grid[static_cast<size_t>(i)]);
      any_nonzero = any_nonzero || vals[static_cast<size_t>(i)] != 0.0;
    }
    if (!any_nonzero) degenerate = true;

    // Interesting cells: a sign change, or a dip of |det| against the
    // surrounding window (root clusters tighter than the grid). Each gets
    // a fine sub-scan; one cell can hide several roots.
    std::vector<bool> interesting(static_cast<size_t>(steps) + 1, false);
    for (int i = 1; i <= steps && any_nonzero; ++i) {
      const double pv = vals[static_cast<size_t>(i - 1)], v = vals[static_cast<size_t>(i)];
      if ((pv < 0.0 && v > 0.0) || (pv > 0.0 && v < 0.0) || v == 0.0)
        interesting[static_cast<size_t>(i)] = true;
    }
    const int w = 8;
    for (int i = 0; i <= steps && any_nonzero; ++i) {
      const double mi = std::abs(vals[static_cast<size_t>(i)]);
      bool local_min = true;
      double peak = 0.0;
      for (int t = std::max(0, i - w); t <= std::min(steps, i + w); ++t) {
        peak = std::max(peak, std::abs(vals[static_cast<size_t>(t)]));
        if (std::abs(t - i) <= 2 && t < i && std::abs(vals[static_cast<size_t>(t)]) < mi)
          local_min = false;
        if (std::abs(t - i) <= 2 && t > i && std::abs(vals[static_cast<size_t>(t)]) < mi)
          local_min = false;
      }
      if (local_min && mi <= 1e-6 * peak) interesting[static_cast<size_t>(i)] = true;
    }
    int marked = 0;
    for (int i = 0; i <= steps; ++i) marked += interesting[static_cast<size_t>(i)] ? 1 : 0;
    // A determinant that is numerically zero across much of the axis marks
    // everything; its sign pattern is noise, so leave the work to the
    // multistart path instead of chasing thousands of pseudo-roots.
    const bool scan_usable = marked <= steps / 8;
    for (int i = 0; i <= steps && any_nonzero && scan_usable; ++i) {
      if (!interesting[static_cast<size_t>(i)]) continue;
      const int lo_i = std::min(steps, i + 2), hi_i = std::max(0, i - 2);
      scan_segment(grid[static_cast<size_t>(lo_i)], grid[static_cast<size_t>(hi_i)], 96);
    }
  }
  if (degenerate) {
    if (degenerate_note) *degenerate_note = "resultant vanishes identically";
    return pairs;
  }
  std::sort(acands.begin(), acands.end());
  std::vector<double> auniq;
  for (double a : acands)
    if (auniq.empty() || a - auniq.back() > 1e-9 * std::max(1.0, std::abs(a))) auniq.push_back(a);

  // Root certificate: the residual must be negligible against the local
  // variation of each polynomial, not against a global coefficient bound.
  // The Sylvester determinants turn numerically singular on whole regions
  // for larger n, and globally scaled gates wave entire pseudo-solution
  // curves through.
  auto pair_residual_ok = [&](double av, double bv) {
    const double h = 1e-3 * std::max({1.0, std::abs(av), std::abs(bv)});
    auto local_scale = [&](const BivariatePoly& f) {
      double s = 0.0;
      s = std::max(s, std::abs(f.eval(av + h, bv)));
      s = std::max(s, std::abs(f.eval(av - h, bv)));
      s = std::max(s, std::abs(f.eval(av, bv + h)));
      s = std::max(s, std::abs(f.eval(av, bv - h)));
      return std::max(s, 1e-300);
    };
    return std::abs(p.eval(av, bv)) <= 1e-7 * local_scale(p) &&
           std::abs(q.eval(av, bv)) <= 1e-7 * local_scale(q);
  };

  // Direct two-dimensional Newton multistart. Cheap, and immune to the
  // conditioning of the eliminated system; the resultant route above
  // remains the primary source for the small dimensions.
  {
    std::vector<double> mags;
    for (int i = 0; i < 20; ++i) mags.push_back(1e-2 * std::pow(64.0 / 1e-2, i / 19.0));
    for (double am : mags) {
      for (double bo : mags) {
        auto [av, bv] = polish_pair(p, q, -am, x1 + bo);
        if (!(av <= slack) || !(bv >= x1 - slack)) continue;
        if (!pair_residual_ok(av, bv)) continue;
        const double a = snap_a(av);
        const double b = snap_b(bv);
        if (a <= 0.0 && b >= x1) pairs.emplace_back(a, b);
      }
    }
  }

  for (double a0 : auniq) {
    const Polynomial pb = p.substitute_a(a0);
    const Polynomial qb = q.substitute_a(a0);
    // Seeds for b: the gated common roots (precise when a0 already sits on
    // the root), widened by each equation's own roots, since a scan
    // candidate may land a few grid steps off and leave one residual
    // finite. The joint polish plus the strict pair gate decide.
    std::vector<double> bs;
    try {
      bs = common_roots(pb, qb, {x1 - slack, {}}, 1e-4, cfg.root_merge_tol);
    } catch (const std::invalid_argument&) {
      continue;  // both equations collapsed at this a
    }
    for (const Polynomial* f : {&pb, &qb}) {
      if (f->is_zero() || f->degree() < 1) continue;
      for (const RealRoot& r : real_roots(*f, {x1 - slack, {}}, 1e-2, cfg.root_merge_tol))
        bs.push_back(r.x);
    }
    std::sort(bs.begin(), bs.end());
    bs.erase(std::unique(bs.begin(), bs.end(),
                         [](double l, double r) {
                           return r - l <= 1e-9 * std::max(1.0, std::abs(r));
                         }),
             bs.end());
    for (double b0 : bs) {
      auto [av, bv] = polish_pair(p, q, a0, b0);
      if (!(av <= slack) || !(bv >= x1 - slack)) continue;
      if (!pair_residual_ok(av, bv)) continue;
      const double a = snap_a(av);
      const double b = snap_b(bv);
      if (a <= 0.0 && b >= x1) pairs.emplace_back(a, b);
    }
  }

  // Deduplicate pairs found through different resultant roots.
  std::sort(pairs.begin(), pairs.end());
  std::vector<std::pair<double, double>> dedup;
  for (const auto& pr : pairs) {
    bool close = false;
    for (const auto& kept : dedup) {
      if (std::abs(pr.first - kept.first) <= cfg.dedup_tol * std::max(1.0, std::abs(pr.first)) &&
          std::abs(pr.second - kept.second) <= cfg.dedup_tol * std::max(1.0, std::abs(pr.second)))
        close = true;
    }
    if (!close) dedup.push_back(pr);
  }
  return dedup;
}

std::optional<double> solve_theta(const InitialState& x0, const CaseDescriptor& cse, double a,
                                  double b, const Config& cfg) {
  (void)cfg;
  const LemmaTraits tr = lemma_traits(cse.type, cse.k, x0.n());
  MomentSequence c0 = assemble_moments(x0, a, b, 0.0);
  c0.at1(1) = 0.0;
  const MomentSequence s0 = shift_sequence(c0, tr.driving, a, b);

  const double det0 = hankel_det(s0, cse.k, 0);
  const double cof = hankel_det(s0, cse.k - 1, 2);
  const double gamma = theta_gamma(cse.type, a, b);
  const double coef = gamma * cof;
  if (coef == 0.0) return std::nullopt;

  const double c1 = -det0 / coef;
  // A vanishing cofactor shows up as a wildly scaled c1; the bound keeps
  // borderline-but-genuine candidates alive for the later gates.
  if (!std::isfinite(c1) || std::abs(c1) > 1e12 * (1.0 + s0.max_abs())) return std::nullopt;
  return c1 - (x0.x1() - 2.0 * b + 2.0 * a);
}

CandidateSolution evaluate_candidate(const InitialState& x0, const CaseDescriptor& cse,
                                     double a, double b, const Config& cfg) {
  CandidateSolution cand;
  cand.cse = cse;
  cand.a = std::min(a, 0.0);
  cand.b = std::max(b, x0.x1());
  const LemmaTraits tr = lemma_traits(cse.type, cse.k, x0.n());

  const auto theta = solve_theta(x0, cse, cand.a, cand.b, cfg);
  if (!theta) {
    cand.reject_reason = "degenerate theta equation";
    return cand;
  }
  cand.theta = *theta;
  if (!(cand.theta > 0.0)) {
    cand.reject_reason = "theta not positive";
    return cand;
  }

  const MomentSequence c = assemble_moments(x0, cand.a, cand.b, cand.theta);
  cand.report = check_conditions(c, cse.type, cse.k, cand.a, cand.b, cfg.tol_pd, cfg.tol_sing);
  if (!cand.report.passed) {
    cand.reject_reason = condition_failure_reason(cand.report, cse.type);
    return cand;
  }

  std::vector<RealRoot> roots;
  try {
    roots = recover_nodes(c, cse.type, cse.k, cand.a, cand.b, cfg.tol_root, cfg.root_merge_tol);
  } catch (const std::exception& e) {
    cand.reject_reason = e.what();
    return cand;
  }
  int real_count = 0;
  bool merged = false;
  for (const RealRoot& r : roots) {
    real_count += r.multiplicity;
    merged = merged || r.merged;
  }
  if (real_count < cse.k - 1) {
    cand.reject_reason = "interior nodes not all real";
    return cand;
  }
  if (merged) {
    cand.reject_reason = "interior nodes not distinct";
    return cand;
  }
  const double span_scale = std::max({1.0, std::abs(cand.a), std::abs(cand.b)});
  for (const RealRoot& r : roots) {
    cand.nodes.push_back(r.x);
    if (r.x <= cand.a + 1e-12 * span_scale || r.x >= cand.b - 1e-12 * span_scale) {
      cand.reject_reason = "node outside (a,b)";
      return cand;
    }
    if (std::abs(r.x) <= 1e-13 * span_scale) {
      cand.reject_reason = "node at zero";
      return cand;
    }
  }

  try {
    cand.weights =
        recover_weights(c, cse.type, cand.nodes, cand.a, cand.b, cfg.moment_consistency_tol);
  } catch (const std::exception& e) {
    cand.reject_reason = e.what();
    return cand;
  }
  for (double w : cand.weights) {
    if (!(w > 0.0)) {
      cand.reject_reason = "weight not positive";
      return cand;
    }
  }

  SynthesisSpec spec;
  spec.x1_0 = x0.x1();
  spec.a = cand.a;
  spec.b = cand.b;
  spec.interior_nodes = cand.nodes;
  spec.interior_weights.assign(cand.weights.begin() + (tr.mass_at_b ? 1 : 0),
                               cand.weights.end() - (tr.mass_at_a ? 1 : 0));
  spec.weight_at_b = tr.mass_at_b ? cand.weights.front() : 0.0;
  spec.weight_at_a = tr.mass_at_a ? cand.weights.back() : 0.0;
  try {
    cand.control = synthesize_control(spec);
  } catch (const std::exception& e) {
    cand.reject_reason = e.what();
    return cand;
  }

  const std::vector<double> final_state = simulate_exact(x0.x0, *cand.control);
  double resid = 0.0;
  for (double v : final_state) resid = std::max(resid, std::abs(v));
  cand.residual = resid;
  if (resid > cfg.tol_sim * (1.0 + x0.inf_norm())) {
    cand.reject_reason = "simulation residual too large";
    return cand;
  }
  return cand;
}

SolveReport solve(std::span<const double> x0raw, const Config& cfg) {
  SolveReport rep;
  rep.x0.assign(x0raw.begin(), x0raw.end());

  NormalizedState norm;
  try {
    norm = normalize_initial_state(x0raw);
  } catch (const NonGenericError& e) {
    rep.verdict = Verdict::non_generic;
    rep.notes.push_back(e.what());
    return rep;
  }
  rep.mirrored = norm.mirrored;
  const InitialState& x0 = norm.state;

  bool degenerate_seen = false;
  for (const CaseDescriptor& cse : enumerate_cases(x0.n())) {
    std::string note;
    std::vector<std::pair<double, double>> pairs = solve_endpoints(x0, cse, cfg, &note);
    if (!note.empty()) {
      degenerate_seen = true;
      std::ostringstream os;
      os << "case " << cse.id << ": " << note;
      rep.notes.push_back(os.str());
    }
    // Final polish against the exact simulation, then drop pairs that
    // converged into each other.
    for (auto& pr : pairs) {
      auto [ra, rb] = refine_pair_by_steering(x0, cse, pr.first, pr.second, cfg);
      if (ra > -cfg.endpoint_slack) ra = 0.0;
      if (std::abs(rb - x0.x1()) <= cfg.endpoint_slack) rb = x0.x1();
      pr = {ra, rb};
    }
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::pair<double, double>> uniq;
    for (const auto& pr : pairs) {
      bool close = false;
      for (const auto& kept : uniq)
        if (std::abs(pr.first - kept.first) <= cfg.dedup_tol * std::max(1.0, std::abs(pr.first)) &&
            std::abs(pr.second - kept.second) <=
                cfg.dedup_tol * std::max(1.0, std::abs(pr.second)))
          close = true;
      if (!close) uniq.push_back(pr);
    }
    for (const auto& [a, b] : uniq)
      rep.candidates.push_back(evaluate_candidate(x0, cse, a, b, cfg));
  }

  // Merge accepted candidates describing the same point across cases
  // (a boundary solution is reachable from two neighbouring cases).
  std::vector<CandidateSolution> kept;
  for (const CandidateSolution& cand : rep.candidates) {
    bool dup = false;
    if (cand.accepted()) {
      for (const CandidateSolution& prev : kept) {
        if (!prev.accepted()) continue;
        const bool same =
            std::abs(prev.a - cand.a) <= cfg.dedup_tol * std::max(1.0, std::abs(cand.a)) &&
            std::abs(prev.b - cand.b) <= cfg.dedup_tol * std::max(1.0, std::abs(cand.b)) &&
            std::abs(prev.theta - cand.theta) <= cfg.dedup_tol * std::max(1.0, std::abs(cand.theta));
        if (same) {
          dup = true;
          break;
        }
      }
    }
    if (!dup) kept.push_back(cand);
  }
  rep.candidates = std::move(kept);

  std::stable_sort(rep.candidates.begin(), rep.candidates.end(),
                   [](const CandidateSolution& l, const CandidateSolution& r) {
                     return l.cse.id < r.cse.id;
                   });

  for (size_t i = 0; i < rep.candidates.size(); ++i) {
    const CandidateSolution& cand = rep.candidates[i];
    if (!cand.accepted()) continue;
    if (!rep.best_index || cand.theta < rep.candidates[*rep.best_index].theta)
      rep.best_index = i;
  }

  if (rep.mirrored) {
    for (CandidateSolution& cand : rep.candidates)
      if (cand.control) cand.control = negated(*cand.control);
  }

  if (rep.best_index)
    rep.verdict = Verdict::optimal_found;
  else
    rep.verdict = degenerate_seen ? Verdict::non_generic : Verdict::not_controllable;
  return rep;
}

}  // namespace mtoc
