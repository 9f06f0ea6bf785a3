#include "momenttoc/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "momenttoc/hausdorff.hpp"

namespace mtoc {

namespace {

// Free parameters of a case family, in a fixed order:
//   [a1 when b is free] [sigma at b] [b_1..b_{k-1}] [sigma_2..sigma_k]
//   [sigma at a] [a2 when a is free]
// The last sweep b_k is recovered from x1 + a1 + a2 = sum b_s.
struct FamilyLayout {
  bool has_a1 = false;
  bool has_sigma_b = false;
  int interior = 0;  // k-1
  bool has_sigma_a = false;
  bool has_a2 = false;

  int count() const {
    return (has_a1 ? 1 : 0) + (has_sigma_b ? 1 : 0) + 2 * interior + (has_sigma_a ? 1 : 0) +
           (has_a2 ? 1 : 0);
  }
};

FamilyLayout layout_of(const CaseDescriptor& cse) {
  const LemmaTraits tr = lemma_traits(cse.type, cse.k, 2 * cse.k + 2);  // bound-safe n
  FamilyLayout fl;
  fl.has_a1 = !cse.b_fixed;
  fl.has_sigma_b = tr.mass_at_b;
  fl.interior = cse.k - 1;
  fl.has_sigma_a = tr.mass_at_a;
  fl.has_a2 = !cse.a_fixed;
  return fl;
}

// Builds the stair-step control for a parameter point; false when the
// balance leaves a non-positive final sweep.
bool build_control(const FamilyLayout& fl, double x1, std::span<const double> p,
                   StairStepControl& u, double& total) {
  size_t idx = 0;
  const double a1 = fl.has_a1 ? p[idx++] : 0.0;
  const double sigma_b = fl.has_sigma_b ? p[idx++] : 0.0;
  std::vector<double> sweeps(static_cast<size_t>(fl.interior));
  for (auto& v : sweeps) v = p[idx++];
  std::vector<double> dwell(static_cast<size_t>(fl.interior));
  for (auto& v : dwell) v = p[idx++];
  const double sigma_a = fl.has_sigma_a ? p[idx++] : 0.0;
  const double a2 = fl.has_a2 ? p[idx++] : 0.0;

  double partial = 0.0;
  for (double v : sweeps) partial += v;
  const double bk = x1 + a1 + a2 - partial;
  if (!(bk > 0.0)) return false;

  u.segments.clear();
  auto push = [&u](int level, double dur) {
    if (dur > 0.0) u.segments.push_back({level, dur});
  };
  push(+1, a1);
  push(0, sigma_b);
  for (int s = 0; s < fl.interior; ++s) {
    push(-1, sweeps[static_cast<size_t>(s)]);
    push(0, dwell[static_cast<size_t>(s)]);
  }
  push(-1, bk);
  push(0, sigma_a);
  push(+1, a2);

  total = a1 + sigma_b + a2 + sigma_a + bk + partial;
  for (double v : dwell) total += v;
  return true;
}

double residual_of(std::span<const double> x0, const StairStepControl& u) {
  const std::vector<double> fin = simulate_exact(x0, u);
  double r = 0.0;
  for (double v : fin) r = std::max(r, std::abs(v));
  return r;
}

struct GridPoint {
  std::vector<double> params;
  double time = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
};

// Reporting accumulator: only controls meeting the final (tightest)
// feasibility tolerance count toward the answer, so the approximate
// minimum is meaningful and can only improve as the grid refines.
struct FeasibleBest {
  double tol = 0.0;
  double time = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  int case_id = 0;

  void offer(double t, double r, int cid) {
    if (r <= tol && t < time) {
      time = t;
      residual = r;
      case_id = cid;
    }
  }
  bool found() const { return std::isfinite(time); }
};

// Full sweep of an axis-aligned box. Keeps the `keep` lowest-residual
// points that are pairwise separated by at least min_sep in the max norm
// (distinct basins for the multistart refinement).
void sweep_box(const InitialState& x0, const FamilyLayout& fl,
               const std::vector<std::pair<double, double>>& box, int resolution, size_t keep,
               double min_sep, std::vector<GridPoint>& tops) {
  const int dims = static_cast<int>(box.size());
  std::vector<int> idx(static_cast<size_t>(dims), 0);
  std::vector<double> point(static_cast<size_t>(dims), 0.0);
  StairStepControl u;

  auto offer = [&](const GridPoint& cand) {
    for (GridPoint& held : tops) {
      double dist = 0.0;
      for (size_t d = 0; d < cand.params.size(); ++d)
        dist = std::max(dist, std::abs(cand.params[d] - held.params[d]));
      if (dist < min_sep) {
        if (cand.residual < held.residual) held = cand;
        return;
      }
    }
    if (tops.size() < keep) {
      tops.push_back(cand);
      return;
    }
    size_t worst = 0;
    for (size_t i = 1; i < tops.size(); ++i)
      if (tops[i].residual > tops[worst].residual) worst = i;
    if (cand.residual < tops[worst].residual) tops[worst] = cand;
  };

  while (true) {
    for (int d = 0; d < dims; ++d) {
      const auto& [lo, hi] = box[static_cast<size_t>(d)];
      point[static_cast<size_t>(d)] =
          resolution == 1 ? lo : lo + (hi - lo) * idx[static_cast<size_t>(d)] / (resolution - 1);
    }
    double total = 0.0;
    if (build_control(fl, x0.x1(), point, u, total)) {
      GridPoint cand;
      cand.params = point;
      cand.time = total;
      cand.residual = residual_of(x0.x0, u);
      offer(cand);
    }
    int d = 0;
    for (; d < dims; ++d) {
      if (++idx[static_cast<size_t>(d)] < resolution) break;
      idx[static_cast<size_t>(d)] = 0;
    }
    if (d == dims) break;
  }
}

// Damped Newton on the steering equations over the family parameters,
// with a finite-difference Jacobian. Nothing here touches the moment
// machinery: evaluations are exact simulations only. The exact-steering
// points sit in narrow residual basins that a pure grid cannot afford to
// resolve, while Newton converges from a coarse-grid neighbour.
void newton_refine(const InitialState& x0, const FamilyLayout& fl, double upper,
                   GridPoint& pt) {
  const int dims = static_cast<int>(pt.params.size());
  const int n = x0.n();
  StairStepControl u;

  auto eval = [&](const std::vector<double>& p, Eigen::VectorXd& f, double& total) -> bool {
    if (!build_control(fl, x0.x1(), p, u, total)) return false;
    const std::vector<double> fin = simulate_exact(x0.x0, u);
    f.resize(n);
    for (int j = 0; j < n; ++j) f(j) = fin[static_cast<size_t>(j)];
    return true;
  };

  std::vector<double> p = pt.params;
  Eigen::VectorXd f;
  double total = 0.0;
  if (!eval(p, f, total)) return;
  double res = f.cwiseAbs().maxCoeff();

  for (int it = 0; it < 60; ++it) {
    Eigen::MatrixXd jac(n, dims);
    Eigen::VectorXd fd;
    bool ok = true;
    for (int d = 0; d < dims && ok; ++d) {
      const double h = 1e-7 * std::max(1.0, std::abs(p[static_cast<size_t>(d)]));
      std::vector<double> ph = p;
      ph[static_cast<size_t>(d)] += h;
      double tt = 0.0;
      if (!eval(ph, fd, tt)) {
        ph[static_cast<size_t>(d)] = p[static_cast<size_t>(d)] - h;
        if (!eval(ph, fd, tt)) {
          ok = false;
          break;
        }
        jac.col(d) = (f - fd) / h;
      } else {
        jac.col(d) = (fd - f) / h;
      }
    }
    if (!ok) break;

    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-f);
    if (!step.allFinite()) break;

    double lambda = 1.0;
    bool improved = false;
    for (int bt = 0; bt < 10; ++bt, lambda *= 0.5) {
      std::vector<double> pn = p;
      for (int d = 0; d < dims; ++d)
        pn[static_cast<size_t>(d)] =
            std::clamp(p[static_cast<size_t>(d)] + lambda * step(d), 0.0, upper);
      Eigen::VectorXd fn;
      double tn = 0.0;
      if (!eval(pn, fn, tn)) continue;
      const double rn = fn.cwiseAbs().maxCoeff();
      if (rn < res) {
        p = pn;
        f = fn;
        res = rn;
        total = tn;
        improved = true;
        break;
      }
    }
    if (!improved || res <= 1e-13 * (1.0 + x0.inf_norm())) break;
  }

  if (res < pt.residual) {
    pt.params = p;
    pt.residual = res;
    pt.time = total;
  }
}

}  // namespace

GridSearchOutcome grid_search_min_time(const InitialState& x0,
                                       std::span<const CaseDescriptor> cases,
                                       const GridSpec& spec) {
  if (x0.n() > 5)
    throw std::invalid_argument("grid_search_min_time: desk-scale oracle supports n <= 5");
  if (spec.resolution < 2) throw std::invalid_argument("grid_search_min_time: resolution >= 2");

  GridSearchOutcome out;
  const double feas_scale = 1.0 + x0.inf_norm();
  const int passes = spec.refinements + 1;
  out.theta_by_pass.assign(static_cast<size_t>(passes),
                           std::numeric_limits<double>::infinity());

  FeasibleBest best;
  best.tol = spec.initial_feas_tol * std::pow(10.0, -spec.refinements) * feas_scale;
  out.feas_tol_used = best.tol;

  for (const CaseDescriptor& cse : cases) {
    const FamilyLayout fl = layout_of(cse);
    const int dims = fl.count();
    const double coarse_step = spec.duration_upper / (spec.resolution - 1);

    // Pass 0: exhaustive coarse sweep, keep well-separated low-residual
    // starts, drive each to its exact-steering point. Refinement passes
    // re-grid a shrinking window around the incumbent and repeat.
    std::vector<GridPoint> incumbents;
    for (int pass = 0; pass < passes; ++pass) {
      std::vector<GridPoint> starts;
      if (pass == 0 || incumbents.empty()) {
        std::vector<std::pair<double, double>> box(static_cast<size_t>(dims),
                                                   {0.0, spec.duration_upper});
        sweep_box(x0, fl, box, spec.resolution, 24, 2.0 * coarse_step, starts);
      } else {
        const double width = 1.5 * coarse_step * std::pow(0.1, pass);
        std::vector<std::pair<double, double>> box;
        for (int d = 0; d < dims; ++d) {
          const double c = incumbents.front().params[static_cast<size_t>(d)];
          box.emplace_back(std::max(0.0, c - width),
                           std::min(spec.duration_upper, c + width));
        }
        sweep_box(x0, fl, box, spec.resolution, 8, 0.0, starts);
      }
      for (GridPoint& start : starts) {
        newton_refine(x0, fl, spec.duration_upper, start);
        // Only fully refined steering solutions count toward the answer;
        // loosely feasible intermediates can undercut the optimum by more
        // than their own residual allows.
        best.offer(start.time, start.residual, cse.id);
      }
      std::sort(starts.begin(), starts.end(),
                [](const GridPoint& l, const GridPoint& r) { return l.residual < r.residual; });
      if (!starts.empty() &&
          (incumbents.empty() || starts.front().residual < incumbents.front().residual))
        incumbents = starts;

      auto& slot = out.theta_by_pass[static_cast<size_t>(pass)];
      slot = std::min(slot, best.found() ? best.time : slot);
    }
  }

  // Per-pass running minimum; non-increasing by construction.
  double running = std::numeric_limits<double>::infinity();
  for (auto& v : out.theta_by_pass) {
    running = std::min(running, v);
    v = running;
  }
  out.feasible = best.found();
  out.approx_theta = best.time;
  out.case_id = best.case_id;
  out.residual = best.residual;
  return out;
}

RoundTripResult random_step_roundtrip(std::uint64_t seed, LemmaType type, int k, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> wdist(0.1, 10.0);
  std::uniform_real_distribution<double> adist(-5.0, -0.3);
  std::uniform_real_distribution<double> bdist(0.3, 5.0);

  const LemmaTraits tr = lemma_traits(type, k, n);
  RoundTripResult out;

  const double a = adist(rng);
  const double b = bdist(rng);

  // Interior nodes: margin 0.05 from zero, pairwise separation 0.15 to
  // keep the Vandermonde systems honest at k = 4.
  std::vector<double> interior;
  int guard = 0;
  while (static_cast<int>(interior.size()) < k - 1) {
    if (++guard > 10000) {
      out.detail = "generator failed to place interior nodes";
      return out;
    }
    std::uniform_real_distribution<double> zdist(a + 0.05, b - 0.05);
    const double z = zdist(rng);
    if (std::abs(z) < 0.05) continue;
    bool ok = true;
    for (double w : interior)
      if (std::abs(w - z) < 0.15) ok = false;
    if (ok) interior.push_back(z);
  }
  std::sort(interior.begin(), interior.end(), std::greater<>());

  StepFunction sf;
  sf.a = a;
  sf.b = b;
  if (tr.mass_at_b) {
    sf.nodes.push_back(b);
    sf.weights.push_back(wdist(rng));
  }
  for (double z : interior) {
    sf.nodes.push_back(z);
    sf.weights.push_back(wdist(rng));
  }
  if (tr.mass_at_a) {
    sf.nodes.push_back(a);
    sf.weights.push_back(wdist(rng));
  }

  const MomentSequence c = moments_of(sf, n);
  const ConditionReport rep = check_conditions(c, type, k, a, b);
  if (!rep.passed) {
    out.detail = "conditions failed on a valid step function";
    return out;
  }

  std::vector<RealRoot> roots;
  try {
    roots = recover_nodes(c, type, k, a, b);
  } catch (const std::exception& e) {
    out.detail = std::string("node recovery: ") + e.what();
    return out;
  }
  if (static_cast<int>(roots.size()) != k - 1) {
    out.detail = "wrong interior node count";
    return out;
  }
  for (int i = 0; i < k - 1; ++i) {
    const double want = interior[static_cast<size_t>(i)];
    const double got = roots[static_cast<size_t>(i)].x;
    if (std::abs(got - want) > 1e-6 * std::max(1.0, std::abs(want))) {
      std::ostringstream os;
      os << "node mismatch: " << got << " vs " << want;
      out.detail = os.str();
      return out;
    }
  }

  std::vector<double> nodes_only(interior.begin(), interior.end());
  std::vector<double> weights;
  try {
    weights = recover_weights(c, type, nodes_only, a, b);
  } catch (const std::exception& e) {
    out.detail = std::string("weight recovery: ") + e.what();
    return out;
  }
  if (weights.size() != sf.weights.size()) {
    out.detail = "wrong weight count";
    return out;
  }
  for (size_t i = 0; i < weights.size(); ++i) {
    if (std::abs(weights[i] - sf.weights[i]) > 1e-6 * std::max(1.0, std::abs(sf.weights[i]))) {
      std::ostringstream os;
      os << "weight mismatch: " << weights[i] << " vs " << sf.weights[i];
      out.detail = os.str();
      return out;
    }
  }
  out.pass = true;
  return out;
}

ConstructedInstance random_controllable_instance(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  const std::vector<CaseDescriptor> cases = enumerate_cases(n);
  const CaseDescriptor cse = cases[std::uniform_int_distribution<size_t>(0, cases.size() - 1)(rng)];
  const LemmaTraits tr = lemma_traits(cse.type, cse.k, n);

  std::uniform_real_distribution<double> bdist(0.8, 2.5);
  std::uniform_real_distribution<double> wdist(0.3, 2.5);
  std::uniform_real_distribution<double> frac(0.3, 0.85);

  const double b = bdist(rng);
  const double x1 = cse.b_fixed ? b : b * frac(rng);
  const double a = cse.a_fixed ? 0.0 : -bdist(rng);

  // Interior nodes with healthy margins (generic, comfortably solvable).
  std::vector<double> interior;
  int guard = 0;
  while (static_cast<int>(interior.size()) < cse.k - 1) {
    if (++guard > 20000) throw std::runtime_error("instance generator: node placement failed");
    std::uniform_real_distribution<double> zdist(a + 0.15, b - 0.15);
    const double z = zdist(rng);
    if (std::abs(z) < 0.12) continue;
    bool ok = true;
    for (double w : interior)
      if (std::abs(w - z) < 0.12) ok = false;
    if (ok) interior.push_back(z);
  }
  std::sort(interior.begin(), interior.end(), std::greater<>());

  SynthesisSpec spec;
  spec.x1_0 = x1;
  spec.a = a;
  spec.b = b;
  spec.interior_nodes = interior;
  for (int i = 0; i < cse.k - 1; ++i) spec.interior_weights.push_back(wdist(rng));
  spec.weight_at_b = tr.mass_at_b ? wdist(rng) : 0.0;
  spec.weight_at_a = tr.mass_at_a ? wdist(rng) : 0.0;

  ConstructedInstance inst;
  inst.control = synthesize_control(spec);
  inst.total_time = inst.control.total_time();
  inst.case_id = cse.id;

  // x_j required so the control lands exactly at the origin.
  std::vector<double> probe(static_cast<size_t>(n), 0.0);
  probe[0] = x1;
  const std::vector<double> fin = simulate_exact(probe, inst.control);
  inst.x0.assign(static_cast<size_t>(n), 0.0);
  inst.x0[0] = x1;
  for (int j = 2; j <= n; ++j) inst.x0[static_cast<size_t>(j - 1)] = -fin[static_cast<size_t>(j - 1)];
  return inst;
}

}  // namespace mtoc
