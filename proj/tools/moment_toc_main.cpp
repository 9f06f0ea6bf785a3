// moment-toc: analytic time-optimal control for the chain x1' = u,
// xj' = x1^(j-1) with |u| <= 1. Subcommands: solve, simulate, verify,
// sweep, moments.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "momenttoc/casesolver.hpp"
#include "momenttoc/oracle.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotControllable = 2;
constexpr int kExitNonGeneric = 3;
constexpr int kExitDiscrepancy = 4;

// Shortest representation that parses back to the same double.
std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::vector<double> parse_x0(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad number: " + tok);
    out.push_back(v);
  }
  if (out.size() < 4) throw std::invalid_argument("need at least 4 components in --x0");
  return out;
}

const char* verdict_name(mtoc::Verdict v) {
  switch (v) {
    case mtoc::Verdict::optimal_found: return "optimal_found";
    case mtoc::Verdict::not_controllable: return "not_controllable";
    case mtoc::Verdict::non_generic: return "non_generic";
  }
  return "?";
}

json control_to_json(const mtoc::StairStepControl& u) {
  json segs = json::array();
  for (const auto& s : u.segments) segs.push_back({{"level", s.level}, {"duration", s.duration}});
  return {{"segments", segs}, {"total_time", u.total_time()}};
}

json report_to_json(const mtoc::SolveReport& rep, const mtoc::Config& cfg, bool accepted_only) {
  json candidates = json::array();
  for (const auto& c : rep.candidates) {
    if (accepted_only && !c.accepted()) continue;
    json jc = {
        {"case_id", c.cse.id},
        {"type", std::string(1, mtoc::lemma_type_name(c.cse.type))},
        {"k", c.cse.k},
        {"a", c.a},
        {"b", c.b},
        {"theta", c.theta},
        {"nodes", c.nodes},
        {"weights", c.weights},
        {"accepted", c.accepted()},
        {"reject_reason", c.reject_reason ? json(*c.reject_reason) : json()},
        {"condition_report",
         {{"singular_residuals", c.report.singular_residuals},
          {"pd", c.report.pd},
          {"minors", c.report.minors},
          {"passed", c.report.passed}}},
        {"residual", c.residual},
    };
    jc["control"] = c.control ? control_to_json(*c.control) : json();
    candidates.push_back(std::move(jc));
  }

  json best;
  if (const mtoc::CandidateSolution* b = rep.best()) {
    best = {{"case_id", b->cse.id},
            {"theta", b->theta},
            {"control", b->control ? control_to_json(*b->control) : json()},
            {"mirrored", rep.mirrored}};
  }

  return {{"schema_version", "1"},
          {"input",
           {{"x0", rep.x0},
            {"tolerances",
             {{"tol_pd", cfg.tol_pd},
              {"tol_root", cfg.tol_root},
              {"tol_sing", cfg.tol_sing},
              {"tol_sim", cfg.tol_sim}}}}},
          {"mirrored", rep.mirrored},
          {"candidates", candidates},
          {"best", best},
          {"verdict", verdict_name(rep.verdict)},
          {"notes", rep.notes}};
}

void print_text_report(const mtoc::SolveReport& rep, bool accepted_only, std::ostream& os) {
  os << "verdict: " << verdict_name(rep.verdict) << "\n";
  if (rep.mirrored) os << "input mirrored to the x1 > 0 frame\n";
  for (const auto& c : rep.candidates) {
    if (accepted_only && !c.accepted()) continue;
    os << "case " << c.cse.id << " (type " << mtoc::lemma_type_name(c.cse.type)
       << ", k=" << c.cse.k << "): a=" << fmt_double(c.a) << " b=" << fmt_double(c.b)
       << " theta=" << fmt_double(c.theta);
    if (c.accepted())
      os << "  accepted, residual " << fmt_double(c.residual) << "\n";
    else
      os << "  rejected: " << *c.reject_reason << "\n";
    if (!c.nodes.empty()) {
      os << "  nodes:";
      for (double z : c.nodes) os << ' ' << fmt_double(z);
      os << "\n";
    }
    if (!c.weights.empty()) {
      os << "  weights:";
      for (double w : c.weights) os << ' ' << fmt_double(w);
      os << "\n";
    }
  }
  if (const mtoc::CandidateSolution* b = rep.best()) {
    os << "optimal time: " << fmt_double(b->theta) << " via case " << b->cse.id << "\n";
    os << "control:";
    for (const auto& s : b->control->segments)
      os << " [" << (s.level > 0 ? "+1" : s.level < 0 ? "-1" : "0") << " for "
         << fmt_double(s.duration) << "]";
    os << "\n";
  }
  for (const auto& note : rep.notes) os << "note: " << note << "\n";
}

int verdict_exit_code(mtoc::Verdict v) {
  switch (v) {
    case mtoc::Verdict::optimal_found: return kExitOk;
    case mtoc::Verdict::not_controllable: return kExitNotControllable;
    case mtoc::Verdict::non_generic: return kExitNonGeneric;
  }
  return kExitUsage;
}

void write_csv_trajectory(const mtoc::Trajectory& traj, int n, std::ostream& os) {
  os << "t";
  for (int j = 1; j <= n; ++j) os << ",x" << j;
  os << ",u\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    os << fmt_double(traj.times[i]);
    for (double v : traj.states[i]) os << ',' << fmt_double(v);
    os << ',' << traj.levels[i] << "\n";
  }
}

mtoc::StairStepControl parse_segments(const std::string& spec) {
  mtoc::StairStepControl u;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const size_t colon = tok.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("segment needs LEVEL:DURATION");
    const int level = std::stoi(tok.substr(0, colon));
    const double dur = std::stod(tok.substr(colon + 1));
    if (level < -1 || level > 1) throw std::invalid_argument("segment level must be -1, 0, or +1");
    if (!(dur >= 0.0)) throw std::invalid_argument("segment duration must be >= 0");
    if (dur > 0.0) u.segments.push_back({level, dur});
  }
  if (u.segments.empty()) throw std::invalid_argument("empty control");
  return u;
}

mtoc::StairStepControl control_from_json(const json& jc) {
  mtoc::StairStepControl u;
  for (const auto& s : jc.at("segments"))
    u.segments.push_back({s.at("level").get<int>(), s.at("duration").get<double>()});
  return u;
}

struct ToleranceFlags {
  mtoc::Config cfg;
  void attach(CLI::App* app) {
    app->add_option("--tol-pd", cfg.tol_pd, "positive-definiteness margin")
        ->envname("MOMENT_TOC_TOL_PD");
    app->add_option("--tol-root", cfg.tol_root, "root residual tolerance")
        ->envname("MOMENT_TOC_TOL_ROOT");
    app->add_option("--tol-sing", cfg.tol_sing, "singularity diagnostic threshold")
        ->envname("MOMENT_TOC_TOL_SING");
    app->add_option("--tol-sim", cfg.tol_sim, "endpoint residual tolerance")
        ->envname("MOMENT_TOC_TOL_SIM");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analytic time-optimal control for the dual-to-integrator chain"};
  app.require_subcommand(1);

  // ---- solve ----
  auto* solve_cmd = app.add_subcommand("solve", "solve the time-optimal problem for an initial point");
  std::string solve_x0;
  bool solve_json = false, accepted_only = false;
  std::string solve_out;
  ToleranceFlags solve_tols;
  solve_cmd->add_option("--x0", solve_x0, "initial point, comma separated")->required();
  solve_cmd->add_flag("--json", solve_json, "emit a JSON report");
  solve_cmd->add_flag("--accepted-only", accepted_only, "omit rejected candidates from the report");
  solve_cmd->add_option("--out", solve_out, "write the report to a file instead of stdout");
  solve_tols.attach(solve_cmd);

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand("simulate", "integrate a stair-step control exactly, CSV out");
  std::string sim_x0, sim_segments, sim_report, sim_out;
  int sim_samples = 1000;
  sim_cmd->add_option("--x0", sim_x0, "initial point, comma separated")->required();
  sim_cmd->add_option("--segments", sim_segments, "inline control, e.g. '+1:0.5,0:1.2,-1:2'");
  sim_cmd->add_option("--report", sim_report, "take the best control from a solve report (JSON)");
  sim_cmd->add_option("--samples", sim_samples, "number of uniform samples (>= 2)");
  sim_cmd->add_option("--out", sim_out, "CSV output path (default stdout)");

  // ---- verify ----
  auto* verify_cmd = app.add_subcommand("verify", "cross-check a solution against the grid oracle");
  std::string verify_x0, verify_report;
  int verify_resolution = 24, verify_refinements = 2;
  double verify_bound = 0.0;
  ToleranceFlags verify_tols;
  verify_cmd->add_option("--x0", verify_x0, "initial point, comma separated")->required();
  verify_cmd->add_option("--report", verify_report, "verify this report instead of re-solving");
  verify_cmd->add_option("--resolution", verify_resolution, "grid points per parameter");
  verify_cmd->add_option("--refinements", verify_refinements, "refinement passes");
  verify_cmd->add_option("--bound", verify_bound, "duration search bound (default from theta)");
  verify_tols.attach(verify_cmd);

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand("sweep", "solve along a line or grid of initial points");
  std::string sweep_x0, sweep_out;
  std::vector<std::string> sweep_specs;
  int sweep_threads = 0;
  ToleranceFlags sweep_tols;
  sweep_cmd->add_option("--x0", sweep_x0, "base initial point, comma separated")->required();
  sweep_cmd
      ->add_option("--sweep", sweep_specs,
                   "component sweep 'INDEX:FROM:TO:POINTS' (1-based index; repeat for a grid)")
      ->required();
  sweep_cmd->add_option("--threads", sweep_threads, "worker threads (default: hardware)");
  sweep_cmd->add_option("--out", sweep_out, "CSV output path (default stdout)");
  sweep_tols.attach(sweep_cmd);

  // ---- moments ----
  auto* mom_cmd = app.add_subcommand("moments", "print the moment sequence for (x0, a, b, theta)");
  std::string mom_x0, mom_shift = "none";
  double mom_a = 0.0, mom_b = 0.0, mom_theta = 0.0;
  bool mom_json = false, mom_b_set = false;
  mom_cmd->add_option("--x0", mom_x0, "initial point, comma separated")->required();
  mom_cmd->add_option("--a", mom_a, "left endpoint (<= 0)");
  auto* mom_b_opt = mom_cmd->add_option("--b", mom_b, "right endpoint (>= x1; default x1)");
  mom_cmd->add_option("--theta", mom_theta, "candidate time (>= 0)");
  mom_cmd->add_option("--shift", mom_shift, "also print a shifted sequence: a, b, or ab");
  mom_cmd->add_flag("--json", mom_json, "emit JSON");

  CLI11_PARSE(app, argc, argv);
  mom_b_set = mom_b_opt->count() > 0;

  try {
    if (*solve_cmd) {
      const std::vector<double> x0 = parse_x0(solve_x0);
      const mtoc::SolveReport rep = mtoc::solve(x0, solve_tols.cfg);
      std::ostringstream os;
      if (solve_json)
        os << report_to_json(rep, solve_tols.cfg, accepted_only).dump(2) << "\n";
      else
        print_text_report(rep, accepted_only, os);
      if (solve_out.empty())
        std::cout << os.str();
      else
        std::ofstream(solve_out) << os.str();
      return verdict_exit_code(rep.verdict);
    }

    if (*sim_cmd) {
      const std::vector<double> x0 = parse_x0(sim_x0);
      if (sim_samples < 2) throw std::invalid_argument("--samples must be >= 2");
      mtoc::StairStepControl u;
      if (!sim_segments.empty()) {
        u = parse_segments(sim_segments);
      } else if (!sim_report.empty()) {
        std::ifstream in(sim_report);
        if (!in) throw std::invalid_argument("cannot open report: " + sim_report);
        json jr = json::parse(in);
        if (jr.at("best").is_null())
          throw std::invalid_argument("report has no accepted solution to simulate");
        u = control_from_json(jr.at("best").at("control"));
      } else {
        throw std::invalid_argument("need --segments or --report");
      }
      const mtoc::Trajectory traj = mtoc::sample_trajectory(x0, u, sim_samples);
      std::ostringstream os;
      write_csv_trajectory(traj, static_cast<int>(x0.size()), os);
      if (sim_out.empty())
        std::cout << os.str();
      else
        std::ofstream(sim_out) << os.str();
      return kExitOk;
    }

    if (*verify_cmd) {
      const std::vector<double> x0 = parse_x0(verify_x0);
      if (x0.size() > 5)
        throw std::invalid_argument("verify: the brute-force oracle is limited to n <= 5");
      const mtoc::Config& cfg = verify_tols.cfg;

      std::optional<double> theta;
      std::optional<mtoc::StairStepControl> control;
      if (!verify_report.empty()) {
        std::ifstream in(verify_report);
        if (!in) throw std::invalid_argument("cannot open report: " + verify_report);
        json jr = json::parse(in);
        if (!jr.at("best").is_null()) {
          theta = jr.at("best").at("theta").get<double>();
          control = control_from_json(jr.at("best").at("control"));
        }
      } else {
        const mtoc::SolveReport rep = mtoc::solve(x0, cfg);
        if (rep.verdict == mtoc::Verdict::non_generic) {
          std::cerr << "verify: input rejected as non-generic\n";
          return kExitNonGeneric;
        }
        if (const mtoc::CandidateSolution* b = rep.best()) {
          theta = b->theta;
          control = b->control;
        }
      }

      double x0_scale = 0.0;
      for (double v : x0) x0_scale = std::max(x0_scale, std::abs(v));

      bool consistent = true;
      if (theta) {
        const double total = control->total_time();
        if (std::abs(total - *theta) > 1e-9 * std::max(1.0, *theta)) {
          std::cerr << "verify: control duration " << fmt_double(total)
                    << " does not match theta " << fmt_double(*theta) << "\n";
          consistent = false;
        }
        const std::vector<double> fin = mtoc::simulate_exact(x0, *control);
        double resid = 0.0;
        for (double v : fin) resid = std::max(resid, std::abs(v));
        if (resid > cfg.tol_sim * (1.0 + x0_scale)) {
          std::cerr << "verify: endpoint residual " << fmt_double(resid) << " too large\n";
          consistent = false;
        }
      }

      mtoc::GridSpec spec;
      spec.resolution = verify_resolution;
      spec.refinements = verify_refinements;
      spec.duration_upper =
          verify_bound > 0.0 ? verify_bound : (theta ? 1.3 * *theta + 1.0 : 4.0 * (1.0 + x0_scale));
      const mtoc::InitialState state{x0[0] > 0 ? x0 : mtoc::mirror_state(x0)};
      const auto cases = mtoc::enumerate_cases(static_cast<int>(x0.size()));
      const mtoc::GridSearchOutcome oracle = mtoc::grid_search_min_time(state, cases, spec);

      if (theta) {
        if (!oracle.feasible) {
          std::cerr << "verify: solver found theta " << fmt_double(*theta)
                    << " but the oracle saw no feasible control\n";
          return kExitDiscrepancy;
        }
        if (oracle.approx_theta < *theta * (1.0 - 1e-3)) {
          std::cerr << "verify: oracle found a faster control: " << fmt_double(oracle.approx_theta)
                    << " < " << fmt_double(*theta) << "\n";
          return kExitDiscrepancy;
        }
        if (!consistent) return kExitDiscrepancy;
        std::cout << "verify: ok (solver " << fmt_double(*theta) << ", oracle "
                  << fmt_double(oracle.approx_theta) << ")\n";
        return kExitOk;
      }
      if (oracle.feasible) {
        std::cerr << "verify: solver reported not controllable but the oracle steered to the "
                     "origin in "
                  << fmt_double(oracle.approx_theta) << "\n";
        return kExitDiscrepancy;
      }
      std::cout << "verify: ok (not controllable; oracle infeasible at tested resolution)\n";
      return kExitOk;
    }

    if (*sweep_cmd) {
      const std::vector<double> base = parse_x0(sweep_x0);
      struct Axis {
        size_t index;
        double from, to;
        int points;
      };
      std::vector<Axis> axes;
      for (const std::string& s : sweep_specs) {
        Axis ax{};
        int idx = 0;
        if (std::sscanf(s.c_str(), "%d:%lf:%lf:%d", &idx, &ax.from, &ax.to, &ax.points) != 4 ||
            idx < 1 || static_cast<size_t>(idx) > base.size() || ax.points < 1)
          throw std::invalid_argument("bad sweep spec: " + s);
        ax.index = static_cast<size_t>(idx - 1);
        axes.push_back(ax);
      }
      size_t total = 1;
      for (const Axis& ax : axes) total *= static_cast<size_t>(ax.points);

      struct Row {
        std::vector<double> x0;
        mtoc::Verdict verdict;
        double theta;
        int case_id;
      };
      std::vector<Row> rows(total);
      std::atomic<size_t> next{0};
      const unsigned workers = sweep_threads > 0
                                   ? static_cast<unsigned>(sweep_threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
      const mtoc::Config cfg = sweep_tols.cfg;
      auto work = [&]() {
        for (size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
          std::vector<double> x0 = base;
          size_t rest = i;
          for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
            const size_t j = rest % static_cast<size_t>(it->points);
            rest /= static_cast<size_t>(it->points);
            x0[it->index] = it->points == 1
                                ? it->from
                                : it->from + (it->to - it->from) * static_cast<double>(j) /
                                      (it->points - 1);
          }
          Row row;
          row.x0 = x0;
          const mtoc::SolveReport rep = mtoc::solve(x0, cfg);
          row.verdict = rep.verdict;
          row.theta = rep.best() ? rep.best()->theta : std::numeric_limits<double>::quiet_NaN();
          row.case_id = rep.best() ? rep.best()->cse.id : 0;
          rows[i] = std::move(row);
        }
      };
      std::vector<std::thread> pool;
      for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
      work();
      for (auto& t : pool) t.join();

      std::ostringstream os;
      for (size_t j = 1; j <= base.size(); ++j) os << "x" << j << ",";
      os << "verdict,theta,case_id\n";
      for (const Row& row : rows) {
        for (double v : row.x0) os << fmt_double(v) << ',';
        os << verdict_name(row.verdict) << ',' << fmt_double(row.theta) << ',' << row.case_id
           << "\n";
      }
      if (sweep_out.empty())
        std::cout << os.str();
      else
        std::ofstream(sweep_out) << os.str();
      return kExitOk;
    }

    if (*mom_cmd) {
      const std::vector<double> x0 = parse_x0(mom_x0);
      const mtoc::NormalizedState norm = mtoc::normalize_initial_state(x0);
      const double b = mom_b_set ? mom_b : norm.state.x1();
      const mtoc::MomentSequence c = mtoc::assemble_moments(norm.state, mom_a, b, mom_theta);
      mtoc::MomentSequence out = c;
      if (mom_shift == "a")
        out = mtoc::shift_sequence(c, mtoc::ShiftKind::a_shift, mom_a, b);
      else if (mom_shift == "b")
        out = mtoc::shift_sequence(c, mtoc::ShiftKind::b_shift, mom_a, b);
      else if (mom_shift == "ab")
        out = mtoc::shift_sequence(c, mtoc::ShiftKind::ab_shift, mom_a, b);
      else if (mom_shift != "none")
        throw std::invalid_argument("--shift must be one of: a, b, ab");
      if (mom_json) {
        std::cout << json{{"c", out.c}, {"mirrored", norm.mirrored}}.dump(2) << "\n";
      } else {
        for (int j = 1; j <= out.size(); ++j)
          std::cout << "c" << j << (mom_shift == "none" ? "" : "^" + mom_shift) << " = "
                    << fmt_double(out.at1(j)) << "\n";
      }
      return kExitOk;
    }
  } catch (const mtoc::NonGenericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonGeneric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
