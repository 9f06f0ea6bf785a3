#ifndef MOMENTTOC_CONFIG_HPP
#define MOMENTTOC_CONFIG_HPP

#include <stdexcept>

namespace mtoc {

/// Tolerances and knobs shared across the solver pipeline. Defaults are
/// scale-relative unless noted; every value can be overridden from the CLI.
struct Config {
  double tol_root = 1e-10;  ///< relative residual bound for polished roots
  double tol_pd = 1e-9;     ///< positive-definiteness margin (relative)
  double tol_sing = 1e-7;   ///< diagnostic singularity threshold (relative)
  double tol_sim = 1e-8;    ///< endpoint residual bound, times (1+|x0|_inf)

  double endpoint_slack = 1e-9;     ///< strictness margin for a<0, b>x1
  double root_merge_tol = 1e-7;     ///< near-multiple root clustering
  double dedup_tol = 1e-7;          ///< cross-case candidate dedup in (a,b,theta)
  double moment_consistency_tol = 1e-6;  ///< unused-equation residual, times max(1,|c|_inf)
};

/// Raised when the input lies outside the generic-point analysis
/// (x1 component zero, or a degenerate endpoint equation system).
struct NonGenericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mtoc

#endif  // MOMENTTOC_CONFIG_HPP
