#include "momenttoc/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "momenttoc/config.hpp"

namespace mtoc {

namespace {

// Neumaier-compensated sum of a few addends.
double compensated_sum(std::initializer_list<double> terms) {
  double s = 0.0, comp = 0.0;
  for (double v : terms) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      comp += (s - t) + v;
    else
      comp += (v - t) + s;
    s = t;
  }
  return s + comp;
}

double int_pow(double x, int p) {
  double acc = 1.0;
  for (int i = 0; i < p; ++i) acc *= x;
  return acc;
}

}  // namespace

double InitialState::inf_norm() const {
  double m = 0.0;
  for (double v : x0) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> mirror_state(std::span<const double> x0) {
  std::vector<double> y(x0.begin(), x0.end());
  y[0] = -y[0];
  for (size_t j = 1; j < y.size(); j += 2) y[j] = -y[j];  // even components flip
  return y;
}

NormalizedState normalize_initial_state(std::span<const double> x0raw) {
  if (x0raw.size() < 4)
    throw std::invalid_argument("normalize_initial_state: need dimension n >= 4");
  for (double v : x0raw)
    if (!std::isfinite(v)) throw std::invalid_argument("normalize_initial_state: non-finite entry");
  if (x0raw[0] == 0.0)
    throw NonGenericError("initial point has x1 = 0; outside the generic analysis");
  NormalizedState out;
  if (x0raw[0] > 0.0) {
    out.state.x0.assign(x0raw.begin(), x0raw.end());
    out.mirrored = false;
  } else {
    out.state.x0 = mirror_state(x0raw);
    out.mirrored = true;
  }
  return out;
}

MomentSequence assemble_moments(const InitialState& x0, double a, double b, double theta) {
  if (a > 0.0) throw std::invalid_argument("assemble_moments: requires a <= 0");
  if (b < x0.x1()) throw std::invalid_argument("assemble_moments: requires b >= x1");
  if (theta < 0.0) throw std::invalid_argument("assemble_moments: requires theta >= 0");

  const int n = x0.n();
  MomentSequence c;
  c.c.resize(static_cast<size_t>(n));
  c.at1(1) = compensated_sum({theta, x0.x1(), -2.0 * b, 2.0 * a});
  double x1p = x0.x1(), ap = a, bp = b;
  for (int j = 2; j <= n; ++j) {
    x1p *= x0.x1();
    ap *= a;
    bp *= b;
    c.at1(j) = compensated_sum({-x0.x0[static_cast<size_t>(j - 1)], x1p / j, -2.0 * bp / j,
                                2.0 * ap / j});
  }
  return c;
}

MomentPolynomials case_polynomials(const InitialState& x0, const CaseDescriptor& cse) {
  const int n = x0.n();
  const double x1 = x0.x1();

  MomentPolynomials mp;
  // c1 = theta + x1 - 2b + 2a with pinned endpoints substituted.
  BivariatePoly c1 = BivariatePoly::constant(x1);
  c1 += cse.b_fixed ? BivariatePoly::constant(-2.0 * x1) : -2.0 * BivariatePoly::var_b();
  if (!cse.a_fixed) c1 += 2.0 * BivariatePoly::var_a();
  mp.c1_offset = c1;

  mp.cj.reserve(static_cast<size_t>(n - 1));
  for (int j = 2; j <= n; ++j) {
    BivariatePoly cj = BivariatePoly::constant(
        -x0.x0[static_cast<size_t>(j - 1)] + int_pow(x1, j) / j);
    if (cse.b_fixed)
      cj += BivariatePoly::constant(-2.0 * int_pow(x1, j) / j);
    else {
      std::vector<Polynomial> coeffs(static_cast<size_t>(j) + 1);
      coeffs.back() = Polynomial::constant(-2.0 / j);
      cj += BivariatePoly(std::move(coeffs));
    }
    if (!cse.a_fixed)
      cj += BivariatePoly::from_poly_in_a(Polynomial::monomial(j, 2.0 / j));
    mp.cj.push_back(std::move(cj));
  }
  return mp;
}

}  // namespace mtoc
