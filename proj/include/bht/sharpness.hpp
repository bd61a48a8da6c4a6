#pragma once

#include <vector>

#include "bht/foundation.hpp"
#include "bht/harness.hpp"
#include "bht/operators.hpp"

namespace bht {

struct CounterexampleSpec {
  int d = 2;
  int n = 2;
  double A = 1e4;
  double delta = 1e-6;

  // 2 <= n <= d, A >= 100, 0 < delta < 1
  void validate() const;
  // (A n!)^{1/n} delta^{1/n}
  double scale() const;
  // 2 scale() < 1/4: the intersection geometry stays near t = 1
  bool in_window() const;
};

// Q(t) = (t-1)^d / (A d!) + (t-1)^n / (A n!) + (t-1) in ascending powers of t
PolynomialSpec build_Q(const CounterexampleSpec& s);
// the same polynomial in ascending powers of (t - 1); entries 0 and 1 are exactly 0 and 1
std::vector<double> q_shifted_coeffs(const CounterexampleSpec& s);

// Q(t) + 1 - t, evaluated in the shifted form
double q_nonlinear(const CounterexampleSpec& s, double t);

struct RootEnclosure {
  double root = 0.0;
  double lo = 0.0;  // stated lower bound
  double hi = 0.0;  // stated upper bound
  bool holds(double tol = 1e-12) const { return root >= lo - tol && root <= hi + tol; }
};
struct IntersectionRoots {
  RootEnclosure t1;  // Q(t) + 1 = t + 2^n delta, t > 1
  RootEnclosure t2;  // Q(t) + 1 - delta = t, t > 1
};
// bisection to 1e-12; throws std::runtime_error when a root is not bracketed in (1, 2]
IntersectionRoots intersection_roots(const CounterexampleSpec& s);

struct SharpnessOptions {
  double mollifier_fraction = 1.0 / 100.0;  // indicator ramps have total width fraction * delta
  double rel_tol = 1e-6;                    // panel doubling stops when ||T||_r^r changes less than this
  int max_refinements = 6;
};

struct SharpnessCell {
  double delta = 0.0;
  double lhs = 0.0;          // ||T_Q(f_delta, g_delta)||_r^r
  double lower_bound = 0.0;  // (delta/2)^r (A n!)^{1/n} delta^{1/n} / 100
  double fp_norm = 0.0;      // ||f_delta||_p of the mollified indicator
  double gq_norm = 0.0;      // ||g_delta||_q of the mollified indicator
  double rho_min = 0.0;      // min of rho over the x-support of T
  bool converged = false;
};

struct SharpnessResult {
  DecayScanResult scan;  // axis log2(delta), values lhs
  std::vector<SharpnessCell> cells;
  double fitted_exponent = 0.0;
  double expected_exponent = 0.0;  // r + 1/n
  bool passes = false;             // exponent within 0.1, every lower bound met, rho >= 0.1, all converged
};

// ||T_Q(f, g)||_r^r with f = 1_[0, 2^n delta], g = 1_[1 - delta, 1] mollified, T_Q(f, g)(x) =
// int f(x - t) g(x - Q(t)) rho(t) dt
SharpnessCell sharpness_cell(const CounterexampleSpec& s, double r, double p, double q,
                             const SharpnessOptions& opts = {});

// needs 1/p + 1/q = 1/r, p, q >= 1, and every delta in the window of CounterexampleSpec; deltas are
// independent and run in parallel
SharpnessResult sharpness_scan(int d, int n, double A, double r, double p, double q, const std::vector<double>& deltas,
                               const SharpnessOptions& opts = {});

}  // namespace bht
