#include "bht/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bht/bumps.hpp"
#include "bht/quadrature.hpp"

namespace bht {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// smoothed 1_[a, b]: ramps of total width 2w centred on a and b
double soft_indicator(double z, double a, double b, double w) {
  return smooth_step((z - a + w) / (2.0 * w)) * (1.0 - smooth_step((z - b + w) / (2.0 * w)));
}

template <class Pred>
double bisect(Pred below, double lo, double hi) {
  // below(lo) is true and below(hi) false
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    (below(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double integrate_pieces(const std::function<double(double)>& f, std::vector<double> cuts, std::size_t panels) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += integrate_gl(f, cuts[i], cuts[i + 1], panels, 16);
  return s;
}

}  // namespace

void CounterexampleSpec::validate() const {
  if (d < 2 || n < 2 || n > d) throw std::invalid_argument("counterexample: needs 2 <= n <= d");
  if (!(A >= 100.0)) throw std::invalid_argument("counterexample: needs A >= 100");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("counterexample: needs 0 < delta < 1");
}

double CounterexampleSpec::scale() const { return std::pow(A * factorial(n) * delta, 1.0 / n); }

bool CounterexampleSpec::in_window() const { return 2.0 * scale() < 0.25; }

std::vector<double> q_shifted_coeffs(const CounterexampleSpec& s) {
  s.validate();
  std::vector<double> c(std::size_t(s.d) + 1, 0.0);
  c[1] = 1.0;
  c[std::size_t(s.n)] += 1.0 / (s.A * factorial(s.n));
  c[std::size_t(s.d)] += 1.0 / (s.A * factorial(s.d));
  return c;
}

PolynomialSpec build_Q(const CounterexampleSpec& s) {
  auto shifted = q_shifted_coeffs(s);
  if (shifted[0] != 0.0 || shifted[1] != 1.0) throw std::logic_error("build_Q: Q(1) = 0 and Q'(1) = 1 must hold");
  // (t - 1)^k = sum_i C(k, i) t^i (-1)^{k - i}
  PolynomialSpec p;
  p.coeffs.assign(shifted.size(), 0.0);
  for (int k = 1; k <= s.d; ++k) {
    double c = shifted[std::size_t(k)];
    if (c == 0.0) continue;
    double binom = 1.0;
    for (int i = 0; i <= k; ++i) {
      p.coeffs[std::size_t(i)] += c * binom * ((k - i) % 2 ? -1.0 : 1.0);
      binom = binom * (k - i) / (i + 1);
    }
  }
  return p;
}

double q_nonlinear(const CounterexampleSpec& s, double t) {
  double u = t - 1.0;
  return std::pow(u, s.d) / (s.A * factorial(s.d)) + std::pow(u, s.n) / (s.A * factorial(s.n));
}

IntersectionRoots intersection_roots(const CounterexampleSpec& s) {
  s.validate();
  auto solve = [&](double target) {
    // q_nonlinear is increasing on t > 1
    if (!(q_nonlinear(s, 2.0) > target)) throw std::runtime_error("intersection_roots: root not bracketed in (1, 2]");
    return bisect([&](double t) { return q_nonlinear(s, t) < target; }, 1.0, 2.0);
  };
  double sc = s.scale(), k = 1.0 / s.n;
  IntersectionRoots r;
  r.t1 = {solve(std::ldexp(s.delta, s.n)), 1.0 + std::pow(2.0, 1.0 - k) * sc, 1.0 + 2.0 * sc};
  r.t2 = {solve(s.delta), 1.0 + std::pow(2.0, -k) * sc, 1.0 + sc};
  return r;
}

SharpnessCell sharpness_cell(const CounterexampleSpec& s, double r, double p, double q, const SharpnessOptions& opts) {
  s.validate();
  const double delta = s.delta;
  const double w = 0.5 * opts.mollifier_fraction * delta;
  if (w < 1e-13) throw std::domain_error("sharpness: mollifier width below double resolution near t = 1");
  const double fl = std::ldexp(delta, s.n);  // f = 1_[0, fl]

  auto N = [&](double t) { return q_nonlinear(s, t); };
  auto F = [&](double z) { return soft_indicator(z, 0.0, fl, w); };
  // g(x - Q(t)) with x - Q(t) = s + 1 - N(t), s = x - t
  auto G = [&](double z) { return soft_indicator(z, -delta, 0.0, w); };

  // s solving s - N(x - s) = c; N' is tiny near t = 1 so the fixed point converges at once
  auto s_level = [&](double x, double c) {
    double v = c + N(x);
    for (int it = 0; it < 8; ++it) v = c + N(x - v);
    return v;
  };
  auto T = [&](double x, std::size_t panels) {
    std::vector<double> cuts{-w, w, fl - w, fl + w};
    for (double c : {-delta - w, -delta + w, -w, w}) cuts.push_back(std::clamp(s_level(x, c), -w, fl + w));
    auto integrand = [&](double sv) { return F(sv) * G(sv - N(x - sv)) * rho(x - sv); };
    return integrate_pieces(integrand, cuts, panels);
  };

  // x-support: t with N(t) in [lo, hi], shifted by the f window
  double lo = -2.0 * w, hi = (1 << s.n) * delta + delta + 2.0 * w;
  auto inside = [&](double t) { double v = N(t); return v >= lo && v <= hi; };
  double u_pos = bisect([&](double u) { return inside(1.0 + u); }, 0.0, 0.5);
  double u_neg = bisect([&](double u) { return inside(1.0 - u); }, 0.0, 0.5);
  double x_lo = 1.0 - u_neg - w, x_hi = 1.0 + u_pos + fl + w;

  // kinks of x -> T(x) sit where N(x) crosses 0, delta, 2^n delta, (2^n + 1) delta
  std::vector<double> xcuts{x_lo, x_hi, 1.0};
  for (double c : {0.0, delta, fl, fl + delta})
    for (double e : {-2.0 * w, 0.0, 2.0 * w}) {
      double target = c + e;
      for (double sign : {1.0, -1.0}) {
        double v_end = N(1.0 + sign * 0.5);
        bool up = v_end > 0.0;
        if ((up && target > 0.0 && target < v_end) || (!up && target < 0.0 && target > v_end)) {
          double u = bisect([&](double uu) { double v = N(1.0 + sign * uu); return up ? v < target : v > target; },
                            0.0, 0.5);
          double x = 1.0 + sign * u;
          if (x > x_lo && x < x_hi) xcuts.push_back(x);
        }
      }
    }

  SharpnessCell cell;
  cell.delta = delta;
  cell.lower_bound = std::pow(delta / 2.0, r) * s.scale() / 100.0;
  double prev = -1.0;
  std::size_t panels = 2;
  for (int level = 0; level <= opts.max_refinements; ++level, panels *= 2) {
    std::size_t sp = std::max<std::size_t>(2, panels / 2);
    double v = integrate_pieces([&](double x) { return std::pow(std::abs(T(x, sp)), r); }, xcuts, panels);
    cell.lhs = v;
    if (prev >= 0.0 && std::abs(v - prev) <= opts.rel_tol * v) {
      cell.converged = true;
      break;
    }
    prev = v;
  }

  std::vector<double> fcuts{-w, w, fl - w, fl + w};
  cell.fp_norm = std::pow(integrate_pieces([&](double z) { return std::pow(F(z), p); }, fcuts, 8), 1.0 / p);
  std::vector<double> gcuts{-delta - w, -delta + w, -w, w};
  cell.gq_norm = std::pow(integrate_pieces([&](double z) { return std::pow(G(z), q); }, gcuts, 8), 1.0 / q);

  cell.rho_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 200; ++k) {
    double t = (x_lo - fl - w) + (x_hi - x_lo + fl + w) * k / 200.0;
    cell.rho_min = std::min(cell.rho_min, rho(t));
  }
  return cell;
}

SharpnessResult sharpness_scan(int d, int n, double A, double r, double p, double q, const std::vector<double>& deltas,
                               const SharpnessOptions& opts) {
  if (!(p >= 1.0 && q >= 1.0)) throw std::invalid_argument("sharpness_scan: needs p, q >= 1");
  if (std::abs(1.0 / p + 1.0 / q - 1.0 / r) > 1e-12) throw std::invalid_argument("sharpness_scan: needs 1/p + 1/q = 1/r");
  if (deltas.size() < 4) throw std::invalid_argument("sharpness_scan: needs at least 4 deltas");
  std::vector<CounterexampleSpec> specs;
  for (double dl : deltas) {
    CounterexampleSpec s{d, n, A, dl};
    s.validate();
    if (!s.in_window()) throw std::invalid_argument("sharpness_scan: 2 (A n!)^{1/n} delta^{1/n} must be < 1/4");
    specs.push_back(s);
  }
  SharpnessResult res;
  res.cells.resize(specs.size());
  parallel_for(specs.size(), [&](std::size_t i) { res.cells[i] = sharpness_cell(specs[i], r, p, q, opts); });
  res.scan.scan = "sharpness";
  res.scan.trials_per_cell = 1;
  bool ok = true;
  for (const auto& c : res.cells) {
    res.scan.axis.push_back(std::log2(c.delta));
    res.scan.values.push_back(c.lhs);
    ok = ok && c.converged && c.lhs >= c.lower_bound && c.rho_min >= 0.1;
  }
  res.scan.fit();
  res.fitted_exponent = res.scan.slope;
  res.expected_exponent = r + 1.0 / n;
  res.passes = ok && std::abs(res.fitted_exponent - res.expected_exponent) <= 0.1;
  return res;
}

}  // namespace bht
