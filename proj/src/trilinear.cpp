#include "bht/trilinear.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "bht/bumps.hpp"
#include "bht/oscsym.hpp"

namespace bht {

namespace {

constexpr double kSuppLo = 1.0 / 16.0, kSuppHi = 39.0 / 16.0;

void check_support(const FreqFunction& f, const Grid1D& g, const char* name) {
  for (std::size_t k = 0; k < g.count; ++k) {
    double xi = g.frequency(k);
    double a = std::abs(xi);
    if ((a < kSuppLo || a > kSuppHi) && f(xi) != cplx(0.0))
      throw std::invalid_argument(std::string("trilinear form: ") + name +
                                  " is nonzero outside 1/16 <= |xi| <= 39/16");
  }
}

// the function with series coefficients f(xi_k) / P
SampledSignal inverse_transform(const FreqFunction& f, const Grid1D& g) {
  cvec c(g.count);
  double P = g.period();
  for (std::size_t k = 0; k < g.count; ++k) c[k] = f(g.frequency(k)) / P;
  return synthesize(g, c, Band::full(g));
}

double sup_on_grid(const FreqFunction& f, const Grid1D& g) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.count; ++k) s = std::max(s, std::abs(f(g.frequency(k))));
  return s;
}

TrilinearResult pair_restriction(const DyadicParams& p, const FreqFunction& f1, const FreqFunction& f2,
                                 const FreqFunction& f3, double base, bool cell) {
  p.validate();
  auto G = bjm_grids(p, base, cell);
  if (cell) {
    check_support(f1, G.f, "f1");
    check_support(f2, G.g, "f2");
    check_support(f3, G.out, "f3");
  }
  auto F1 = inverse_transform(f1, G.f);
  auto F2 = inverse_transform(f2, G.g);
  auto F3 = inverse_transform(f3, G.out);
  auto B = cell ? apply_Bjmn(p, F1, F2, G.out) : apply_Bjm(p, F1, F2, G.out);
  TrilinearResult r;
  r.value = inner(B, F3);
  r.params = p;
  r.norms[0] = l2_norm(F1);
  r.norms[1] = l2_norm(F2);
  if (cell) {
    r.norm_kind = NormKind::l2_l2_linf_transform;
    r.norms[2] = sup_on_grid(f3, G.out);
  } else {
    r.norm_kind = NormKind::l2_l2_l2;
    r.norms[2] = l2_norm(F3);
  }
  double den = r.norms[0] * r.norms[1] * r.norms[2];
  r.normalized = den > 0.0 ? std::abs(r.value) / den : 0.0;
  return r;
}

// f sampled on bins: value table indexed by round(xi P)
FreqFunction bin_table(double P, std::map<long, cplx> table) {
  FreqFunction f;
  f.f = [P, t = std::move(table)](double xi) {
    auto it = t.find(std::lround(xi * P));
    return it == t.end() ? cplx(0.0) : it->second;
  };
  return f;
}

double star_exponent_p(int d) { return double(d) / double(d - 1); }
double star_exponent_q(int d) { return 1.0 / double(d - 1); }

int trapezoid_points(double len, double rate, const StarQuadOptions& q) {
  double n = q.oversample * len * rate / (0.75 * M_PI);
  if (!(n < 5e7)) throw std::invalid_argument("lambda_star: quadrature grid too large");
  return static_cast<int>(std::ceil(n)) + std::max(q.min_points, 3);
}

// int int f1 W(xi) f2 W(eta) f3(bx xi + by eta) exp(i A xi^p eta^{-q}) over W = phi_hat on (0, inf)
TrilinearResult star_form(int d, int m, double bx, double by, const FreqFunction& f1, const FreqFunction& f2,
                          const FreqFunction& f3, const StarQuadOptions& q) {
  if (d < 2) throw std::invalid_argument("lambda_star: d must be >= 2");
  if (!f1.bounded() || !f2.bounded() || !f3.bounded())
    throw std::invalid_argument("lambda_star: inputs need bounded support");
  TrilinearResult r;
  r.params.d = d;
  r.params.m = m;
  r.norm_kind = NormKind::l2_l2_l2;
  r.norms[0] = freq_l2_norm(f1);
  r.norms[1] = freq_l2_norm(f2);
  r.norms[2] = freq_l2_norm(f3);
  double x0 = std::max(0.5, f1.lo), x1 = std::min(2.0, f1.hi);
  double y0 = std::max(0.5, f2.lo), y1 = std::min(2.0, f2.hi);
  if (!(x1 > x0) || !(y1 > y0)) return r;

  const double pe = star_exponent_p(d), qe = star_exponent_q(d);
  const double A = q.kernel_scale * chirp_constant(d) * std::exp2(m);
  double rx = std::abs(A) * pe * std::pow(x1, pe - 1.0) * std::pow(y0, -qe) + f1.rate + std::abs(bx) * f3.rate;
  double ry = std::abs(A) * qe * std::pow(x1, pe) * std::pow(y0, -qe - 1.0) + f2.rate + std::abs(by) * f3.rate;
  int nx = trapezoid_points(x1 - x0, rx, q), ny = trapezoid_points(y1 - y0, ry, q);
  double hx = (x1 - x0) / (nx - 1), hy = (y1 - y0) / (ny - 1);

  std::vector<double> xs(nx), xp(nx);
  cvec w1(nx);
  for (int k = 0; k < nx; ++k) {
    double x = k == nx - 1 ? x1 : x0 + k * hx;
    xs[k] = x;
    xp[k] = std::pow(x, pe);
    double w = (k == 0 || k == nx - 1) ? 0.5 * hx : hx;
    w1[k] = w * f1(x) * phi_hat(x);
  }
  cvec rows(ny, 0.0);
  parallel_for(static_cast<std::size_t>(ny), [&](std::size_t l) {
    double y = l == std::size_t(ny - 1) ? y1 : y0 + double(l) * hy;
    double w = (l == 0 || l == std::size_t(ny - 1)) ? 0.5 * hy : hy;
    cplx w2 = w * f2(y) * phi_hat(y);
    if (w2 == cplx(0.0)) return;
    double Ay = A * std::pow(y, -qe);
    cplx s = 0.0;
    if (bx == 0.0) {
      cplx v3 = f3(by * y);
      if (v3 == cplx(0.0)) return;
      for (int k = 0; k < nx; ++k) s += w1[k] * std::polar(1.0, Ay * xp[k]);
      s *= v3;
    } else {
      for (int k = 0; k < nx; ++k) {
        if (w1[k] == cplx(0.0)) continue;
        s += w1[k] * f3(bx * xs[k] + by * y) * std::polar(1.0, Ay * xp[k]);
      }
    }
    rows[l] = w2 * s;
  });
  for (const auto& v : rows) r.value += v;
  double den = r.norms[0] * r.norms[1] * r.norms[2];
  r.normalized = den > 0.0 ? std::abs(r.value) / den : 0.0;
  return r;
}

}  // namespace

TrilinearResult lambda_jm(const DyadicParams& p, const FreqFunction& f1, const FreqFunction& f2,
                          const FreqFunction& f3, double base) {
  return pair_restriction(p, f1, f2, f3, base, false);
}

TrilinearResult lambda_jmn(const DyadicParams& p, const FreqFunction& f1, const FreqFunction& f2,
                           const FreqFunction& f3, double base) {
  return pair_restriction(p, f1, f2, f3, base, true);
}

std::vector<long> covering_cells(const DyadicParams& p, double base) {
  auto G = bjm_grids(p, base, true);
  int k = (p.d - 1) * std::abs(p.j) + p.m;
  double len = std::ldexp(1.0, k), slack = 8.0 * kMollifierHalfWidth;
  long lo = static_cast<long>(std::floor((G.out.origin - slack) / len));
  long hi = static_cast<long>(std::floor((G.out.origin + G.out.period() + slack) / len));
  std::vector<long> cells;
  for (long n = lo; n <= hi; ++n) cells.push_back(n);
  return cells;
}

cplx lambda_jm_frequency_sum(const DyadicParams& p, const FreqFunction& f1, const FreqFunction& f2,
                             const FreqFunction& f3, double base, bool wide_window) {
  p.validate();
  auto G = bjm_grids(p, base, wide_window);
  double Pf = G.f.period(), Pg = G.g.period();
  double wlo = wide_window ? 1.0 / 8.0 : 0.5, whi = wide_window ? 19.0 / 8.0 : 2.0;
  auto W = [wide_window](double x) { return wide_window ? phi1_hat(x) : phi_hat(x); };
  double s = std::exp2(double(p.d - 1) * std::abs(p.j));
  double pref = 1.0 / std::sqrt(s);
  double scale = std::exp2(p.m);

  struct Term {
    double x;
    cplx v;
  };
  auto collect = [&](const FreqFunction& f, double P) {
    std::vector<Term> t;
    long kmax = static_cast<long>(std::ceil(whi * P));
    for (long k = -kmax; k <= kmax; ++k) {
      double x = double(k) / P;
      if (std::abs(x) <= wlo || std::abs(x) >= whi) continue;
      cplx v = f(x) * W(x) / P;
      if (v != cplx(0.0)) t.push_back({x, v});
    }
    return t;
  };
  auto a = collect(f1, Pf), b = collect(f2, Pg);
  cvec part(a.size(), 0.0);
  parallel_for(a.size(), [&](std::size_t i) {
    cplx acc = 0.0;
    for (const auto& e : b) {
      double out = p.j > 0 ? a[i].x / s + e.x : a[i].x + e.x / s;
      cplx md = symbol_md(p.d, scale * a[i].x, scale * e.x).value;
      acc += a[i].v * e.v * md * std::conj(f3(out));
    }
    part[i] = acc;
  });
  cplx total = 0.0;
  for (const auto& v : part) total += v;
  return pref * total;
}

TrilinearResult lambda_trial(const DyadicParams& p, int trial, std::uint64_t seed, double base) {
  p.validate();
  auto G = bjm_grids(p, base, false);
  auto draw = [&](const Grid1D& g, std::int64_t slot) {
    Rng rng = Rng::keyed(seed, {p.m, trial, slot});
    std::map<long, cplx> tab;
    double P = g.period();
    long kmax = static_cast<long>(std::ceil(2.0 * P));
    for (long k = -kmax; k <= kmax; ++k) {
      double a = std::abs(double(k) / P);
      if (a > 0.5 && a < 2.0 && a < g.nyquist()) tab[k] = rng.complex_normal();
    }
    return bin_table(P, std::move(tab));
  };
  auto f1 = draw(G.f, 0), f2 = draw(G.g, 1);
  // f3 = P_out times the output coefficients makes the pairing equal ||B||^2
  auto B = apply_Bjm(p, inverse_transform(f1, G.f), inverse_transform(f2, G.g), G.out);
  auto c = series_coeffs(B);
  std::map<long, cplx> tab;
  double P = G.out.period();
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != cplx(0.0)) tab[std::lround(G.out.frequency(k) * P)] = P * c[k];
  auto f3 = bin_table(P, std::move(tab));
  auto r = lambda_jm(p, f1, f2, f3, base);
  r.seed = seed;
  return r;
}

DecayScanResult lambda_decay_scan(int d, int j, int m_lo, int m_hi, int trials, std::uint64_t seed, double base) {
  if (m_hi < m_lo || trials < 1) throw std::invalid_argument("lambda_decay_scan: empty scan");
  DecayScanResult res;
  res.scan = "lambda_jm";
  res.trials_per_cell = trials;
  res.seed = seed;
  for (int m = m_lo; m <= m_hi; ++m) {
    DyadicParams p;
    p.d = d;
    p.j = j;
    p.m = m;
    double best = 0.0;
    for (int t = 0; t < trials; ++t) best = std::max(best, lambda_trial(p, t, seed, base).normalized);
    res.axis.push_back(m);
    res.values.push_back(best);
  }
  res.fit();
  return res;
}

double freq_l2_norm(const FreqFunction& f, int min_points) {
  if (!f.bounded()) throw std::invalid_argument("freq_l2_norm: unbounded support");
  double len = f.hi - f.lo;
  double n = std::max(double(min_points), 4.0 * len * 2.0 * f.rate / (0.75 * M_PI) + 1.0);
  if (!(n < 5e7)) throw std::invalid_argument("freq_l2_norm: grid too large");
  int N = static_cast<int>(std::ceil(n));
  double h = len / (N - 1), acc = 0.0;
  for (int k = 0; k < N; ++k) {
    double x = k == N - 1 ? f.hi : f.lo + k * h;
    double w = (k == 0 || k == N - 1) ? 0.5 : 1.0;
    acc += w * std::norm(f.f(x));
  }
  return std::sqrt(acc * h);
}

TrilinearResult lambda_star_jm(const DyadicParams& p, const FreqFunction& f1, const FreqFunction& f2,
                               const FreqFunction& f3, const StarQuadOptions& q) {
  double s = std::exp2(-double(p.d - 1) * std::abs(p.j));
  auto r = p.j > 0 ? star_form(p.d, p.m, s, 1.0, f1, f2, f3, q) : star_form(p.d, p.m, 1.0, s, f1, f2, f3, q);
  r.params = p;
  return r;
}

TrilinearResult lambda_star_limit(int d, int m, const FreqFunction& f1, const FreqFunction& f2,
                                  const FreqFunction& f3, const StarQuadOptions& q) {
  return star_form(d, m, 0.0, 1.0, f1, f2, f3, q);
}

WitnessInputs witness_inputs(int d, int m) {
  const double eta0 = 1.0, pe = star_exponent_p(d), qe = star_exponent_q(d);
  const double A = chirp_constant(d) * std::exp2(m) * std::pow(eta0, -qe);
  WitnessInputs w;
  double amp = 1.0 / std::sqrt(1.5);
  w.f1.f = [A, pe, amp](double x) { return amp * std::polar(1.0, -A * std::pow(x, pe)); };
  w.f1.lo = 0.5;
  w.f1.hi = 2.0;
  w.f1.rate = A * pe * std::pow(2.0, pe - 1.0);
  double half = std::exp2(-m) / 2.0;
  w.f2.f = [eta0, half](double y) { return cplx(bump_template((y - eta0) / half)); };
  w.f2.lo = eta0 - half;
  w.f2.hi = eta0 + half;
  w.f3 = w.f2;
  return w;
}

FreqFunction random_window_signal(std::uint64_t seed, std::int64_t trial) {
  Rng rng = Rng::keyed(seed, {trial, 91});
  cvec c(9);
  double e = 0.0;
  for (auto& z : c) {
    z = rng.complex_normal();
    e += std::norm(z);
  }
  // the interval modes are orthogonal with norm^2 3/2
  double s = 1.0 / std::sqrt(1.5 * e);
  for (auto& z : c) z *= s;
  FreqFunction f;
  f.f = [c](double x) {
    cplx v = 0.0;
    for (int k = -4; k <= 4; ++k) v += c[std::size_t(k + 4)] * std::polar(1.0, kTwoPi * k * (x - 0.5) / 1.5);
    return v;
  };
  f.lo = 0.5;
  f.hi = 2.0;
  f.rate = kTwoPi * 4.0 / 1.5;
  return f;
}

TrilinearResult failure_witness(int d, int m, const StarQuadOptions& q) {
  auto w = witness_inputs(d, m);
  return lambda_star_limit(d, m, w.f1, w.f2, w.f3, q);
}

TrilinearResult failure_contrast(int d, int m, std::uint64_t seed, const StarQuadOptions& q) {
  auto w = witness_inputs(d, m);
  auto r = lambda_star_limit(d, m, random_window_signal(seed, m), w.f2, w.f3, q);
  r.seed = seed;
  return r;
}

SampledSignal multiplier_input(const SampledSignal& f) {
  SampledSignal g = f;
  for (std::size_t k = 0; k < g.samples.size(); ++k) g.samples[k] *= phi1_hat(g.grid.point(k));
  return g;
}

PhaseFamilyPoint multiplier_probe_point(const MultiplierSpec& s, double probe) {
  if (!(probe > 0.0)) throw std::invalid_argument("multiplier: probe points must be positive");
  double A = chirp_constant(s.d) * std::exp2(s.m);
  double b = -kTwoPi * std::exp2(-double(s.d - 1) * std::abs(s.j)) * s.alpha();
  if (s.side == MultiplierSide::positive_j)
    return PhaseFamilyPoint{PhaseFamily::Q1, -A * std::pow(probe, -star_exponent_q(s.d)), b, s.m, s.d};
  return PhaseFamilyPoint{PhaseFamily::Q2, -A * std::pow(probe, star_exponent_p(s.d)), b, s.m, s.d};
}

cvec multiplier_mdjm(const MultiplierSpec& s, const SampledSignal& f, const std::vector<double>& probes) {
  if (s.d < 2) throw std::invalid_argument("multiplier: d must be >= 2");
  if (!(f.grid.origin > 0.0)) throw std::invalid_argument("multiplier: input interval must lie in (0, inf)");
  const double A = chirp_constant(s.d) * std::exp2(s.m);
  const double lin = kTwoPi * std::exp2(-double(s.d - 1) * std::abs(s.j)) * s.alpha();
  const double pe = star_exponent_p(s.d), qe = star_exponent_q(s.d);
  const std::size_t n = f.samples.size();
  cvec w(n);
  std::vector<double> x(n), xp(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = f.grid.point(k);
    w[k] = f.samples[k] * phi1_hat(x[k]);
    xp[k] = s.side == MultiplierSide::positive_j ? std::pow(x[k], pe) : std::pow(x[k], -qe);
  }
  for (double v : probes)
    if (!(v > 0.0)) throw std::invalid_argument("multiplier: probe points must be positive");
  cvec out(probes.size());
  parallel_for(probes.size(), [&](std::size_t i) {
    double v = probes[i];
    double a = s.side == MultiplierSide::positive_j ? A * std::pow(v, -qe) : A * std::pow(v, pe);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += w[k] * std::polar(1.0, a * xp[k] + lin * x[k]);
    out[i] = acc * f.grid.step;
  });
  return out;
}

double gamma_jm(int d, int j, int m, double eps0) {
  if (m < 0) throw std::invalid_argument("gamma_jm: m must be >= 0");
  if (d < 2) throw std::invalid_argument("gamma_jm: d must be >= 2");
  double k = double(d - 1) * std::abs(j);
  if (k <= m) return std::exp2((k - m) / 8.0);
  return std::max(std::exp2((m - k) / 3.0), std::exp2(-eps0 * m));
}

double gamma_jm(int d, int j, int m) { return gamma_jm(d, j, m, 1.0 / (8.0 * d)); }

double gamma_m_sum(int d, int j, int m_max, double eps0) {
  double s = 0.0;
  for (int m = 0; m <= m_max; ++m) s += gamma_jm(d, j, m, eps0);
  return s;
}

}  // namespace bht
