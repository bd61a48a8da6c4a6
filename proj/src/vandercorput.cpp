#include "bht/vandercorput.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bht/bumps.hpp"
#include "bht/quadrature.hpp"

namespace bht {

namespace {

double root(double y, int d) { return std::pow(y, 1.0 / double(d)); }

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// Gauss-Legendre nodes on [a, b] split at `breaks`, each of `segments` pieces per smooth part getting
// enough panels for `cycles` phase cycles per panel at the largest sampled |rate|
Nodes adaptive_nodes(double a, double b, const std::function<double(double)>& rate, double cycles, int order,
                     std::vector<double> breaks = {}, int segments = 32) {
  Nodes out;
  if (!(b > a)) return out;
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
    if (!(hi > lo)) continue;
    double h = (hi - lo) / segments;
    for (int s = 0; s < segments; ++s) {
      double s0 = lo + s * h, s1 = s == segments - 1 ? hi : s0 + h;
      double r = 0.0;
      for (int k = 0; k <= 8; ++k) r = std::max(r, std::abs(rate(s0 + (s1 - s0) * k / 8.0)));
      r *= 1.25;
      auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((s1 - s0) * r / (kTwoPi * cycles))));
      auto n = composite_gl(s0, s1, panels, static_cast<std::size_t>(order));
      out.x.insert(out.x.end(), n.x.begin(), n.x.end());
      out.w.insert(out.w.end(), n.w.begin(), n.w.end());
    }
  }
  return out;
}

bool close_enough(cplx a, cplx b, const OscFormOptions& o) {
  return std::abs(a - b) <= o.abs_tol + o.rel_tol * std::max(std::abs(a), std::abs(b));
}

using BatchEval = std::function<cvec(const std::vector<double>&)>;

OscFormResult osc_form_core(const VdcPhase& phase, double lambda, const BatchEval& F, const BatchEval& G,
                            Interval I1, Interval I2, const OscFormOptions& opts) {
  phase.validate();
  if (!(I1.hi > I1.lo) || !(I2.hi > I2.lo)) throw std::invalid_argument("bilinear_osc_form: empty interval");
  // sampled gradient of lambda * phi
  const int S = 33;
  std::vector<double> sx(S), sy(S), rx(S, 0.0), ry(S, 0.0);
  for (int i = 0; i < S; ++i) {
    sx[i] = I1.lo + (i + 0.5) / S * I1.length();
    sy[i] = I2.lo + (i + 0.5) / S * I2.length();
  }
  double hx = 1e-6 * I1.length(), hy = 1e-6 * I2.length();
  for (int i = 0; i < S; ++i)
    for (int k = 0; k < S; ++k) {
      double dx = (phase.value(sx[i] + hx, sy[k]) - phase.value(sx[i] - hx, sy[k])) / (2 * hx);
      double dy = (phase.value(sx[i], sy[k] + hy) - phase.value(sx[i], sy[k] - hy)) / (2 * hy);
      rx[i] = std::max(rx[i], std::abs(lambda * dx));
      ry[k] = std::max(ry[k], std::abs(lambda * dy));
    }
  auto sampled_rate = [](const std::vector<double>& s, const std::vector<double>& r, Interval I) {
    return [&s, &r, I](double x) {
      int n = int(s.size());
      int i = std::clamp(int((x - I.lo) / I.length() * n), 0, n - 1);
      return std::max({r[i], r[std::max(i - 1, 0)], r[std::min(i + 1, n - 1)]});
    };
  };
  auto rate_x = sampled_rate(sx, rx, I1);
  auto rate_y = sampled_rate(sy, ry, I2);

  OscFormResult res;
  cplx prev = 0.0;
  double cycles = opts.cycles_per_panel;
  for (int r = 0; r <= opts.max_refinements + 1; ++r, cycles *= 0.5) {
    auto nx = adaptive_nodes(I1.lo, I1.hi, rate_x, cycles, opts.order);
    auto ny = adaptive_nodes(I2.lo, I2.hi, rate_y, cycles, opts.order);
    cvec fx = F(nx.x), gy = G(ny.x);
    cvec rows(nx.x.size(), 0.0);
    parallel_for(nx.x.size(), [&](std::size_t i) {
      cplx a = fx[i] * nx.w[i];
      if (a == cplx(0.0)) return;
      cplx s = 0.0;
      for (std::size_t k = 0; k < ny.x.size(); ++k)
        s += gy[k] * ny.w[k] * std::polar(1.0, lambda * phase.value(nx.x[i], ny.x[k]));
      rows[i] = a * s;
    });
    cplx v = 0.0;
    for (const auto& z : rows) v += z;
    res.nodes = nx.x.size() * ny.x.size();
    if (r > 0) {
      res.error_estimate = std::abs(v - prev);
      if (close_enough(v, prev, opts)) {
        res.value = v;
        res.converged = true;
        return res;
      }
    }
    prev = v;
    res.value = v;
  }
  return res;
}

double mixed3(const VdcPhase& p, double x, double y, double h) {
  auto dxx = [&](double yy) { return p.value(x + h, yy) - 2.0 * p.value(x, yy) + p.value(x - h, yy); };
  return (dxx(y + h) - dxx(y - h)) / (2.0 * h * h * h);
}

int regime_j(int d, int m) { return static_cast<int>(std::ceil(double(m) / double(d - 1))) + 2; }

}  // namespace

double dexp(int ell, double eps) {
  if (ell < 1) throw std::invalid_argument("dexp: ell must be >= 1");
  if (ell >= 2) return 1.0 / (2.0 * ell);
  if (!(eps > 0.0)) throw std::invalid_argument("dexp: eps must be positive");
  return 1.0 / (2.0 + eps);
}

double VdcPhase::value(double x, double y) const {
  switch (kind) {
    case VdcKind::generic:
      return fn(x, y);
    case VdcKind::Q_cjtau: {
      double s = std::exp2(-double(d - 1) * j);
      return std::pow(x - root(y, d) + c, d) - std::pow(x + s * tau - root(y + tau, d) + c, d);
    }
    case VdcKind::phi_djm:
      return C * std::exp2(m) * std::pow(x - root(y, d) + c, d);
    case VdcKind::phi_djm_neg:
      return C * std::exp2(m) * root(x - std::pow(y, d), d);
    case VdcKind::phi_djm_tau: {
      double s = std::exp2(double(d - 1) * j);
      return root(x - std::pow(y, d), d) - root(x + s * tau - std::pow(y + tau, d), d);
    }
  }
  return 0.0;
}

void VdcPhase::validate() const {
  if (kind == VdcKind::generic) {
    if (!fn) throw std::invalid_argument("VdcPhase: generic phase without a function");
    if (ell < 1) throw std::invalid_argument("VdcPhase: ell must be >= 1");
    return;
  }
  if (d < 2) throw std::invalid_argument("VdcPhase: d must be >= 2");
  if (kind == VdcKind::phi_djm || kind == VdcKind::phi_djm_neg) {
    double a = std::abs(C);
    if (!(a >= std::exp2(-200) && a <= std::exp2(200)))
      throw std::invalid_argument("VdcPhase: |C| must lie in [2^-200, 2^200]");
  }
}

VdcPhase VdcPhase::generic(std::function<double(double, double)> fn, int ell) {
  VdcPhase p;
  p.kind = VdcKind::generic;
  p.fn = std::move(fn);
  p.ell = ell;
  p.validate();
  return p;
}

VdcPhase VdcPhase::Q(int d, double c, int j, double tau) {
  VdcPhase p;
  p.kind = VdcKind::Q_cjtau;
  p.d = d;
  p.c = c;
  p.j = j;
  p.tau = tau;
  p.ell = d - 1;
  p.validate();
  return p;
}

VdcPhase VdcPhase::phi_djm(int d, int j, int m, double C, double c) {
  VdcPhase p;
  p.kind = VdcKind::phi_djm;
  p.d = d;
  p.j = j;
  p.m = m;
  p.C = C;
  p.c = c;
  p.ell = d - 1;
  p.validate();
  return p;
}

VdcPhase VdcPhase::phi_djm_neg(int d, int j, int m, double C) {
  VdcPhase p;
  p.kind = VdcKind::phi_djm_neg;
  p.d = d;
  p.j = j;
  p.m = m;
  p.C = C;
  p.validate();
  return p;
}

VdcPhase VdcPhase::phi_djm_tau(int d, int j, double tau) {
  VdcPhase p;
  p.kind = VdcKind::phi_djm_tau;
  p.d = d;
  p.j = j;
  p.tau = tau;
  p.validate();
  return p;
}

OscFormResult bilinear_osc_form(const VdcPhase& phase, double lambda, const ScalarFn& f, const ScalarFn& g,
                                Interval I1, Interval I2, const OscFormOptions& opts) {
  auto wrap = [](const ScalarFn& h) {
    return [&h](const std::vector<double>& xs) {
      cvec v(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) v[i] = h(xs[i]);
      return v;
    };
  };
  return osc_form_core(phase, lambda, wrap(f), wrap(g), I1, I2, opts);
}

OscFormResult bilinear_osc_form(const VdcPhase& phase, double lambda, const SampledSignal& f,
                                const SampledSignal& g, Interval I1, Interval I2, const OscFormOptions& opts) {
  auto wrap = [](const SampledSignal& s) {
    return [&s](const std::vector<double>& xs) { return interpolate(s, xs); };
  };
  return osc_form_core(phase, lambda, wrap(f), wrap(g), I1, I2, opts);
}

bool ell1_hypothesis_holds(const VdcPhase& phase, Interval I1, Interval I2) {
  const int S = 33;
  double h = 1e-3 * std::min(I1.length(), I2.length());
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i < S; ++i)
    for (int k = 0; k < S; ++k) {
      double x = I1.lo + (i + 0.5) / S * I1.length(), y = I2.lo + (k + 0.5) / S * I2.length();
      double v = mixed3(phase, x, y, h);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  // one sign throughout, bounded away from 0 relative to its size
  double scale = std::max(std::abs(lo), std::abs(hi));
  return scale > 0.0 && (lo > 1e-6 * scale || hi < -1e-6 * scale);
}

DecayScanResult osc_form_scan(const VdcPhase& phase, Interval I1, Interval I2, int k_lo, int k_hi,
                              const OscFormOptions& opts) {
  phase.validate();
  if (phase.ell == 1 && !ell1_hypothesis_holds(phase, I1, I2))
    throw std::invalid_argument("osc_form_scan: ell = 1 needs d_x^2 d_y phi != 0 on the box");
  DecayScanResult res;
  res.scan = "vdc_form";
  res.trials_per_cell = 1;
  ScalarFn one = [](double) { return cplx(1.0); };
  double norm = std::sqrt(I1.length() * I2.length());
  for (int k = k_lo; k <= k_hi; ++k) {
    auto r = bilinear_osc_form(phase, std::exp2(k), one, one, I1, I2, opts);
    res.axis.push_back(k);
    res.values.push_back(std::abs(r.value) / norm);
  }
  res.fit();
  return res;
}

double mixed_derivative_Q(int d, double tau, double y) {
  double e = 1.0 / double(d) - 1.0;
  return factorial(d - 1) * (std::pow(y + tau, e) - std::pow(y, e));
}

double mixed_derivative_witness(const VdcPhase& Q, const VdcBox& box) {
  if (Q.kind != VdcKind::Q_cjtau) throw std::invalid_argument("mixed_derivative_witness: needs a Q_{c,j,tau} phase");
  if (Q.tau == 0.0) throw std::invalid_argument("mixed_derivative_witness: tau must be nonzero");
  double lo = std::exp2(-100), hi = std::exp2(100);
  for (double y : {box.y.lo, box.y.hi})
    if (y < lo || y > hi || y + Q.tau < lo || y + Q.tau > hi)
      throw std::invalid_argument("mixed_derivative_witness: y or y + tau leaves [2^-100, 2^100]");
  const int S = 64;
  double w = INFINITY;
  for (int i = 0; i < S; ++i)
    for (int k = 0; k < S; ++k) {
      // the derivative does not depend on x; the x loop keeps the sample the full box
      double y = box.y.lo + box.y.length() * k / (S - 1);
      (void)i;
      w = std::min(w, std::abs(mixed_derivative_Q(Q.d, Q.tau, y)) / std::abs(Q.tau));
    }
  return w;
}

double dv_phi_tau(int d, int j, double tau, double u, double v) {
  double e = 1.0 / double(d) - 1.0;
  double s = std::exp2(double(d - 1) * j);
  return -std::pow(u - std::pow(v, d), e) * std::pow(v, d - 1) +
         std::pow(u + s * tau - std::pow(v + tau, d), e) * std::pow(v + tau, d - 1);
}

double phase_deriv_witness_neg(int d, int j, int m, double tau, const VdcBox& box) {
  if (d < 2) throw std::invalid_argument("phase_deriv_witness_neg: d must be >= 2");
  if (j > 0 || double(-j) * (d - 1) < m) throw std::invalid_argument("phase_deriv_witness_neg: needs j <= 0, |j| >= m/(d-1)");
  if (tau == 0.0) throw std::invalid_argument("phase_deriv_witness_neg: tau = 0 is degenerate");
  auto in = [](double z) { return z >= 0.01 && z <= 100.0; };
  double s = std::exp2(double(d - 1) * j);
  const int S = 64;
  double w = INFINITY;
  for (int i = 0; i < S; ++i)
    for (int k = 0; k < S; ++k) {
      double u = box.x.lo + box.x.length() * i / (S - 1);
      double v = box.y.lo + box.y.length() * k / (S - 1);
      if (std::abs(u) < std::exp2(-m)) throw std::invalid_argument("phase_deriv_witness_neg: |u| < 2^-m");
      if (!in(v) || !in(v + tau) || !in(u - std::pow(v, d)) || !in(u + s * tau - std::pow(v + tau, d)))
        throw std::invalid_argument("phase_deriv_witness_neg: box leaves the admissible domain");
      w = std::min(w, std::abs(dv_phi_tau(d, j, tau, u, v)) / std::abs(tau * u));
    }
  return w;
}

void VdcFormParams::validate(VdcVariant v) const {
  if (d < 2) throw std::invalid_argument("VdcFormParams: d must be >= 2");
  if (!(std::abs(C) >= std::exp2(-200) && std::abs(C) <= std::exp2(200)))
    throw std::invalid_argument("VdcFormParams: |C| must lie in [2^-200, 2^200]");
  if (v == VdcVariant::neg && (j > 0 || double(-j) * (d - 1) < m))
    throw std::invalid_argument("VdcFormParams: the negative form needs j <= 0 and |j| >= m/(d-1)");
}

double support_bump(double t, double lo, double hi) { return bump_template((2.0 * t - lo - hi) / (hi - lo)); }

namespace {

constexpr double kThetaLo = 1.0 / 100.0, kThetaHi = 2.0;       // interval_I
constexpr double kTheta12Lo = 1.0 / 50.0, kTheta12Hi = 2.0;    // neg

// geometry of one variant: shift b with f evaluated at x - b t, the x-range and t-range, phase and rates
struct FormGeometry {
  VdcVariant v;
  VdcFormParams p;
  double lambda = 1.0;
  double b = 0.0;
  Interval x;
  Interval t;

  double phase(double x_, double t_) const {
    if (v == VdcVariant::interval_I) return lambda * std::pow(x_ - root(t_, p.d) + p.c, p.d);
    return lambda * root(x_ - std::pow(t_, p.d), p.d);
  }
  // amplitude without f, g
  double amp(double x_, double t_) const {
    if (v == VdcVariant::interval_I)
      return (x_ >= x.lo && x_ <= x.hi) ? support_bump(t_, kThetaLo, kThetaHi) : 0.0;
    return support_bump(x_ - std::pow(t_, p.d), kTheta12Lo, kTheta12Hi) * support_bump(t_, kTheta12Lo, kTheta12Hi);
  }
  // |d phase / dx|
  double rate_x(double x_, double t_) const {
    int d = p.d;
    if (v == VdcVariant::interval_I) return std::abs(lambda * d * std::pow(x_ - root(t_, d) + p.c, d - 1));
    double a = std::max(x_ - std::pow(t_, d), kTheta12Lo);
    return std::abs(lambda / d * std::pow(a, 1.0 / d - 1.0));
  }
  // |d/dt phase(y + b t, t)|
  double rate_t(double y, double t_) const {
    int d = p.d;
    double xx = y + b * t_;
    if (v == VdcVariant::interval_I) {
      double s = xx - root(t_, d) + p.c;
      return std::abs(lambda * d * std::pow(s, d - 1) * (b - std::pow(t_, 1.0 / d - 1.0) / d));
    }
    double a = std::max(xx - std::pow(t_, d), kTheta12Lo);
    return std::abs(lambda / d * std::pow(a, 1.0 / d - 1.0) * (b - d * std::pow(t_, d - 1)));
  }
};

FormGeometry geometry(VdcVariant v, const VdcFormParams& p) {
  p.validate(v);
  FormGeometry g;
  g.v = v;
  g.p = p;
  g.lambda = p.C * std::exp2(p.m);
  if (v == VdcVariant::interval_I) {
    g.b = std::exp2(-double(p.d - 1) * p.j);
    g.x = {p.I_lo, p.I_lo + 1.0};
    g.t = {kThetaLo, kThetaHi};
  } else {
    g.b = std::exp2(double(p.d - 1) * p.j);
    g.x = {kTheta12Lo + std::pow(kTheta12Lo, p.d), kTheta12Hi + std::pow(kTheta12Hi, p.d)};
    g.t = {kTheta12Lo, kTheta12Hi};
  }
  return g;
}

}  // namespace

cplx form_lambda_djm(VdcVariant v, const VdcFormParams& p, const ScalarFn& f, const ScalarFn& g,
                     const OscFormOptions& opts) {
  auto G = geometry(v, p);
  auto rx = [&](double x) {
    double r = 0.0;
    for (int k = 0; k <= 16; ++k) r = std::max(r, G.rate_x(x, G.t.lo + G.t.length() * k / 16.0));
    return r;
  };
  auto rt = [&](double t) {
    double r = 0.0;
    for (int k = 0; k <= 16; ++k) {
      double x = G.x.lo + G.x.length() * k / 16.0;
      r = std::max(r, G.rate_t(x - G.b * t, t));
    }
    // f(x - b t) adds no resolvable phase of its own; 8 extra cycles per unit cover smooth inputs
    return r + 8.0 * kTwoPi;
  };
  cplx prev = 0.0;
  double cycles = opts.cycles_per_panel;
  for (int r = 0; r <= opts.max_refinements + 1; ++r, cycles *= 0.5) {
    auto nx = adaptive_nodes(G.x.lo, G.x.hi, rx, cycles, opts.order);
    auto nt = adaptive_nodes(G.t.lo, G.t.hi, rt, cycles, opts.order);
    cvec rows(nx.x.size(), 0.0);
    parallel_for(nx.x.size(), [&](std::size_t i) {
      double x = nx.x[i];
      cplx gx = g(x);
      if (gx == cplx(0.0)) return;
      cplx s = 0.0;
      for (std::size_t k = 0; k < nt.x.size(); ++k) {
        double t = nt.x[k];
        double a = G.amp(x, t);
        if (a == 0.0) continue;
        s += nt.w[k] * a * f(x - G.b * t) * std::polar(1.0, G.phase(x, t));
      }
      rows[i] = nx.w[i] * gx * s;
    });
    cplx v_ = 0.0;
    for (const auto& z : rows) v_ += z;
    if (r > 0 && close_enough(v_, prev, opts)) return v_;
    prev = v_;
  }
  return prev;
}

double DualKernel::l2() const {
  double s = 0.0;
  for (std::size_t i = 0; i < K.size(); ++i) s += w[i] * std::norm(K[i]);
  return std::sqrt(s);
}

DualKernel form_dual_kernel(VdcVariant v, const VdcFormParams& p, const ScalarFn& g, const OscFormOptions& opts) {
  auto G = geometry(v, p);
  // y = x - b t ranges over [x.lo - b t.hi, x.hi - b t.lo]; K is smooth in y between the points where the
  // t-range starts to be cut by the x-range
  Interval yr{G.x.lo - G.b * G.t.hi, G.x.hi - G.b * G.t.lo};
  std::vector<double> breaks{G.x.lo - G.b * G.t.lo, G.x.hi - G.b * G.t.hi};

  auto kernel_at = [&](double y, double cycles) {
    // t with y + b t inside the x-range
    double t0 = std::max(G.t.lo, (G.x.lo - y) / G.b), t1 = std::min(G.t.hi, (G.x.hi - y) / G.b);
    if (v == VdcVariant::neg) {
      // theta1(y + b t - t^d) vanishes unless t^d < y + 2 b - theta1_lo
      double top = y + G.b * G.t.hi - kTheta12Lo;
      if (top <= 0.0) return cplx(0.0);
      t1 = std::min(t1, root(top, p.d));
      double bottom = y - kTheta12Hi;
      if (bottom > 0.0) t0 = std::max(t0, root(bottom, p.d));
    }
    if (!(t1 > t0)) return cplx(0.0);
    auto nt = adaptive_nodes(t0, t1, [&](double t) { return G.rate_t(y, t) + 8.0 * kTwoPi; }, cycles, opts.order, {}, 16);
    cplx s = 0.0;
    for (std::size_t k = 0; k < nt.x.size(); ++k) {
      double t = nt.x[k], x = y + G.b * t;
      double a = G.amp(x, t);
      if (a == 0.0) continue;
      s += nt.w[k] * a * g(x) * std::polar(1.0, G.phase(x, t));
    }
    return s;
  };

  DualKernel prev;
  double prev_norm = -1.0;
  std::size_t panels = 32;
  double cycles = opts.cycles_per_panel;
  for (int r = 0; r <= opts.max_refinements + 1; ++r, panels *= 2, cycles *= 0.5) {
    DualKernel dk;
    std::vector<double> cuts = breaks;
    cuts.push_back(yr.lo);
    cuts.push_back(yr.hi);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double lo = std::max(yr.lo, cuts[i]), hi = std::min(yr.hi, cuts[i + 1]);
      if (!(hi > lo)) continue;
      std::size_t np = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(panels * (hi - lo) / yr.length())));
      auto n = composite_gl(lo, hi, np, static_cast<std::size_t>(opts.order));
      dk.y.insert(dk.y.end(), n.x.begin(), n.x.end());
      dk.w.insert(dk.w.end(), n.w.begin(), n.w.end());
    }
    dk.K.assign(dk.y.size(), 0.0);
    parallel_for(dk.y.size(), [&](std::size_t i) { dk.K[i] = kernel_at(dk.y[i], cycles); });
    double nrm = dk.l2();
    if (prev_norm >= 0.0 && std::abs(nrm - prev_norm) <= opts.abs_tol + 1e-6 * nrm) return dk;
    prev = std::move(dk);
    prev_norm = nrm;
  }
  return prev;
}

DecayScanResult form_decay_scan(VdcVariant v, int d, int m_lo, int m_hi, int trials, std::uint64_t seed) {
  if (m_hi < m_lo || trials < 1) throw std::invalid_argument("form_decay_scan: empty scan");
  DecayScanResult res;
  res.scan = v == VdcVariant::interval_I ? "vdc_interval_form" : "vdc_neg_form";
  res.trials_per_cell = trials;
  res.seed = seed;
  std::vector<double> vals(std::size_t(m_hi - m_lo + 1), 0.0);
  for (int m = m_lo; m <= m_hi; ++m) {
    VdcFormParams p;
    p.d = d;
    p.m = m;
    p.j = v == VdcVariant::interval_I ? regime_j(d, m) : -regime_j(d, m);
    double best = 0.0;
    for (int t = 0; t < trials; ++t) {
      ScalarFn g;
      if (t == 0) {
        g = [](double) { return cplx(1.0); };
      } else {
        Rng rng = Rng::keyed(seed, {m, t});
        double a[3], ph[3];
        for (int r = 0; r < 3; ++r) {
          a[r] = rng.normal();
          ph[r] = kTwoPi * rng.uniform();
        }
        g = [a0 = a[0], a1 = a[1], a2 = a[2], p0 = ph[0], p1 = ph[1], p2 = ph[2]](double x) {
          return std::polar(1.0, a0 * std::cos(x + p0) + a1 * std::cos(2 * x + p1) + a2 * std::cos(3 * x + p2));
        };
      }
      // ||g||_inf = 1 for every trial
      best = std::max(best, form_dual_kernel(v, p, g).l2());
    }
    vals[std::size_t(m - m_lo)] = best;
  }
  for (int m = m_lo; m <= m_hi; ++m) {
    res.axis.push_back(m);
    res.values.push_back(vals[std::size_t(m - m_lo)]);
  }
  res.fit();
  return res;
}

}  // namespace bht
