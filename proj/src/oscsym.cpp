#include "bht/oscsym.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bht/bumps.hpp"
#include "bht/quadrature.hpp"

namespace bht {

namespace {

double signed_root(double v, int k) {
  // real k-th root; negative arguments only for odd k
  if (v >= 0.0) return std::pow(v, 1.0 / k);
  if (k % 2 == 0) return std::nan("");
  return -std::pow(-v, 1.0 / k);
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

void validate(const OscQuadSpec& spec) {
  if (!(spec.tol > 0.0)) throw std::invalid_argument("OscQuadSpec: tol must be positive");
  if (spec.base_panels < 16) throw std::invalid_argument("OscQuadSpec: base_panels must be >= 16");
  if (spec.max_refine < 0) throw std::invalid_argument("OscQuadSpec: max_refine must be >= 0");
}

double PhaseSpec::value(double t) const {
  switch (kind) {
    case PhaseKind::linear_monomial: return params[0] * t + params[1] * ipow(t, d);
    case PhaseKind::curve_root: return ipow(params[0] - signed_root(t, d) + params[1], d);
    case PhaseKind::inverse_root: return signed_root(params[0] - ipow(t, d), d);
    case PhaseKind::q1: return (params[0] * std::pow(t, double(d) / (d - 1)) + params[1] * t) / kTwoPi;
    case PhaseKind::q2: return (params[0] * std::pow(t, -1.0 / (d - 1)) + params[1] * t) / kTwoPi;
    case PhaseKind::custom: return custom_value(t);
  }
  return 0.0;
}

double PhaseSpec::deriv(double t) const {
  switch (kind) {
    case PhaseKind::linear_monomial: return params[0] + d * params[1] * ipow(t, d - 1);
    case PhaseKind::curve_root: {
      double r = signed_root(t, d);
      // d/dt (x - t^{1/d} + c)^d = -(x - r + c)^{d-1} t^{1/d - 1}
      return -ipow(params[0] - r + params[1], d - 1) * r / t;
    }
    case PhaseKind::inverse_root: {
      double w = params[0] - ipow(t, d);
      double r = signed_root(w, d);
      return -ipow(t, d - 1) * r / w;
    }
    case PhaseKind::q1:
      return (params[0] * double(d) / (d - 1) * std::pow(t, 1.0 / (d - 1)) + params[1]) / kTwoPi;
    case PhaseKind::q2:
      return (-params[0] / (d - 1) * std::pow(t, -double(d) / (d - 1)) + params[1]) / kTwoPi;
    case PhaseKind::custom: return custom_deriv(t);
  }
  return 0.0;
}

SymbolValue osc_integral(const std::function<cplx(double)>& amplitude, const PhaseSpec& phase, double a, double b,
                         const OscQuadSpec& spec) {
  validate(spec);
  if (!(b > a)) return {cplx(0.0), 0.0, 0, true};
  // panel density follows the local phase derivative segment by segment
  const int segments = 32;
  const int probes = 16;
  std::vector<std::size_t> seg_panels(segments);
  double h = (b - a) / segments;
  for (int s = 0; s < segments; ++s) {
    double fmax = 0.0;
    for (int i = 0; i <= probes; ++i) fmax = std::max(fmax, std::abs(phase.deriv(a + h * (s + double(i) / probes))));
    double need = std::ceil(spec.min_panels_per_oscillation * fmax * h * 1.25);
    seg_panels[s] = static_cast<std::size_t>(std::max<double>(std::ceil(double(spec.base_panels) / segments), need));
  }
  auto order = static_cast<std::size_t>(spec.order);
  auto eval = [&](std::size_t mult) {
    cplx acc = 0.0;
    for (int s = 0; s < segments; ++s)
      acc += integrate_gl([&](double t) { return amplitude(t) * std::polar(1.0, -kTwoPi * phase.value(t)); }, a + h * s,
                          a + h * (s + 1), seg_panels[s] * mult, order);
    return acc;
  };
  std::size_t panels = 1;
  SymbolValue out;
  cplx prev = eval(panels);
  out.value = prev;
  out.est_error = std::numeric_limits<double>::infinity();
  out.converged = false;
  for (int r = 1; r <= spec.max_refine; ++r) {
    panels *= 2;
    cplx cur = eval(panels);
    out.value = cur;
    out.est_error = std::abs(cur - prev);
    out.refinements_used = r;
    if (out.est_error < spec.tol) {
      out.converged = true;
      break;
    }
    prev = cur;
  }
  return out;
}

namespace {

SymbolValue combine(const SymbolValue& p, const SymbolValue& q) {
  return {p.value + q.value, p.est_error + q.est_error, std::max(p.refinements_used, q.refinements_used),
          p.converged && q.converged};
}

SymbolValue rho_integral(const PhaseSpec& ph, const OscQuadSpec& spec) {
  auto amp = [](double t) { return cplx(rho(t)); };
  return combine(osc_integral(amp, ph, -2.0, -0.5, spec), osc_integral(amp, ph, 0.5, 2.0, spec));
}

}  // namespace

SymbolValue symbol_md(int d, double xi, double eta, const OscQuadSpec& spec) {
  if (d < 2) throw std::invalid_argument("symbol_md: d must be >= 2");
  return rho_integral(PhaseSpec::monomial(d, xi, eta), spec);
}

SymbolValue symbol_mj(int d, int j, double xi, double eta, const OscQuadSpec& spec) {
  return symbol_md(d, std::ldexp(xi, -j), std::ldexp(eta, -d * j), spec);
}

SymbolValue rho_transform(double xi, const OscQuadSpec& spec) {
  return rho_integral(PhaseSpec::monomial(2, xi, 0.0), spec);
}

SymbolValue symbol_md_tilde(int d, double xi, double eta, const OscQuadSpec& spec) {
  // rho(t) e^{-2 pi i xi t} (e^{-2 pi i eta t^d} - 1), with the bracket written as -2i sin(pi eta t^d) e^{-i pi eta t^d}
  PhaseSpec ph = PhaseSpec::monomial(d, xi, 0.5 * eta);
  auto amp = [d, eta](double t) { return cplx(0.0, -2.0 * std::sin(kPi * eta * ipow(t, d))) * rho(t); };
  return combine(osc_integral(amp, ph, -2.0, -0.5, spec), osc_integral(amp, ph, 0.5, 2.0, spec));
}

std::vector<double> critical_points_in_support(int d, double xi, double eta) {
  std::vector<double> out;
  if (eta == 0.0) return out;
  double r = -xi / (d * eta);  // t^{d-1} = r
  int k = d - 1;
  if (k % 2 == 1) {
    double t = signed_root(r, k);
    if (std::abs(t) > 0.5 && std::abs(t) < 2.0) out.push_back(t);
  } else if (r > 0.0) {
    double t = std::pow(r, 1.0 / k);
    if (t > 0.5 && t < 2.0) {
      out.push_back(-t);
      out.push_back(t);
    }
  }
  return out;
}

std::optional<double> critical_point(int d, double xi, double eta) {
  if (eta == 0.0) return std::nullopt;
  double r = -xi / (d * eta);
  int k = d - 1;
  std::vector<double> roots;
  if (k % 2 == 1) {
    roots.push_back(signed_root(r, k));
  } else if (r >= 0.0) {
    double t = std::pow(r, 1.0 / k);
    roots.push_back(t);
    roots.push_back(-t);
  }
  for (double t : roots)
    if (std::abs(t) >= 0.25 && std::abs(t) <= 2.5) return t;
  return std::nullopt;
}

double chirp_constant(int d) { return kTwoPi * (d - 1) * std::pow(double(d), -double(d) / (d - 1)); }

double chirp_phase(int d, int m, double xi, double eta) {
  double sg = eta < 0.0 ? -1.0 : 1.0;
  return sg * chirp_constant(d) * std::ldexp(1.0, m) * std::pow(std::abs(xi), double(d) / (d - 1)) *
         std::pow(std::abs(eta), -1.0 / (d - 1));
}

cplx stationary_md(int d, int m, double xi, double eta) {
  auto pts = critical_points_in_support(d, xi, eta);
  if (pts.empty()) throw std::domain_error("stationary_md: no critical point in supp rho");
  double s = std::ldexp(1.0, m);
  cplx acc = 0.0;
  for (double t : pts) {
    double psi = -kTwoPi * s * (xi * t + eta * ipow(t, d));
    double psi2 = -kTwoPi * s * d * (d - 1) * eta * ipow(t, d - 2);
    double sg = psi2 > 0.0 ? 1.0 : -1.0;
    acc += rho(t) * std::sqrt(kTwoPi / std::abs(psi2)) * std::polar(1.0, psi + sg * kPi / 4.0);
  }
  return acc;
}

double pp_q1_c1(int d) {
  double sign = (d % 2 == 0) ? -1.0 : 1.0;  // -(-1)^d
  return sign * std::pow(double(d - 1), d - 1) / std::pow(double(d), d);
}

double pp_q1_c2(int d) {
  double sign = (d % 2 == 0) ? -1.0 : 1.0;  // (-1)^{d-1}
  return sign * std::pow(double(d - 1) / d, d - 1);
}

double pp_q1_Cd(int d) {
  double p = double(d) / (d - 1);
  // amplitude sqrt(2 pi / (p (p-1) xi^{p-2})) is largest at the right end of supp phi1_hat
  return std::sqrt(kTwoPi / (p * (p - 1.0) * std::pow(19.0 / 8.0, p - 2.0)));
}

double pp_q2_Cd(int d) {
  double k = double(d) / ((d - 1.0) * (d - 1.0));
  return std::sqrt(kTwoPi / (k * std::pow(19.0 / 8.0, -(2.0 * d - 1.0) / (d - 1.0))));
}

cplx principal_part_q1(int d, double a, double b, double x) {
  if (a == 0.0) throw std::invalid_argument("principal_part_q1: a must be nonzero");
  double p = double(d) / (d - 1);
  double w = -(x + b) / (a * p);  // xi*^{1/(d-1)}
  if (!(w > 0.0)) return 0.0;
  double xs = std::pow(w, d - 1);
  double amp = phi1_hat(xs);
  if (amp == 0.0) return 0.0;
  double psi = pp_q1_c1(d) * std::pow(a, -(d - 1.0)) * ipow(x + b, d);
  double psi2 = a * p * (p - 1.0) * std::pow(xs, p - 2.0);
  double sg = psi2 > 0.0 ? 1.0 : -1.0;
  return amp * std::sqrt(kTwoPi / std::abs(psi2)) * std::polar(1.0, psi + sg * kPi / 4.0);
}

cplx principal_part_q2(int d, double a, double b, double x) {
  if (a == 0.0) throw std::invalid_argument("principal_part_q2: a must be nonzero");
  double r = (d - 1.0) * (x + b) / a;  // eta*^{-d/(d-1)}
  if (!(r > 0.0)) return 0.0;
  double es = std::pow(r, -(d - 1.0) / d);
  double amp = phi1_hat(es);
  if (amp == 0.0) return 0.0;
  double psi = a * std::pow(es, -1.0 / (d - 1)) + (x + b) * es;
  double psi2 = a * d / ((d - 1.0) * (d - 1.0)) * std::pow(es, -(2.0 * d - 1.0) / (d - 1.0));
  double sg = psi2 > 0.0 ? 1.0 : -1.0;
  return amp * std::sqrt(kTwoPi / std::abs(psi2)) * std::polar(1.0, psi + sg * kPi / 4.0);
}

cplx direct_q1(int d, double a, double b, double x, const OscQuadSpec& spec) {
  // exp(+i q) = exp(-2 pi i phi) with phi = -q / (2 pi)
  PhaseSpec ph{PhaseKind::q1, d, {-a, -(x + b)}, {}, {}};
  return osc_integral([](double t) { return cplx(phi1_hat(t)); }, ph, 0.125, 2.375, spec).value;
}

cplx direct_q2(int d, double a, double b, double x, const OscQuadSpec& spec) {
  PhaseSpec ph{PhaseKind::q2, d, {-a, -(x + b)}, {}, {}};
  return osc_integral([](double t) { return cplx(phi1_hat(t)); }, ph, 0.125, 2.375, spec).value;
}

}  // namespace bht
