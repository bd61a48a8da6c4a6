#include "bht/bumps.hpp"

#include <cmath>
#include <stdexcept>

#include "bht/quadrature.hpp"

namespace bht {

namespace {

double expm_inv(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

constexpr std::size_t kCdfPanels = 16;
constexpr std::size_t kCdfOrder = 16;

double template_mass() {
  static const double mass = integrate_gl(bump_template, -1.0, 1.0, kCdfPanels, kCdfOrder);
  return mass;
}

// normalized primitive of the template: S(-1) = 0, S(1) = 1
double template_cdf(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return integrate_gl(bump_template, -1.0, u, kCdfPanels, kCdfOrder) / template_mass();
}

}  // namespace

BumpKind parse_bump_kind(const std::string& name) {
  static const std::pair<const char*, BumpKind> table[] = {
      {"theta", BumpKind::theta},       {"phi_hat", BumpKind::phi_hat},   {"phi_m0_hat", BumpKind::phi_m0_hat},
      {"rho", BumpKind::rho},           {"rho0", BumpKind::rho0},         {"rho1", BumpKind::rho1},
      {"phi1_hat", BumpKind::phi1_hat}, {"phi2_hat", BumpKind::phi2_hat}, {"mollifier_phi", BumpKind::mollifier_phi}};
  for (const auto& [n, k] : table)
    if (name == n) return k;
  throw std::invalid_argument("unknown bump kind: " + name);
}

const char* bump_kind_name(BumpKind k) {
  switch (k) {
    case BumpKind::theta: return "theta";
    case BumpKind::phi_hat: return "phi_hat";
    case BumpKind::phi_m0_hat: return "phi_m0_hat";
    case BumpKind::rho: return "rho";
    case BumpKind::rho0: return "rho0";
    case BumpKind::rho1: return "rho1";
    case BumpKind::phi1_hat: return "phi1_hat";
    case BumpKind::phi2_hat: return "phi2_hat";
    case BumpKind::mollifier_phi: return "mollifier_phi";
  }
  return "?";
}

double bump_template(double x) {
  double q = 1.0 - x * x;
  if (q <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / q);
}

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double a = expm_inv(x);
  double b = expm_inv(1.0 - x);
  return a / (a + b);
}

double theta(double xi) { return smooth_step((1.0 - std::abs(xi)) / 0.5); }

double phi_hat(double xi) { return theta(xi / 2.0) - theta(xi); }

double phi_m0_hat(double xi, int m0) { return theta(std::ldexp(xi, -(m0 + 1))); }

double rho1(double t) {
  if (t <= 0.5 || t >= 2.0) return 0.0;
  return bump_template((t - 1.25) / 0.75);
}

double rho(double t) {
  if (t > 0.0) return rho1(t);
  if (t < 0.0) return -rho1(-t);
  return 0.0;
}

double rho0(double t) { return phi_hat(t); }

double phi1_hat(double xi) {
  double a = std::abs(xi);
  return smooth_step((a - 0.125) / 0.25) * smooth_step((2.375 - a) / 0.25);
}

double phi2_hat(double xi) { return theta(xi); }

double mollifier(double x) {
  return bump_template(x / kMollifierHalfWidth) / (kMollifierHalfWidth * template_mass());
}

double eval_bump(const BumpSpec& spec, double x) {
  double u = (x - spec.shift) / spec.scale;
  switch (spec.kind) {
    case BumpKind::theta: return theta(u);
    case BumpKind::phi_hat: return phi_hat(u);
    case BumpKind::phi_m0_hat: return phi_m0_hat(u, spec.m0);
    case BumpKind::rho: return rho(u);
    case BumpKind::rho0: return rho0(u);
    case BumpKind::rho1: return rho1(u);
    case BumpKind::phi1_hat: return phi1_hat(u);
    case BumpKind::phi2_hat: return phi2_hat(u);
    case BumpKind::mollifier_phi: return mollifier(u);
  }
  return 0.0;
}

double check_partition(double xi, int m_lo, int m_hi) {
  if (xi == 0.0) throw std::invalid_argument("check_partition: xi must be nonzero");
  double acc = 0.0;
  for (int m = m_lo; m <= m_hi; ++m) acc += phi_hat(std::ldexp(xi, -m));
  return acc;
}

double cell_lo(int k, long n) { return std::ldexp(static_cast<double>(n), k); }
double cell_hi(int k, long n) { return std::ldexp(static_cast<double>(n + 1), k); }

double smooth_indicator(IndicatorKind kind, int k, long n, double x) {
  double a = cell_lo(k, n);
  double b = cell_hi(k, n);
  if (kind == IndicatorKind::star) {
    double h = std::ldexp(kMollifierHalfWidth, k);
    return template_cdf((x - a) / h) - template_cdf((x - b) / h);
  }
  // closed form of the integral over I of 2^{-k} (1 + 2^{-k}|x - y|)^{-200} dy
  auto prim = [](double u) { return (1.0 - std::pow(1.0 + u, -199.0)) / 199.0; };  // int_0^u (1+s)^{-200} ds
  double ua = std::ldexp(a - x, -k);
  double ub = std::ldexp(b - x, -k);
  if (ua >= 0.0) return prim(ub) - prim(ua);
  if (ub <= 0.0) return prim(-ua) - prim(-ub);
  return prim(-ua) + prim(ub);
}

SampledSignal restrict(const SampledSignal& s, const BumpSpec& spec) {
  SampledSignal out = fourier_transform(s, Direction::forward);
  for (std::size_t k = 0; k < s.grid.count; ++k) out.samples[k] *= eval_bump(spec, s.grid.frequency(k));
  out = fourier_transform(out, Direction::inverse);
  out.band = s.band;
  return out;
}

double rho_l1() {
  static const double v = 2.0 * integrate_gl(rho1, 0.5, 2.0, 32, 16);
  return v;
}

}  // namespace bht
