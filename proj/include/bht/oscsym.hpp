#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bht/foundation.hpp"

namespace bht {

struct OscQuadSpec {
  int base_panels = 16;
  double tol = 1e-12;
  int max_refine = 10;
  double min_panels_per_oscillation = 8.0;
  int order = 8;  // Gauss-Legendre nodes per panel
};

void validate(const OscQuadSpec& spec);

struct SymbolValue {
  cplx value;
  double est_error = 0.0;
  int refinements_used = 0;
  bool converged = true;
};

enum class PhaseKind { linear_monomial, curve_root, inverse_root, q1, q2, custom };

// Phase phi(t) measured in cycles: integrands are amplitude(t) * exp(-2 pi i phi(t)).
//   linear_monomial: params {xi, eta}        phi = xi t + eta t^d
//   curve_root:      params {x, c}           phi = (x - t^{1/d} + c)^d
//   inverse_root:    params {x}              phi = (x - t^d)^{1/d}
//   q1:              params {a, b}           phi = (a t^{d/(d-1)} + b t) / (2 pi)
//   q2:              params {a, b}           phi = (a t^{-1/(d-1)} + b t) / (2 pi)
//   custom:          user callables
// q1/q2 are stored in radians in the family definitions, hence the 2 pi.
struct PhaseSpec {
  PhaseKind kind = PhaseKind::linear_monomial;
  int d = 2;
  std::vector<double> params;
  std::function<double(double)> custom_value;
  std::function<double(double)> custom_deriv;

  double value(double t) const;
  double deriv(double t) const;

  static PhaseSpec monomial(int d, double xi, double eta) { return {PhaseKind::linear_monomial, d, {xi, eta}, {}, {}}; }
};

SymbolValue osc_integral(const std::function<cplx(double)>& amplitude, const PhaseSpec& phase, double a, double b,
                         const OscQuadSpec& spec);

// m_d(xi, eta) = int rho(t) exp(-2 pi i (xi t + eta t^d)) dt
SymbolValue symbol_md(int d, double xi, double eta, const OscQuadSpec& spec = {});
// m_j(xi, eta) = m_d(2^{-j} xi, 2^{-dj} eta)
SymbolValue symbol_mj(int d, int j, double xi, double eta, const OscQuadSpec& spec = {});
// m_d(xi, eta) - int rho(t) exp(-2 pi i xi t) dt, computed without cancellation
SymbolValue symbol_md_tilde(int d, double xi, double eta, const OscQuadSpec& spec = {});
// int rho(t) exp(-2 pi i xi t) dt
SymbolValue rho_transform(double xi, const OscQuadSpec& spec = {});

std::optional<double> critical_point(int d, double xi, double eta);
// all real critical points of xi t + eta t^d lying in the open support of rho
std::vector<double> critical_points_in_support(int d, double xi, double eta);

// c_d = 2 pi (d-1) d^{-d/(d-1)}, in radians
double chirp_constant(int d);
// c_d 2^m |xi|^{d/(d-1)} eta^{-1/(d-1)} (odd root carries the sign of eta); equals the critical
// value of -2 pi 2^m (xi t + eta t^d) when xi > 0 > eta and d is even
double chirp_phase(int d, int m, double xi, double eta);

// leading stationary-phase term of m_d(2^m xi, 2^m eta); throws if no critical point lies in supp rho
cplx stationary_md(int d, int m, double xi, double eta);

// principal parts of int_{xi > 0} phi1_hat(xi) exp(i (a xi^{d/(d-1)} + (x + b) xi)) dxi and its
// q2 mirror int_{eta > 0} phi1_hat(eta) exp(i (a eta^{-1/(d-1)} + (x + b) eta)) deta
cplx principal_part_q1(int d, double a, double b, double x);
cplx principal_part_q2(int d, double a, double b, double x);
// constants of the q1 principal part: exp(i c1 a^{-(d-1)} (x+b)^d), argument c2 a^{-(d-1)} (x+b)^{d-1}
double pp_q1_c1(int d);
double pp_q1_c2(int d);
// sup of the amplitude factor; |P(q1)(x)| <= pp_q1_Cd(d) |a|^{-1/2}
double pp_q1_Cd(int d);
double pp_q2_Cd(int d);
// direct quadrature of the integrals above
cplx direct_q1(int d, double a, double b, double x, const OscQuadSpec& spec = {});
cplx direct_q2(int d, double a, double b, double x, const OscQuadSpec& spec = {});

}  // namespace bht
