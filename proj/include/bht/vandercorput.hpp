#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bht/foundation.hpp"
#include "bht/harness.hpp"

namespace bht {

// decay exponent of the 2D van der Corput estimate: 1/(2 ell) for ell >= 2, 1/(2 + eps) for ell = 1
double dexp(int ell, double eps = 0.5);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

struct VdcBox {
  Interval x;
  Interval y;
};

enum class VdcKind { generic, Q_cjtau, phi_djm, phi_djm_neg, phi_djm_tau };

struct VdcPhase {
  VdcKind kind = VdcKind::generic;
  int ell = 1;  // order of the x-derivative in the mixed-derivative hypothesis
  std::function<double(double, double)> fn;  // generic only
  int d = 2;
  int j = 0;
  int m = 0;
  double c = 0.0;
  double tau = 0.0;
  double C = 1.0;

  double value(double x, double y) const;
  void validate() const;

  static VdcPhase generic(std::function<double(double, double)> fn, int ell);
  // (x - y^{1/d} + c)^d - (x + 2^{-(d-1)j} tau - (y + tau)^{1/d} + c)^d
  static VdcPhase Q(int d, double c, int j, double tau);
  // C 2^m (x - y^{1/d} + c)^d
  static VdcPhase phi_djm(int d, int j, int m, double C, double c);
  // C 2^m (x - y^d)^{1/d}
  static VdcPhase phi_djm_neg(int d, int j, int m, double C);
  // (u - v^d)^{1/d} - (u + 2^{(d-1)j} tau - (v + tau)^d)^{1/d}
  static VdcPhase phi_djm_tau(int d, int j, double tau);
};

struct OscFormOptions {
  double cycles_per_panel = 2.0;
  int order = 16;
  int max_refinements = 3;
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
};

struct OscFormResult {
  cplx value = 0.0;
  double error_estimate = 0.0;  // difference between the last two panel counts
  bool converged = false;
  std::size_t nodes = 0;
};

using ScalarFn = std::function<cplx(double)>;

// int_{I1 x I2} exp(i lambda phi(x, y)) f(x) g(y) dx dy on a tensor Gauss-Legendre grid whose panels
// resolve lambda grad(phi); the panel count doubles until two successive values agree.
OscFormResult bilinear_osc_form(const VdcPhase& phase, double lambda, const ScalarFn& f, const ScalarFn& g,
                                Interval I1, Interval I2, const OscFormOptions& opts = {});
// sampled inputs are evaluated by trigonometric interpolation
OscFormResult bilinear_osc_form(const VdcPhase& phase, double lambda, const SampledSignal& f,
                                const SampledSignal& g, Interval I1, Interval I2, const OscFormOptions& opts = {});

// ell = 1 also needs d_x^2 d_y phi != 0: checked on a 33 x 33 sample of the box by finite differences
bool ell1_hypothesis_holds(const VdcPhase& phase, Interval I1, Interval I2);

// |form| / (||f||_2 ||g||_2) at f = g = 1 over lambda = 2^k, k in [k_lo, k_hi]; axis is k
DecayScanResult osc_form_scan(const VdcPhase& phase, Interval I1, Interval I2, int k_lo, int k_hi,
                              const OscFormOptions& opts = {});

// (d-1)! ((y + tau)^{1/d - 1} - y^{1/d - 1}) = d_x^{d-1} d_y Q_{c,j,tau}
double mixed_derivative_Q(int d, double tau, double y);
// min over a 64 x 64 sample of box of |d_x^{d-1} d_y Q| / |tau|; y and y + tau must stay in [2^-100, 2^100]
double mixed_derivative_witness(const VdcPhase& Q, const VdcBox& box);

// d_v phi_{d,j,m,tau}(u, v)
double dv_phi_tau(int d, int j, double tau, double u, double v);
// min over a 64 x 64 sample of box (x = u, y = v) of |d_v phi| / |tau u|. Needs j <= 0, |j| >= m/(d-1),
// tau != 0, |u| >= 2^-m, v and v + tau in [1/100, 100], u - v^d and u + 2^{(d-1)j} tau - (v + tau)^d in [1/100, 100].
double phase_deriv_witness_neg(int d, int j, int m, double tau, const VdcBox& box);

enum class VdcVariant {
  interval_I,  // int int e^{i phi_djm(x,t)} f(x - 2^{-(d-1)j} t) g(x) 1_I(x) theta(t), theta on [1/100, 2]
  neg          // int int e^{i phi_djm_neg(x,t)} f(x - 2^{(d-1)j} t) g(x) theta1(x - t^d) theta2(t), thetas on [1/50, 2]
};

struct VdcFormParams {
  int d = 2;
  int j = 0;
  int m = 0;
  double C = 1.0;
  double c = 0.0;       // interval_I only
  double I_lo = 0.0;    // I = [I_lo, I_lo + 1], interval_I only
  void validate(VdcVariant v) const;
};

// bump on [lo, hi]: exp(1 - 1/(1 - u^2)) in the rescaled variable
double support_bump(double t, double lo, double hi);

cplx form_lambda_djm(VdcVariant v, const VdcFormParams& p, const ScalarFn& f, const ScalarFn& g,
                     const OscFormOptions& opts = {});

// the form equals int f(y) K(y) dy; returns samples of K on Gauss-Legendre nodes
struct DualKernel {
  std::vector<double> y;
  std::vector<double> w;
  cvec K;
  double l2() const;  // sup over f of |form(f, g)| / ||f||_2
};
DualKernel form_dual_kernel(VdcVariant v, const VdcFormParams& p, const ScalarFn& g, const OscFormOptions& opts = {});

// max over g in {1, seeded unimodular smooth phases} of sup_f |form| / (||f||_2 ||g||_inf), one cell per m.
// interval_I runs at j = m/(d-1) + 2, neg at j = -(m/(d-1) + 2).
DecayScanResult form_decay_scan(VdcVariant v, int d, int m_lo, int m_hi, int trials, std::uint64_t seed);

}  // namespace bht
