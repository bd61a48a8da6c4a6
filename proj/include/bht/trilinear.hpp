#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "bht/foundation.hpp"
#include "bht/harness.hpp"
#include "bht/operators.hpp"
#include "bht/uniformity.hpp"

namespace bht {

// Frequency-side input. The function vanishes outside [lo, hi]; `rate` bounds |d/dxi arg f| and only
// sizes quadrature grids.
struct FreqFunction {
  std::function<cplx(double)> f;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  double rate = 0.0;

  cplx operator()(double xi) const { return (xi < lo || xi > hi) ? cplx(0.0) : f(xi); }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi) && hi > lo; }
};

enum class NormKind {
  l2_l2_l2,          // ||f1||_2 ||f2||_2 ||f3||_2
  l2_l2_linf_transform  // ||f1||_2 ||f2||_2 sup |f3|, f3 being frequency data
};

struct TrilinearResult {
  cplx value = 0.0;
  double normalized = 0.0;  // |value| / product of the recorded norms (0 when a norm vanishes)
  NormKind norm_kind = NormKind::l2_l2_l2;
  double norms[3] = {0.0, 0.0, 0.0};
  DyadicParams params;
  std::uint64_t seed = 0;
};

// <B_{j,m}(f1v, f2v), f3v> on the torus pair of bjm_grids(p, base). fiv has series coefficients
// fi(k / P) / P on its grid; norms are the torus L2 norms of the fiv.
TrilinearResult lambda_jm(const DyadicParams& p, const FreqFunction& f1, const FreqFunction& f2,
                          const FreqFunction& f3, double base = 4.0);
// same pairing with B_{j,m,n} (Phi_1 windows, cell p.n); normalized by ||f1v||_2 ||f2v||_2 sup|f3|.
// Inputs must vanish at every grid frequency outside 1/16 <= |xi| <= 39/16.
TrilinearResult lambda_jmn(const DyadicParams& p, const FreqFunction& f1, const FreqFunction& f2,
                           const FreqFunction& f3, double base = 4.0);
// cells n whose smooth indicators cover the output torus of bjm_grids(p, base)
std::vector<long> covering_cells(const DyadicParams& p, double base);

// Frequency double sum pref * sum_{a,b} f1 W(xi_a) f2 W(eta_b) m_d(2^m xi_a, 2^m eta_b)
// conj(f3(xi_a + eta_b ratio)) dxi deta with m_d from direct quadrature; W = phi_hat, or phi1_hat when wide.
cplx lambda_jm_frequency_sum(const DyadicParams& p, const FreqFunction& f1, const FreqFunction& f2,
                             const FreqFunction& f3, double base = 4.0, bool wide_window = false);

// one trial of the scan below: Gaussian f1, f2 keyed by (seed, m, trial) and f3 the dual of B_{j,m}(f1, f2)
TrilinearResult lambda_trial(const DyadicParams& p, int trial, std::uint64_t seed, double base = 4.0);
// max over trials of |Lambda_{j,m}| / prod ||fi||_2 with Gaussian f1, f2 on the window bins and f3 the
// dual of B_{j,m}(f1, f2); one cell per m
DecayScanResult lambda_decay_scan(int d, int j, int m_lo, int m_hi, int trials, std::uint64_t seed,
                                  double base = 4.0);

struct StarQuadOptions {
  double kernel_scale = 1.0;  // multiplies the exponent; 0 gives the non-oscillatory kernel
  double oversample = 1.0;
  int min_points = 257;
};

// int int f1 W(xi) f2 W(eta) f3(arg) exp(i c_d 2^m xi^{d/(d-1)} eta^{-1/(d-1)}) dxi deta over
// W = phi_hat on xi, eta > 0, with arg = 2^{-(d-1)j} xi + eta for j > 0 and xi + 2^{(d-1)j} eta otherwise.
// Trapezoid rule on a grid resolving the kernel plus the input rates. All inputs need bounded support.
TrilinearResult lambda_star_jm(const DyadicParams& p, const FreqFunction& f1, const FreqFunction& f2,
                               const FreqFunction& f3, const StarQuadOptions& q = {});
// the j -> infinity form: f3 evaluated at eta
TrilinearResult lambda_star_limit(int d, int m, const FreqFunction& f1, const FreqFunction& f2,
                                  const FreqFunction& f3, const StarQuadOptions& q = {});

// L2 norm on [lo, hi] by the trapezoid rule
double freq_l2_norm(const FreqFunction& f, int min_points = 4097);

// f1 = exp(-i c_d 2^m xi^{d/(d-1)} eta0^{-1/(d-1)}) / sqrt(3/2) on [1/2, 2];
// f2 = f3 = bump of full width 2^{-m} centred at eta0 = 1
struct WitnessInputs {
  FreqFunction f1, f2, f3;
};
WitnessInputs witness_inputs(int d, int m);
// a unit-norm random trigonometric polynomial on [1/2, 2] (modes -4..4 of the interval)
FreqFunction random_window_signal(std::uint64_t seed, std::int64_t trial);

// Lambda*_m at the witness inputs
TrilinearResult failure_witness(int d, int m, const StarQuadOptions& q = {});
// same with f1 replaced by random_window_signal(seed, m)
TrilinearResult failure_contrast(int d, int m, std::uint64_t seed, const StarQuadOptions& q = {});

enum class MultiplierSide { positive_j, negative_j };

// m(eta) = int f Phi1(xi) exp(i (c_d 2^m eta^{-1/(d-1)} xi^{d/(d-1)} + 2 pi 2^{-(d-1)|j|} alpha xi)) dxi
// (positive side) or m(xi) = int f Phi1(eta) exp(i (c_d 2^m xi^{d/(d-1)} eta^{-1/(d-1)}
// + 2 pi 2^{-(d-1)|j|} alpha eta)) deta (negative side). alpha = 2^m ell is the left end of the cell
// [2^m ell, 2^m (ell + 1)); Phi1 = phi1_hat. f lives on an interval grid inside (0, inf) and the sum is
// the rectangle rule of inner_I.
struct MultiplierSpec {
  int d = 2;
  int j = 1;
  int m = 0;
  long ell = 0;
  MultiplierSide side = MultiplierSide::positive_j;

  double alpha() const { return std::ldexp(double(ell), m); }
};
cvec multiplier_mdjm(const MultiplierSpec& s, const SampledSignal& f, const std::vector<double>& probes);
// family point q with m(probe) = <f Phi1, e^{iq}>_I exactly
PhaseFamilyPoint multiplier_probe_point(const MultiplierSpec& s, double probe);
// f Phi1 on the same grid
SampledSignal multiplier_input(const SampledSignal& f);

// decay weight: 2^{((d-1)|j| - m)/8} when |j| <= m/(d-1), else max{2^{(m - (d-1)|j|)/3}, 2^{-eps0 m}}
double gamma_jm(int d, int j, int m, double eps0);
double gamma_jm(int d, int j, int m);  // eps0 = 1/(8d)
// sum_{m=0}^{m_max} gamma_jm(d, j, m, eps0)
double gamma_m_sum(int d, int j, int m_max, double eps0);

}  // namespace bht
