#pragma once

#include <vector>

#include "bht/foundation.hpp"
#include "bht/operators.hpp"

namespace bht {

// Pi(f1, f2) = sum_{j in [j_lo, j_hi]} f_{1,j,n1} f_{2,j,n2}, where f_{l,j,n} has transform
// f_l^(xi) e^{2 pi i n u} Phi_l(u) at u = xi / 2^{L_l j + M_l}.
// Phi_1 is phi_hat restricted to xi > 0 (support [1/2, 2]); Phi_2 is theta (support [-1, 1], value 1 at 0).
struct ParaparamSet {
  int L1 = 1, L2 = 1;
  int M1 = 0, M2 = 0;
  long n1 = 0, n2 = 0;
  int j_lo = 0, j_hi = 0;

  void validate() const;
  double window_scale(int l, int j) const;  // 2^{L_l j + M_l}
};

double para_window1(double u);
double para_window2(double u);

// f_{l,j,n} for one factor; f's grid period must divide the output period
SampledSignal para_piece(const ParaparamSet& p, int l, int j, const SampledSignal& f, const Grid1D& out);

// period with about `bins` bins across the narrowest window, count resolving every product
Grid1D paraproduct_grid(const ParaparamSet& p, double bins = 4.0);
SampledSignal apply_paraproduct(const ParaparamSet& p, const SampledSignal& f1, const SampledSignal& f2,
                                const Grid1D& out);

// ||Pi(f1,f2)||_1 / (||f1||_2 ||f2||_2) with Gaussian inputs whose coefficients fill the union of
// the windows; keyed by (seed, trial, slot)
double paraproduct_ratio(const ParaparamSet& p, std::uint64_t seed, std::int64_t trial);
// max of the ratio over trials 0..trials-1
double paraproduct_max_ratio(const ParaparamSet& p, std::uint64_t seed, int trials);

// Fourier coefficients on the box [-5/2, 5/2]^2, basis e^{2 pi i (n1 xi + n2 eta) / 5}.
constexpr double kCoeffBoxPeriod = 5.0;

struct CoeffGrid {
  int n_box = 0;
  double period = kCoeffBoxPeriod;
  std::vector<cvec> C;        // C[n1 + n_box][n2 + n_box]
  double total_energy = 0.0;  // sum of |C|^2 over every resolved coefficient
  double tail_energy = 0.0;   // part of total_energy outside the box |n1|, |n2| <= n_box

  cplx at(long n1, long n2) const;
  double max_abs() const;
  cplx reconstruct(double xi, double eta) const;
};

struct CoeffLine {
  int n_box = 0;
  double period = kCoeffBoxPeriod;
  cvec C;  // C[n + n_box]
  double total_energy = 0.0;
  double tail_energy = 0.0;

  cplx at(long n) const;
  double max_abs() const;
  cplx reconstruct(double xi) const;
};

// smallest m - m' for which |xi| > d 2^{d-1} |eta| on the support of phi_hat(2^-m xi) phi_hat(2^-m' eta),
// so xi t + eta t^d has no critical point on supp rho
int nonstationary_gap(int d);

// (m~)(2^m xi, 2^m' eta) phi_hat(xi) phi_hat(eta) with m~ = m_d - rho^(xi); needs m - m' >= gap
CoeffGrid fourier_coeffs_C1(int d, int m, int m_prime, int n_box = 16, int samples = 256);
// (m_d - int rho e^{-2 pi i eta t^d})(2^m xi, 2^m' eta) phi_hat(xi) phi_hat(eta); needs m' - m >= gap
CoeffGrid fourier_coeffs_C2(int d, int m, int m_prime, int n_box = 16, int samples = 256);
// rho^(2^m xi) phi_hat(xi)
CoeffLine fourier_coeffs_C1_line(int m, int n_box = 16, int samples = 256);
// (int rho e^{-2 pi i 2^m' eta t^d}) phi_hat(eta)
CoeffLine fourier_coeffs_C2_line(int d, int m_prime, int n_box = 16, int samples = 256);

// The (m, m') frequency piece of T_{Gamma,j} rebuilt from the C^(1) expansion:
// sum_{n1,n2} C_{n1,n2} f_{j,m,n1} g_{j,m',n2} + sum_n C_n f_{j,m,n} g_{j,m'},
// with phi1_hat cutoffs carrying the modulations e^{2 pi i n u / 5}. f, g, out share one period.
SampledSignal apply_C1_expansion(int d, int j, int m, int m_prime, const SampledSignal& f, const SampledSignal& g,
                                 const Grid1D& out, int n_box);

}  // namespace bht
