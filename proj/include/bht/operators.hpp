#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bht/foundation.hpp"

namespace bht {

struct DyadicParams {
  int d = 2;
  int j = 0;
  int m = 0;
  long n = 0;  // spatial cell, used by the cell-localized operator
  int L = 4;

  // |j| <= m/(d-1)
  bool small_j() const { return static_cast<long>(std::abs(j)) * (d - 1) <= m; }
  void validate() const;
};

// P(t) = sum_k coeffs[k] t^k
struct PolynomialSpec {
  std::vector<double> coeffs;

  int degree() const;
  double eval(double t) const;
  double deriv(double t, int order = 1) const;
  // P^{(n)} has no zero on [-2, 2]
  bool derivative_nonvanishing(int n) const;
  std::vector<bool> nonvanishing_flags() const;  // index n = 0..degree
  void validate() const;

  static PolynomialSpec monomial(int d);
};

// weight rho0(2^j (t - t0)) multiplied into the kernel
struct Localization {
  int j = 0;
  double t0 = 0.0;
};

struct TimeQuadOptions {
  int order = 32;                // Gauss-Legendre nodes per panel
  double cycles_per_panel = 8.0;
  int min_panels = 16;           // per support interval
};

// T(f,g)(x) = int f(x - t) g(x - P(t)) rho(t) [rho0(2^j (t - t0))] dt, inputs periodic on their grids
SampledSignal apply_TP(const PolynomialSpec& P, const SampledSignal& f, const SampledSignal& g, const Grid1D& out,
                       std::optional<Localization> loc = std::nullopt, const TimeQuadOptions& q = {});

// int f(x - t) g(x - t^d) 2^j rho(2^j t) dt
SampledSignal apply_TGammaj(const DyadicParams& p, const SampledSignal& f, const SampledSignal& g, const Grid1D& out,
                            const TimeQuadOptions& q = {});
// sum over |j| <= J of the above
SampledSignal apply_TGamma_partial(int d, int J, const SampledSignal& f, const SampledSignal& g, const Grid1D& out,
                                   const TimeQuadOptions& q = {});

// Common torus for T_{j,m}: period with about `bins` frequency bins across the lower window,
// sample count resolving the sum of both windows.
Grid1D tjm_grid(const DyadicParams& p, double bins = 4.0);

// T_{j,m} from the double frequency sum with the windowed symbol m_j; f, g, out share one period
SampledSignal apply_Tjm_freq(const DyadicParams& p, const SampledSignal& f, const SampledSignal& g, const Grid1D& out);
// same with the g window at 2^{dj + m'} instead of 2^{dj + m}
SampledSignal apply_Tjmm_freq(const DyadicParams& p, int m_prime, const SampledSignal& f, const SampledSignal& g,
                              const Grid1D& out);
// T_{j,m} from window restriction followed by t-quadrature
SampledSignal apply_Tjm_time(const DyadicParams& p, const SampledSignal& f, const SampledSignal& g, const Grid1D& out,
                             const TimeQuadOptions& q = {});

// Grids for the bilinear restriction operators. For j >= 0, f lives on period `base` and g and the
// output on 2^{(d-1)j} base; for j < 0 the roles of f and g swap.
struct BjmGrids {
  Grid1D f;
  Grid1D g;
  Grid1D out;
};
BjmGrids bjm_grids(const DyadicParams& p, double base, bool wide_window = false);

SampledSignal apply_Bjm(const DyadicParams& p, const SampledSignal& f, const SampledSignal& g, const Grid1D& out);
// Phi_1 windows and the smooth cell indicator of length 2^{(d-1)|j|+m} at cell p.n
SampledSignal apply_Bjmn(const DyadicParams& p, const SampledSignal& f, const SampledSignal& g, const Grid1D& out);

// Gaussian inputs for B_{j,m} drawn directly as Fourier coefficients on the band 1/2 <= |xi| <= 2
// (19/8 with wide windows). Draws are keyed by (seed, trial, slot) only, so a trial reuses the same
// coefficient stream across scales. ratio() equals ||B(f,g)||_1 / (||f||_2 ||g||_2) for inputs().
class BjmSampler {
 public:
  BjmSampler(const DyadicParams& p, double base, bool wide_window = false);
  const BjmGrids& grids() const { return grids_; }
  std::pair<SampledSignal, SampledSignal> inputs(std::uint64_t seed, std::int64_t trial) const;
  double ratio(std::uint64_t seed, std::int64_t trial) const;

  struct Impl;

 private:
  DyadicParams p_;
  BjmGrids grids_;
  std::shared_ptr<const Impl> impl_;
};

// drop cached symbol tables
void clear_symbol_cache();

}  // namespace bht
