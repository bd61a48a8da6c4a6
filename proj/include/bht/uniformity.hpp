#pragma once

#include <functional>
#include <vector>

#include "bht/foundation.hpp"

namespace bht {

// Functions on a bounded interval I are SampledSignals on a grid with origin lo and period |I|.
// The inner product is the rectangle rule <f, g>_I = step * sum f_k conj(g_k), which makes
// L2(I) an exact finite-dimensional Hilbert space: ||e^{iq}||^2 = |I| for every real q.
Grid1D interval_grid(double lo, double hi, std::size_t n);
cplx inner_I(const SampledSignal& f, const SampledSignal& g);
double norm_I(const SampledSignal& f);

enum class PhaseFamily { Q1, Q2 };

// Q1: a xi^{d/(d-1)} + b xi,  Q2: a xi^{-1/(d-1)} + b xi, with 2^{m-100} <= |a| <= 2^{m+100}
struct PhaseFamilyPoint {
  PhaseFamily family = PhaseFamily::Q1;
  double a = 0.0;
  double b = 0.0;
  int m_tag = 0;
  int d = 2;

  double eval(double xi) const;  // needs xi > 0
  bool valid() const;
};

struct FamilyGrid {
  std::vector<PhaseFamilyPoint> points;

  // |a| on a log grid over 2^{m-2}..2^{m+2} (na magnitudes, both signs), b linear on [-2^{m+2}, 2^{m+2}]
  static FamilyGrid standard(PhaseFamily family, int d, int m, int na = 64, int nb = 256);
  static FamilyGrid product(PhaseFamily family, int d, int m, const std::vector<double>& as,
                            const std::vector<double>& bs);
  void inject(const PhaseFamilyPoint& q) { points.push_back(q); }
};

SampledSignal phase_exponential(const Grid1D& I, const PhaseFamilyPoint& q);  // e^{iq}
// <f, e^{iq}>_I = int_I f e^{-iq}
cplx pair_with_phase(const SampledSignal& f, const PhaseFamilyPoint& q);

struct UniformityReport {
  double deficit = 0.0;  // max over the grid of |<f, e^{iq}>_I| / (|I|^{1/2} ||f||_I)
  double max_pairing = 0.0;  // max |<f, e^{iq}>_I|
  PhaseFamilyPoint argmax;
  std::size_t grid_size = 0;
};

// ties resolve to the lexicographically smallest (a, b)
UniformityReport uniformity_deficit(const SampledSignal& f, const FamilyGrid& grid);

// f = <f, g> g + |I|^{-1} <f, e^{iq}> e^{iq} with g the unit vector along f's component orthogonal to e^{iq}
struct Decomposition {
  cplx coef_g = 0.0;
  cplx coef_q = 0.0;  // <f, e^{iq}>
  SampledSignal g;
  double reconstruction_error = 0.0;  // max |f - sum| / max |f|
  double pythagoras_error = 0.0;      // |<f,f> - |<f,g>|^2 - |I|^{-1}|<f,e^{iq}>|^2| / <f,f>
};
Decomposition decompose(const SampledSignal& f, const PhaseFamilyPoint& q);

// Right side of the proof-level inequality for L(f) = |<f, h>_I| at witness q:
// sqrt(1 - |<f,e^{iq}>|^2 / (|I| ||f||^2)) ||h|| ||f|| + |I|^{-1} |<f,e^{iq}>| |L(e^{iq})|
double proof_level_bound(const SampledSignal& f, const SampledSignal& h, const PhaseFamilyPoint& q);

// max{U_est, 2 sigma^{-1} Q_grid} for L(f) = |<f, h>_I|. U_est ranges over the corpus members that are
// sigma-uniform with respect to the grid; Q_grid = max over the grid of |L(e^{iq})|.
struct Certificate {
  double bound = 0.0;
  double u_est = 0.0;
  double q_grid = 0.0;
  std::size_t uniform_members = 0;
};
Certificate certificate_bound(const SampledSignal& h, double sigma, const FamilyGrid& grid,
                              const std::vector<SampledSignal>& corpus);

// f minus its orthogonal projection onto span{e^{iq} : q in grid} (modified Gram-Schmidt, two passes)
SampledSignal project_out_family(const SampledSignal& f, const FamilyGrid& grid);

}  // namespace bht
