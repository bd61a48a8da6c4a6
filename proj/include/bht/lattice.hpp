#pragma once

#include <vector>

#include "bht/foundation.hpp"

namespace bht {

// Tables of m_d on a product of an arbitrary list and an arithmetic lattice.
// Each row is a trapezoid rule in the lattice-conjugate variable evaluated by one FFT;
// the integrand is smooth and compactly supported, so the rule converges spectrally.
//
// eta-lattice: out[r][c] = m_d(xs[r], (c0 + c) * dy)   (substitution u = t^d)
// xi-lattice:  out[r][c] = m_d((c0 + c) * dx, ys[r])
std::vector<cvec> symbol_table_eta_lattice(int d, const std::vector<double>& xs, double dy, long c0, std::size_t ncols);
std::vector<cvec> symbol_table_xi_lattice(int d, const std::vector<double>& ys, double dx, long c0, std::size_t ncols);

// Extra frequency headroom (cycles per unit t) beyond which the transform of rho is negligible.
constexpr double kRhoBandMargin = 200.0;

}  // namespace bht
