#include "bht/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "bht/bumps.hpp"

namespace bht {

namespace {

struct Samples {
  std::vector<double> t;     // node in t
  std::vector<double> w;     // rho(t) |dt/dv| * step
  std::vector<std::size_t> bin;
};

std::size_t wrap(long k, std::size_t n) {
  long r = k % static_cast<long>(n);
  if (r < 0) r += static_cast<long>(n);
  return static_cast<std::size_t>(r);
}

std::size_t lattice_size(double need, double spacing, std::size_t ncols) {
  auto n = static_cast<std::size_t>(std::ceil(need / spacing));
  return next_pow2(std::max<std::size_t>({n, ncols, 16}));
}

double lattice_extent(long c0, std::size_t ncols, double spacing) {
  double a = std::abs(static_cast<double>(c0));
  double b = std::abs(static_cast<double>(c0 + static_cast<long>(ncols) - 1));
  return std::max(a, b) * spacing;
}

std::vector<cvec> run_rows(std::size_t nrows, std::size_t nu, long c0, std::size_t ncols,
                           const std::function<void(std::size_t, cvec&)>& fill) {
  std::vector<cvec> out(nrows);
  parallel_for(nrows, [&](std::size_t r) {
    cvec h(nu, 0.0);
    fill(r, h);
    fft_raw(h.data(), nu, -1);
    cvec row(ncols);
    for (std::size_t c = 0; c < ncols; ++c) row[c] = h[wrap(c0 + static_cast<long>(c), nu)];
    out[r] = std::move(row);
  });
  return out;
}

}  // namespace

std::vector<cvec> symbol_table_eta_lattice(int d, const std::vector<double>& xs, double dy, long c0, std::size_t ncols) {
  double xmax = 0.0;
  for (double x : xs) xmax = std::max(xmax, std::abs(x));
  double dtdu = std::ldexp(1.0, d - 1) / d;  // max |dt/du| on supp rho
  double need = lattice_extent(c0, ncols, dy) + (xmax + kRhoBandMargin) * dtdu;
  std::size_t nu = lattice_size(need, dy, ncols);
  double step = 1.0 / (static_cast<double>(nu) * dy);

  // nodes u = k * step over the image of supp rho under t -> t^d
  Samples s;
  double umax = std::ldexp(1.0, d);
  long kmax = static_cast<long>(std::ceil(umax / step));
  long kmin = (d % 2 == 0) ? 0 : -kmax;
  bool even = d % 2 == 0;
  for (long k = kmin; k <= kmax; ++k) {
    double u = static_cast<double>(k) * step;
    if (u == 0.0) continue;
    double t = (u > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(u), 1.0 / d);
    double r = rho(t);
    if (r == 0.0) continue;
    s.t.push_back(t);
    s.w.push_back(r * std::abs(t) / (d * std::abs(u)) * step);
    s.bin.push_back(wrap(k, nu));
  }
  return run_rows(xs.size(), nu, c0, ncols, [&](std::size_t row, cvec& h) {
    double x = xs[row];
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      double ph = x * s.t[i];
      ph -= std::floor(ph);
      if (even) {
        // branches +t and -t: rho odd gives -2i sin(2 pi x t)
        h[s.bin[i]] += cplx(0.0, -2.0 * std::sin(kTwoPi * ph)) * s.w[i];
      } else {
        h[s.bin[i]] += std::polar(s.w[i], -kTwoPi * ph);
      }
    }
  });
}

std::vector<cvec> symbol_table_xi_lattice(int d, const std::vector<double>& ys, double dx, long c0, std::size_t ncols) {
  double ymax = 0.0;
  for (double y : ys) ymax = std::max(ymax, std::abs(y));
  double need = lattice_extent(c0, ncols, dx) + ymax * d * std::ldexp(1.0, d - 1) + kRhoBandMargin;
  std::size_t nt = lattice_size(need, dx, ncols);
  double step = 1.0 / (static_cast<double>(nt) * dx);

  Samples s;
  long kmax = static_cast<long>(std::ceil(2.0 / step));
  for (long k = -kmax; k <= kmax; ++k) {
    double t = static_cast<double>(k) * step;
    double r = rho(t);
    if (r == 0.0) continue;
    s.t.push_back(t);
    s.w.push_back(r * step);
    s.bin.push_back(wrap(k, nt));
  }
  return run_rows(ys.size(), nt, c0, ncols, [&](std::size_t row, cvec& h) {
    double y = ys[row];
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      double ph = y * std::pow(s.t[i], d);
      ph -= std::floor(ph);
      h[s.bin[i]] += std::polar(s.w[i], -kTwoPi * ph);
    }
  });
}

}  // namespace bht
