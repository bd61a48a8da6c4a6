#include "bht/paraproducts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bht/bumps.hpp"
#include "bht/lattice.hpp"

namespace bht {

namespace {

double pow2(double e) { return std::exp2(e); }

bool same_period(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

// sample points -5/2 + 5 a / M of the coefficient box
std::vector<double> box_points(std::size_t M) {
  std::vector<double> x(M);
  for (std::size_t a = 0; a < M; ++a) x[a] = -0.5 * kCoeffBoxPeriod + kCoeffBoxPeriod * double(a) / double(M);
  return x;
}

std::size_t box_samples(int n_box, int samples) {
  if (n_box < 0) throw std::invalid_argument("n_box must be nonnegative");
  if (samples < 16) throw std::invalid_argument("coefficient sampling needs at least 16 points");
  std::size_t need = next_pow2(static_cast<std::size_t>(4 * n_box + 4));
  return std::max(need, next_pow2(static_cast<std::size_t>(samples)));
}

// coefficients of the box samples F[a] (xi_a = box_points), normalized so that F(xi) = sum_n C_n e^{2 pi i n xi / 5}
CoeffLine line_coeffs(cvec F, int n_box) {
  std::size_t M = F.size();
  fft_raw(F.data(), M, -1);
  CoeffLine out;
  out.n_box = n_box;
  out.C.assign(static_cast<std::size_t>(2 * n_box + 1), 0.0);
  double total = 0.0, inside = 0.0;
  for (std::size_t k = 0; k < M; ++k) {
    long n = k < M / 2 ? long(k) : long(k) - long(M);
    // origin at -5/2 contributes (-1)^n
    cplx c = F[k] / double(M) * ((n % 2 == 0) ? 1.0 : -1.0);
    total += std::norm(c);
    if (std::abs(n) <= n_box) {
      out.C[static_cast<std::size_t>(n + n_box)] = c;
      inside += std::norm(c);
    }
  }
  out.total_energy = total;
  out.tail_energy = std::max(0.0, total - inside);
  return out;
}

// F[a][b] over xi_a, eta_b
CoeffGrid grid_coeffs(std::vector<cvec> F, int n_box) {
  std::size_t M = F.size();
  parallel_for(M, [&](std::size_t a) { fft_raw(F[a].data(), M, -1); });
  std::vector<cvec> T(M, cvec(M));
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = 0; b < M; ++b) T[b][a] = F[a][b];
  parallel_for(M, [&](std::size_t b) { fft_raw(T[b].data(), M, -1); });
  CoeffGrid out;
  out.n_box = n_box;
  std::size_t W = static_cast<std::size_t>(2 * n_box + 1);
  out.C.assign(W, cvec(W, 0.0));
  double total = 0.0, inside = 0.0;
  double norm = 1.0 / (double(M) * double(M));
  for (std::size_t k2 = 0; k2 < M; ++k2) {
    long n2 = k2 < M / 2 ? long(k2) : long(k2) - long(M);
    for (std::size_t k1 = 0; k1 < M; ++k1) {
      long n1 = k1 < M / 2 ? long(k1) : long(k1) - long(M);
      cplx c = T[k2][k1] * norm * (((n1 + n2) % 2 == 0) ? 1.0 : -1.0);
      total += std::norm(c);
      if (std::abs(n1) <= n_box && std::abs(n2) <= n_box) {
        out.C[static_cast<std::size_t>(n1 + n_box)][static_cast<std::size_t>(n2 + n_box)] = c;
        inside += std::norm(c);
      }
    }
  }
  out.total_energy = total;
  out.tail_energy = std::max(0.0, total - inside);
  return out;
}

void check_gap(int d, int hi, int lo, const char* what) {
  if (d < 2) throw std::invalid_argument("degree d must be at least 2");
  if (hi - lo < nonstationary_gap(d)) throw std::invalid_argument(what);
}

// Fourier terms of a factor restricted to the union of its windows
struct Factor {
  SparseSpectrum sp;
  double norm2 = 0.0;
};

SampledSignal piece_from(const ParaparamSet& p, int l, int j, const SparseSpectrum& sp, const Grid1D& out) {
  double s = p.window_scale(l, j);
  long n = l == 1 ? p.n1 : p.n2;
  SparseSpectrum w;
  w.period = sp.period;
  for (std::size_t i = 0; i < sp.idx.size(); ++i) {
    double u = double(sp.idx[i]) / sp.period / s;
    double win = l == 1 ? para_window1(u) : para_window2(u);
    if (win == 0.0) continue;
    w.idx.push_back(sp.idx[i]);
    w.coef.push_back(sp.coef[i] * win * std::polar(1.0, kTwoPi * double(n) * u));
    w.max_freq = std::max(w.max_freq, std::abs(double(sp.idx[i])) / sp.period);
  }
  return synthesize_sparse(w, out);
}

SampledSignal sum_pieces(const ParaparamSet& p, const SparseSpectrum& s1, const SparseSpectrum& s2, const Grid1D& out) {
  SampledSignal acc{out, cvec(out.count, 0.0), Band::full(out)};
  for (int j = p.j_lo; j <= p.j_hi; ++j) {
    auto a = piece_from(p, 1, j, s1, out);
    auto b = piece_from(p, 2, j, s2, out);
    for (std::size_t k = 0; k < out.count; ++k) acc.samples[k] += a.samples[k] * b.samples[k];
  }
  return acc;
}

Factor random_factor(const Grid1D& g, double lo, double hi, std::uint64_t seed, std::int64_t trial, std::int64_t slot) {
  Rng rng = Rng::keyed(seed, {trial, slot});
  Factor f;
  f.sp.period = g.period();
  double P = g.period();
  long klo = static_cast<long>(std::ceil(lo * P)), khi = static_cast<long>(std::floor(hi * P));
  for (long k = klo; k <= khi; ++k) {
    if (2 * std::abs(k) >= static_cast<long>(g.count)) continue;
    cplx z = rng.complex_normal();
    f.sp.idx.push_back(k);
    f.sp.coef.push_back(z);
    f.norm2 += std::norm(z) * P;
    f.sp.max_freq = std::max(f.sp.max_freq, std::abs(double(k)) / P);
  }
  return f;
}

}  // namespace

void ParaparamSet::validate() const {
  if (L1 < 1 || L2 < 1) throw std::invalid_argument("paraproduct: L1, L2 must be >= 1");
  if (j_hi < j_lo) throw std::invalid_argument("paraproduct: empty j range");
}

double ParaparamSet::window_scale(int l, int j) const {
  if (l == 1) return pow2(double(L1) * j + M1);
  if (l == 2) return pow2(double(L2) * j + M2);
  throw std::invalid_argument("paraproduct: factor index must be 1 or 2");
}

double para_window1(double u) { return u > 0.0 ? phi_hat(u) : 0.0; }
double para_window2(double u) { return theta(u); }

SampledSignal para_piece(const ParaparamSet& p, int l, int j, const SampledSignal& f, const Grid1D& out) {
  p.validate();
  return piece_from(p, l, j, sparse_spectrum(f), out);
}

Grid1D paraproduct_grid(const ParaparamSet& p, double bins) {
  p.validate();
  if (!(bins > 0.0)) throw std::invalid_argument("paraproduct_grid: bins must be positive");
  double narrow = INFINITY, fmax = 0.0;
  for (int j = p.j_lo; j <= p.j_hi; ++j) {
    double s1 = p.window_scale(1, j), s2 = p.window_scale(2, j);
    narrow = std::min({narrow, 1.5 * s1, 2.0 * s2});
    fmax = std::max(fmax, 2.0 * s1 + s2);
  }
  double P = bins / narrow;
  auto count = next_pow2(static_cast<std::size_t>(std::ceil(2.0 * 1.1 * fmax * P)));
  return make_grid(0.0, P, std::max<std::size_t>(count, 16));
}

SampledSignal apply_paraproduct(const ParaparamSet& p, const SampledSignal& f1, const SampledSignal& f2,
                                const Grid1D& out) {
  p.validate();
  return sum_pieces(p, sparse_spectrum(f1), sparse_spectrum(f2), out);
}

double paraproduct_ratio(const ParaparamSet& p, std::uint64_t seed, std::int64_t trial) {
  p.validate();
  Grid1D g = paraproduct_grid(p);
  double lo1 = 0.5 * p.window_scale(1, p.j_lo), hi1 = 2.0 * p.window_scale(1, p.j_hi);
  double hi2 = p.window_scale(2, p.j_hi);
  Factor a = random_factor(g, lo1, hi1, seed, trial, 0);
  Factor b = random_factor(g, -hi2, hi2, seed, trial, 1);
  double den = std::sqrt(a.norm2 * b.norm2);
  if (!(den > 0.0)) return 0.0;
  return lp_norm(sum_pieces(p, a.sp, b.sp, g), 1.0) / den;
}

double paraproduct_max_ratio(const ParaparamSet& p, std::uint64_t seed, int trials) {
  if (trials < 1) throw std::invalid_argument("paraproduct_max_ratio: trials must be positive");
  std::vector<double> r(static_cast<std::size_t>(trials));
  parallel_for(r.size(), [&](std::size_t t) { r[t] = paraproduct_ratio(p, seed, static_cast<std::int64_t>(t)); });
  return *std::max_element(r.begin(), r.end());
}

cplx CoeffGrid::at(long n1, long n2) const {
  if (std::abs(n1) > n_box || std::abs(n2) > n_box) return 0.0;
  return C[static_cast<std::size_t>(n1 + n_box)][static_cast<std::size_t>(n2 + n_box)];
}

double CoeffGrid::max_abs() const {
  double m = 0.0;
  for (auto& row : C)
    for (auto& c : row) m = std::max(m, std::abs(c));
  return m;
}

cplx CoeffGrid::reconstruct(double xi, double eta) const {
  cplx s = 0.0;
  for (long n1 = -n_box; n1 <= n_box; ++n1) {
    cplx row = 0.0;
    for (long n2 = -n_box; n2 <= n_box; ++n2) row += at(n1, n2) * std::polar(1.0, kTwoPi * double(n2) * eta / period);
    s += row * std::polar(1.0, kTwoPi * double(n1) * xi / period);
  }
  return s;
}

cplx CoeffLine::at(long n) const {
  if (std::abs(n) > n_box) return 0.0;
  return C[static_cast<std::size_t>(n + n_box)];
}

double CoeffLine::max_abs() const {
  double m = 0.0;
  for (auto& c : C) m = std::max(m, std::abs(c));
  return m;
}

cplx CoeffLine::reconstruct(double xi) const {
  cplx s = 0.0;
  for (long n = -n_box; n <= n_box; ++n) s += at(n) * std::polar(1.0, kTwoPi * double(n) * xi / period);
  return s;
}

int nonstationary_gap(int d) {
  if (d < 2) throw std::invalid_argument("degree d must be at least 2");
  // 2^{m-1} > d 2^{d-1} 2^{m'+1}
  return static_cast<int>(std::floor(2.0 + std::log2(double(d) * pow2(d - 1)))) + 1;
}

CoeffGrid fourier_coeffs_C1(int d, int m, int m_prime, int n_box, int samples) {
  check_gap(d, m, m_prime, "fourier_coeffs_C1: needs m - m' >= nonstationary gap");
  std::size_t M = box_samples(n_box, samples);
  auto x = box_points(M);
  std::vector<double> ys{0.0};
  std::vector<std::size_t> rows;
  for (std::size_t b = 0; b < M; ++b)
    if (phi_hat(x[b]) != 0.0) {
      rows.push_back(b);
      ys.push_back(pow2(m_prime) * x[b]);
    }
  // columns xi_a = 2^m x_a = (c0 + a) dx
  auto tab = symbol_table_xi_lattice(d, ys, pow2(m) * kCoeffBoxPeriod / double(M), -long(M / 2), M);
  std::vector<cvec> F(M, cvec(M, 0.0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t b = rows[r];
    double wb = phi_hat(x[b]);
    for (std::size_t a = 0; a < M; ++a) {
      double wa = phi_hat(x[a]);
      if (wa != 0.0) F[a][b] = (tab[r + 1][a] - tab[0][a]) * wa * wb;
    }
  }
  return grid_coeffs(std::move(F), n_box);
}

CoeffGrid fourier_coeffs_C2(int d, int m, int m_prime, int n_box, int samples) {
  check_gap(d, m_prime, m, "fourier_coeffs_C2: needs m' - m >= nonstationary gap");
  std::size_t M = box_samples(n_box, samples);
  auto x = box_points(M);
  std::vector<double> xs{0.0};
  std::vector<std::size_t> rows;
  for (std::size_t a = 0; a < M; ++a)
    if (phi_hat(x[a]) != 0.0) {
      rows.push_back(a);
      xs.push_back(pow2(m) * x[a]);
    }
  auto tab = symbol_table_eta_lattice(d, xs, pow2(m_prime) * kCoeffBoxPeriod / double(M), -long(M / 2), M);
  std::vector<cvec> F(M, cvec(M, 0.0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t a = rows[r];
    double wa = phi_hat(x[a]);
    for (std::size_t b = 0; b < M; ++b) {
      double wb = phi_hat(x[b]);
      if (wb != 0.0) F[a][b] = (tab[r + 1][b] - tab[0][b]) * wa * wb;
    }
  }
  return grid_coeffs(std::move(F), n_box);
}

CoeffLine fourier_coeffs_C1_line(int m, int n_box, int samples) {
  std::size_t M = box_samples(n_box, samples);
  auto x = box_points(M);
  auto tab = symbol_table_xi_lattice(2, {0.0}, pow2(m) * kCoeffBoxPeriod / double(M), -long(M / 2), M);
  cvec F(M);
  for (std::size_t a = 0; a < M; ++a) F[a] = tab[0][a] * phi_hat(x[a]);
  return line_coeffs(std::move(F), n_box);
}

CoeffLine fourier_coeffs_C2_line(int d, int m_prime, int n_box, int samples) {
  if (d < 2) throw std::invalid_argument("degree d must be at least 2");
  std::size_t M = box_samples(n_box, samples);
  auto x = box_points(M);
  auto tab = symbol_table_eta_lattice(d, {0.0}, pow2(m_prime) * kCoeffBoxPeriod / double(M), -long(M / 2), M);
  cvec F(M);
  for (std::size_t b = 0; b < M; ++b) F[b] = tab[0][b] * phi_hat(x[b]);
  return line_coeffs(std::move(F), n_box);
}

SampledSignal apply_C1_expansion(int d, int j, int m, int m_prime, const SampledSignal& f, const SampledSignal& g,
                                 const Grid1D& out, int n_box) {
  double P = out.period();
  if (!same_period(f.grid.period(), P) || !same_period(g.grid.period(), P))
    throw std::invalid_argument("apply_C1_expansion: f, g and the output must share one period");
  auto C = fourier_coeffs_C1(d, m, m_prime, n_box);
  auto Cn = fourier_coeffs_C1_line(m, n_box);
  double sx = pow2(double(j) + m), sy = pow2(double(d) * j + m_prime);
  SparseSpectrum sf = sparse_spectrum(f, [sx](double xi) { return phi1_hat(xi / sx); });
  SparseSpectrum sg = sparse_spectrum(g, [sy](double eta) { return phi1_hat(eta / sy); });
  SparseSpectrum sg0 = sparse_spectrum(g, [sy](double eta) { return phi_hat(eta / sy); });
  if (sf.max_freq + std::max(sg.max_freq, sg0.max_freq) >= out.nyquist())
    throw std::invalid_argument("apply_C1_expansion: output grid does not resolve the windows");

  // modulated pieces e^{2 pi i n u / 5} on the output grid
  auto modulated = [&](const SparseSpectrum& sp, double s, long n) {
    SparseSpectrum w = sp;
    for (std::size_t i = 0; i < w.idx.size(); ++i) {
      double u = double(w.idx[i]) / w.period / s;
      w.coef[i] *= std::polar(1.0, kTwoPi * double(n) * u / kCoeffBoxPeriod);
    }
    return synthesize_sparse(w, out).samples;
  };
  std::size_t W = static_cast<std::size_t>(2 * n_box + 1);
  std::vector<cvec> fn(W), gn(W);
  parallel_for(W, [&](std::size_t i) {
    long n = long(i) - n_box;
    fn[i] = modulated(sf, sx, n);
    gn[i] = modulated(sg, sy, n);
  });
  SampledSignal res{out, cvec(out.count, 0.0), Band::full(out)};
  auto g0 = synthesize_sparse(sg0, out).samples;
  cvec inner(out.count);
  for (std::size_t a = 0; a < W; ++a) {
    std::fill(inner.begin(), inner.end(), cplx(0.0));
    for (std::size_t b = 0; b < W; ++b) {
      cplx c = C.C[a][b];
      if (c == cplx(0.0)) continue;
      for (std::size_t k = 0; k < out.count; ++k) inner[k] += c * gn[b][k];
    }
    cplx cn = Cn.C[a];
    for (std::size_t k = 0; k < out.count; ++k) res.samples[k] += fn[a][k] * (inner[k] + cn * g0[k]);
  }
  return res;
}

}  // namespace bht
