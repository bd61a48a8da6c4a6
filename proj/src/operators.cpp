#include "bht/operators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "bht/bumps.hpp"
#include "bht/lattice.hpp"
#include "bht/quadrature.hpp"

namespace bht {

void DyadicParams::validate() const {
  if (d < 2) throw std::invalid_argument("DyadicParams: d must be >= 2");
  if (m < 0) throw std::invalid_argument("DyadicParams: m must be >= 0");
  if (L < 1) throw std::invalid_argument("DyadicParams: L must be >= 1");
  if (std::abs(j) > 40) throw std::invalid_argument("DyadicParams: |j| too large");
}

int PolynomialSpec::degree() const {
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
    if (coeffs[static_cast<std::size_t>(k)] != 0.0) return k;
  return -1;
}

double PolynomialSpec::eval(double t) const { return deriv(t, 0); }

double PolynomialSpec::deriv(double t, int order) const {
  double acc = 0.0;
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= order; --k) {
    double c = coeffs[static_cast<std::size_t>(k)];
    for (int i = 0; i < order; ++i) c *= (k - i);
    acc = acc * t + c;
  }
  return acc;
}

bool PolynomialSpec::derivative_nonvanishing(int n) const {
  if (n < 0 || n > degree()) return false;
  const int samples = 4096;
  double first = deriv(-2.0, n);
  if (first == 0.0) return false;
  for (int i = 1; i <= samples; ++i) {
    double v = deriv(-2.0 + 4.0 * i / samples, n);
    if (v == 0.0 || (v > 0.0) != (first > 0.0)) return false;
  }
  return true;
}

std::vector<bool> PolynomialSpec::nonvanishing_flags() const {
  std::vector<bool> out;
  for (int n = 0; n <= degree(); ++n) out.push_back(derivative_nonvanishing(n));
  return out;
}

void PolynomialSpec::validate() const {
  if (degree() < 1) throw std::invalid_argument("PolynomialSpec: leading coefficient must be nonzero");
}

PolynomialSpec PolynomialSpec::monomial(int d) {
  PolynomialSpec p;
  p.coeffs.assign(static_cast<std::size_t>(d) + 1, 0.0);
  p.coeffs.back() = 1.0;
  return p;
}

namespace {

bool same_period(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

std::size_t wrap_index(long k, std::size_t n) {
  long r = k % static_cast<long>(n);
  if (r < 0) r += static_cast<long>(n);
  return static_cast<std::size_t>(r);
}

// Evaluates x -> s(x - tau) on an output grid whose period is an integer multiple of the signal's.
class ShiftEvaluator {
 public:
  ShiftEvaluator(const SparseSpectrum& sp, const Grid1D& out) : sp_(sp), out_(out) {
    double q = out.period() / sp.period;
    mult_ = std::lround(q);
    fast_ = mult_ >= 1 && std::abs(q - static_cast<double>(mult_)) < 1e-9 * q;
    if (fast_) {
      for (auto k : sp.idx)
        if (std::abs(k * mult_) >= static_cast<long>(out.count / 2)) fast_ = false;
    }
    base_.resize(sp.idx.size());
    for (std::size_t i = 0; i < sp.idx.size(); ++i) {
      double ph = static_cast<double>(sp.idx[i]) / sp.period * out.origin;
      ph -= std::floor(ph);
      base_[i] = sp.coef[i] * std::polar(1.0, kTwoPi * ph);
    }
  }

  // writes s(x_n - tau) into buf (size out.count)
  void eval(double tau, cvec& buf) const {
    std::fill(buf.begin(), buf.end(), cplx(0.0));
    if (fast_) {
      double step = -tau / sp_.period;
      step -= std::floor(step);
      cplx w = std::polar(1.0, kTwoPi * step);
      cplx cur = 0.0;
      long prev = 0;
      bool have = false;
      for (std::size_t i = 0; i < sp_.idx.size(); ++i) {
        long k = sp_.idx[i];
        if (have && k == prev + 1) {
          cur *= w;
        } else {
          double ph = static_cast<double>(k) * step;
          ph -= std::floor(ph);
          cur = std::polar(1.0, kTwoPi * ph);
        }
        prev = k;
        have = true;
        buf[wrap_index(k * mult_, out_.count)] += base_[i] * cur;
      }
      fft_raw(buf.data(), buf.size(), +1);
      return;
    }
    for (std::size_t n = 0; n < out_.count; ++n) {
      double x = out_.point(n) - tau;
      cplx acc = 0.0;
      for (std::size_t i = 0; i < sp_.idx.size(); ++i) {
        double ph = static_cast<double>(sp_.idx[i]) / sp_.period * x;
        ph -= std::floor(ph);
        acc += sp_.coef[i] * std::polar(1.0, kTwoPi * ph);
      }
      buf[n] = acc;
    }
  }

 private:
  const SparseSpectrum& sp_;
  Grid1D out_;
  long mult_ = 1;
  bool fast_ = false;
  cvec base_;
};

struct Path {
  std::vector<std::pair<double, double>> intervals;
  std::function<double(double)> weight;
  std::function<double(double)> tau_f;
  std::function<double(double)> tau_g;
  std::function<double(double)> dtau_f;
  std::function<double(double)> dtau_g;
};

// panel breakpoints keeping the integrand below cycles_per_panel oscillations per panel
std::vector<double> panel_breaks(double a, double b, const std::function<double(double)>& rate,
                                 const TimeQuadOptions& q) {
  std::vector<double> br{a};
  double hmax = (b - a) / q.min_panels;
  double s = a;
  while (s < b - 1e-15 * std::max(1.0, std::abs(b))) {
    double h = std::min(hmax, b - s);
    for (int it = 0; it < 60; ++it) {
      double r = std::max(rate(s), rate(s + h));
      if (r * h <= q.cycles_per_panel) break;
      h = q.cycles_per_panel / r;
    }
    s = (b - s - h < 1e-12 * (b - a)) ? b : s + h;
    br.push_back(s);
  }
  return br;
}

SampledSignal quad_bilinear(const SampledSignal& f, const SampledSignal& g, const Grid1D& out, const Path& path,
                            const TimeQuadOptions& q) {
  if (q.order < 2 || q.cycles_per_panel <= 0.0 || q.min_panels < 1)
    throw std::invalid_argument("TimeQuadOptions: invalid settings");
  SparseSpectrum sf = sparse_spectrum(f), sg = sparse_spectrum(g);
  SampledSignal result{out, cvec(out.count, 0.0), Band::full(out)};
  if (sf.idx.empty() || sg.idx.empty()) return result;

  auto rate = [&](double s) {
    return sf.max_freq * std::abs(path.dtau_f(s)) + sg.max_freq * std::abs(path.dtau_g(s));
  };
  std::vector<double> nodes, weights;
  const GLRule& rule = gauss_legendre(static_cast<std::size_t>(q.order));
  for (auto [a, b] : path.intervals) {
    if (!(b > a)) continue;
    auto br = panel_breaks(a, b, rate, q);
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
      double lo = br[p], hi = br[p + 1];
      double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        double s = c + h * rule.x[i];
        double w = path.weight(s);
        if (w == 0.0) continue;
        nodes.push_back(s);
        weights.push_back(w * h * rule.w[i]);
      }
    }
  }

  ShiftEvaluator ef(sf, out), eg(sg, out);
  // fixed chunking keeps the reduction order independent of the thread count
  const std::size_t chunks = std::min<std::size_t>(16, std::max<std::size_t>(1, nodes.size()));
  std::vector<cvec> partial(chunks, cvec(out.count, 0.0));
  parallel_for(chunks, [&](std::size_t c) {
    std::size_t lo = nodes.size() * c / chunks, hi = nodes.size() * (c + 1) / chunks;
    cvec bf(out.count), bg(out.count);
    cvec& acc = partial[c];
    for (std::size_t i = lo; i < hi; ++i) {
      ef.eval(path.tau_f(nodes[i]), bf);
      eg.eval(path.tau_g(nodes[i]), bg);
      for (std::size_t n = 0; n < out.count; ++n) acc[n] += weights[i] * bf[n] * bg[n];
    }
  });
  for (const auto& p : partial)
    for (std::size_t n = 0; n < out.count; ++n) result.samples[n] += p[n];
  return result;
}

std::vector<std::pair<double, double>> rho_support() { return {{-2.0, -0.5}, {0.5, 2.0}}; }

// ---- symbol tables --------------------------------------------------------------------------

// m_d(a * dxi, b * deta) for a in the row set (symmetric) and b > 0 in the column range when
// rows_are_xi; otherwise rows index eta. Negative columns follow from m_d(-x,-y) = conj m_d(x,y).
struct SymbolTable {
  bool rows_are_xi = true;
  long rlo = 0, rhi = 0;  // row magnitudes
  long clo = 0, chi = 0;  // positive column range
  std::vector<cvec> rows;  // index r + rhi

  cplx at(long a, long b) const {
    long r = rows_are_xi ? a : b;
    long c = rows_are_xi ? b : a;
    if (c < 0) return std::conj(rows[static_cast<std::size_t>(-r + rhi)][static_cast<std::size_t>(-c - clo)]);
    return rows[static_cast<std::size_t>(r + rhi)][static_cast<std::size_t>(c - clo)];
  }
};

using TableKey = std::tuple<int, double, double, bool, long, long, long, long>;

std::mutex cache_mu;
std::map<TableKey, std::shared_ptr<const SymbolTable>>& table_cache() {
  static std::map<TableKey, std::shared_ptr<const SymbolTable>> c;
  return c;
}
std::vector<TableKey>& cache_order() {
  static std::vector<TableKey> o;
  return o;
}

std::shared_ptr<const SymbolTable> symbol_table(int d, double dxi, double deta, bool rows_are_xi, long rlo, long rhi,
                                                long clo, long chi) {
  TableKey key{d, dxi, deta, rows_are_xi, rlo, rhi, clo, chi};
  {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto it = table_cache().find(key);
    if (it != table_cache().end()) return it->second;
  }
  auto t = std::make_shared<SymbolTable>();
  t->rows_are_xi = rows_are_xi;
  t->rlo = rlo;
  t->rhi = rhi;
  t->clo = clo;
  t->chi = chi;
  std::vector<double> args;
  std::vector<long> rs;
  for (long r = -rhi; r <= rhi; ++r) {
    rs.push_back(r);
    args.push_back(static_cast<double>(r) * (rows_are_xi ? dxi : deta));
  }
  // rows with |r| < rlo are never read; give them a cheap placeholder argument
  std::vector<double> live_args;
  std::vector<std::size_t> live_pos;
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (std::abs(rs[i]) >= rlo) {
      live_args.push_back(args[i]);
      live_pos.push_back(i);
    }
  auto ncols = static_cast<std::size_t>(chi - clo + 1);
  std::vector<cvec> live = rows_are_xi ? symbol_table_eta_lattice(d, live_args, deta, clo, ncols)
                                       : symbol_table_xi_lattice(d, live_args, dxi, clo, ncols);
  t->rows.assign(rs.size(), cvec());
  for (std::size_t i = 0; i < live_pos.size(); ++i) t->rows[live_pos[i]] = std::move(live[i]);

  std::lock_guard<std::mutex> lock(cache_mu);
  auto& cache = table_cache();
  auto& order = cache_order();
  if (!cache.count(key)) {
    cache[key] = t;
    order.push_back(key);
    while (order.size() > 4) {
      cache.erase(order.front());
      order.erase(order.begin());
    }
  }
  return t;
}

std::pair<long, long> magnitude_range(const SparseSpectrum& s) {
  long lo = 0, hi = 0;
  bool first = true;
  for (auto k : s.idx) {
    long a = std::abs(k);
    if (first) {
      lo = hi = a;
      first = false;
    } else {
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  }
  return {lo, hi};
}

// out(x) = pref * sum_{a,b} F_a G_b m_d(a dxi, b deta) exp(2 pi i (a + b) x / P_out)
SampledSignal windowed_bilinear_sum(int d, const SparseSpectrum& sf, const SparseSpectrum& sg, double dxi, double deta,
                                    double pref, const Grid1D& out) {
  SampledSignal result{out, cvec(out.count, 0.0), Band::full(out)};
  if (sf.idx.empty() || sg.idx.empty()) return result;
  for (auto k : sf.idx)
    if (k == 0) throw std::logic_error("windowed_bilinear_sum: zero frequency inside a window");
  for (auto k : sg.idx)
    if (k == 0) throw std::logic_error("windowed_bilinear_sum: zero frequency inside a window");
  auto [flo, fhi] = magnitude_range(sf);
  auto [glo, ghi] = magnitude_range(sg);
  long cmax = fhi + ghi;
  if (2 * cmax >= static_cast<long>(out.count)) throw std::invalid_argument("output grid cannot resolve the product band");

  // the FFT direction of the table runs over the larger bin set
  bool rows_are_xi = sf.idx.size() <= sg.idx.size();
  auto table = rows_are_xi ? symbol_table(d, dxi, deta, true, flo, fhi, glo, ghi)
                           : symbol_table(d, dxi, deta, false, glo, ghi, flo, fhi);

  // accumulate output coefficient c = a + b, offset by cmax
  cvec acc(static_cast<std::size_t>(2 * cmax + 1), 0.0);
  for (std::size_t i = 0; i < sf.idx.size(); ++i) {
    long a = sf.idx[i];
    cplx fa = sf.coef[i];
    for (std::size_t k = 0; k < sg.idx.size(); ++k) {
      long b = sg.idx[k];
      acc[static_cast<std::size_t>(a + b + cmax)] += fa * sg.coef[k] * table->at(a, b);
    }
  }
  cvec buf(out.count, 0.0);
  double P = out.period();
  for (long c = -cmax; c <= cmax; ++c) {
    cplx v = acc[static_cast<std::size_t>(c + cmax)];
    if (v == cplx(0.0)) continue;
    double ph = static_cast<double>(c) / P * out.origin;
    ph -= std::floor(ph);
    buf[wrap_index(c, out.count)] += pref * v * std::polar(1.0, kTwoPi * ph);
  }
  fft_raw(buf.data(), buf.size(), +1);
  result.samples = std::move(buf);
  return result;
}

double pow2(double e) { return std::exp2(e); }

}  // namespace

void clear_symbol_cache() {
  std::lock_guard<std::mutex> lock(cache_mu);
  table_cache().clear();
  cache_order().clear();
}

SampledSignal apply_TP(const PolynomialSpec& P, const SampledSignal& f, const SampledSignal& g, const Grid1D& out,
                       std::optional<Localization> loc, const TimeQuadOptions& q) {
  P.validate();
  Path path;
  path.tau_f = [](double t) { return t; };
  path.dtau_f = [](double) { return 1.0; };
  path.tau_g = [&P](double t) { return P.eval(t); };
  path.dtau_g = [&P](double t) { return P.deriv(t, 1); };
  if (!loc) {
    path.intervals = rho_support();
    path.weight = [](double t) { return rho(t); };
  } else {
    double s = pow2(-loc->j);
    std::vector<std::pair<double, double>> local{{loc->t0 - 2 * s, loc->t0 - 0.5 * s}, {loc->t0 + 0.5 * s, loc->t0 + 2 * s}};
    for (auto [a, b] : rho_support())
      for (auto [c, e] : local) {
        double lo = std::max(a, c), hi = std::min(b, e);
        if (hi > lo) path.intervals.push_back({lo, hi});
      }
    int j = loc->j;
    double t0 = loc->t0;
    path.weight = [j, t0](double t) { return rho(t) * rho0(std::ldexp(t - t0, j)); };
  }
  return quad_bilinear(f, g, out, path, q);
}

SampledSignal apply_TGammaj(const DyadicParams& p, const SampledSignal& f, const SampledSignal& g, const Grid1D& out,
                            const TimeQuadOptions& q) {
  p.validate();
  // substitution s = 2^j t
  double sf = pow2(-p.j), sg = pow2(-double(p.d) * p.j);
  int d = p.d;
  Path path;
  path.intervals = rho_support();
  path.weight = [](double s) { return rho(s); };
  path.tau_f = [sf](double s) { return sf * s; };
  path.dtau_f = [sf](double) { return sf; };
  path.tau_g = [sg, d](double s) { return sg * std::pow(s, d); };
  path.dtau_g = [sg, d](double s) { return sg * d * std::pow(s, d - 1); };
  return quad_bilinear(f, g, out, path, q);
}

SampledSignal apply_TGamma_partial(int d, int J, const SampledSignal& f, const SampledSignal& g, const Grid1D& out,
                                   const TimeQuadOptions& q) {
  if (J < 0) throw std::invalid_argument("apply_TGamma_partial: J must be >= 0");
  SampledSignal acc{out, cvec(out.count, 0.0), Band::full(out)};
  for (int j = -J; j <= J; ++j) {
    DyadicParams p;
    p.d = d;
    p.j = j;
    auto part = apply_TGammaj(p, f, g, out, q);
    for (std::size_t n = 0; n < out.count; ++n) acc.samples[n] += part.samples[n];
  }
  return acc;
}

Grid1D tjm_grid(const DyadicParams& p, double bins) {
  p.validate();
  if (!(bins > 0.0)) throw std::invalid_argument("tjm_grid: bins must be positive");
  int lo = p.m + std::min(p.j, p.d * p.j);
  double P = bins / (1.5 * pow2(lo));
  double fmax = 2.0 * (pow2(p.j + p.m) + pow2(double(p.d) * p.j + p.m));
  auto count = next_pow2(static_cast<std::size_t>(std::ceil(2.0 * 1.1 * fmax * P)));
  return make_grid(0.0, P, std::max<std::size_t>(count, 16));
}

SampledSignal apply_Tjm_freq(const DyadicParams& p, const SampledSignal& f, const SampledSignal& g, const Grid1D& out) {
  return apply_Tjmm_freq(p, p.m, f, g, out);
}

SampledSignal apply_Tjmm_freq(const DyadicParams& p, int m_prime, const SampledSignal& f, const SampledSignal& g,
                              const Grid1D& out) {
  p.validate();
  double P = out.period();
  if (!same_period(f.grid.period(), P) || !same_period(g.grid.period(), P))
    throw std::invalid_argument("apply_Tjm_freq: f, g and the output must share one period");
  double sx = pow2(p.j + p.m), sy = pow2(double(p.d) * p.j + m_prime);
  if (2.0 * sx > f.grid.nyquist() || 2.0 * sy > g.grid.nyquist())
    throw std::invalid_argument("apply_Tjm_freq: frequency window not resolved by the input grid");
  SparseSpectrum sf = sparse_spectrum(f, [sx](double xi) { return phi_hat(xi / sx); });
  SparseSpectrum sg = sparse_spectrum(g, [sy](double eta) { return phi_hat(eta / sy); });
  // m_j(xi, eta) = m_d(2^{-j} xi, 2^{-dj} eta)
  return windowed_bilinear_sum(p.d, sf, sg, pow2(-p.j) / P, pow2(-double(p.d) * p.j) / P, 1.0, out);
}

SampledSignal apply_Tjm_time(const DyadicParams& p, const SampledSignal& f, const SampledSignal& g, const Grid1D& out,
                             const TimeQuadOptions& q) {
  p.validate();
  auto fw = restrict(f, BumpSpec{BumpKind::phi_hat, pow2(p.j + p.m), 0.0, 0});
  auto gw = restrict(g, BumpSpec{BumpKind::phi_hat, pow2(double(p.d) * p.j + p.m), 0.0, 0});
  return apply_TGammaj(p, fw, gw, out, q);
}

BjmGrids bjm_grids(const DyadicParams& p, double base, bool wide_window) {
  p.validate();
  if (!(base > 0.0)) throw std::invalid_argument("bjm_grids: base period must be positive");
  double wmax = wide_window ? 19.0 / 8.0 : 2.0;
  double ratio = pow2(double(p.d - 1) * std::abs(p.j));
  double Ps = base, Pl = base * ratio;
  auto count_for = [](double fmax, double P) {
    auto c = next_pow2(static_cast<std::size_t>(std::ceil(2.0 * fmax * P)));
    return std::max<std::size_t>(c, 16);
  };
  Grid1D small = make_grid(0.0, Ps, count_for(wmax, Ps));
  Grid1D large = make_grid(0.0, Pl, count_for(wmax, Pl));
  Grid1D out = make_grid(0.0, Pl, count_for(wmax * (1.0 + 1.0 / ratio), Pl));
  if (p.j >= 0) return {small, large, out};
  return {large, small, out};
}

namespace {

SampledSignal restriction_operator(const DyadicParams& p, const SampledSignal& f, const SampledSignal& g,
                                   const Grid1D& out, bool wide) {
  p.validate();
  double ratio = pow2(double(p.d - 1) * std::abs(p.j));
  double Pf = f.grid.period(), Pg = g.grid.period();
  bool ok = p.j >= 0 ? same_period(Pg, ratio * Pf) && same_period(out.period(), Pg)
                     : same_period(Pf, ratio * Pg) && same_period(out.period(), Pf);
  if (!ok) throw std::invalid_argument("restriction operator: grid periods do not match the scale pair");
  double wmax = wide ? 19.0 / 8.0 : 2.0;
  // the windows vanish at |xi| = wmax, so a Nyquist frequency equal to wmax still resolves them
  if (wmax > f.grid.nyquist() || wmax > g.grid.nyquist())
    throw std::invalid_argument("restriction operator: window not resolved by the input grid");
  auto window = [wide](double xi) { return wide ? phi1_hat(xi) : phi_hat(xi); };
  SparseSpectrum sf = sparse_spectrum(f, window);
  SparseSpectrum sg = sparse_spectrum(g, window);
  double scale = pow2(p.m);
  return windowed_bilinear_sum(p.d, sf, sg, scale / Pf, scale / Pg, 1.0 / std::sqrt(ratio), out);
}

}  // namespace

struct BjmSampler::Impl {
  std::vector<long> f_idx, g_idx;
  std::vector<double> f_win, g_win;
  bool wide = false;
};

namespace {

void band_bins(double P, double lo, double hi, bool wide, std::vector<long>& idx, std::vector<double>& win) {
  auto kmax = static_cast<long>(std::floor(hi * P));
  for (long k = -kmax; k <= kmax; ++k) {
    double xi = static_cast<double>(k) / P;
    // the top edge can coincide with the Nyquist bin, which has no sign of its own
    if (std::abs(xi) < lo || std::abs(xi) >= hi) continue;
    idx.push_back(k);
    win.push_back(wide ? phi1_hat(xi) : phi_hat(xi));
  }
}

cvec draw(std::uint64_t seed, std::int64_t trial, std::int64_t slot, std::size_t n) {
  Rng rng = Rng::keyed(seed, {trial, slot});
  cvec c(n);
  for (auto& v : c) v = rng.complex_normal();
  return c;
}

SparseSpectrum windowed(double P, const std::vector<long>& idx, const std::vector<double>& win, const cvec& c) {
  SparseSpectrum s;
  s.period = P;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (win[i] == 0.0) continue;
    s.idx.push_back(idx[i]);
    s.coef.push_back(c[i] * win[i]);
    s.max_freq = std::max(s.max_freq, std::abs(static_cast<double>(idx[i])) / P);
  }
  return s;
}

SampledSignal from_bins(const Grid1D& g, const std::vector<long>& idx, const cvec& c, Band band) {
  cvec a(g.count, 0.0);
  for (std::size_t i = 0; i < idx.size(); ++i) a[wrap_index(idx[i], g.count)] = c[i];
  return synthesize(g, a, band);
}

double energy(const cvec& c, double P) {
  double e = 0.0;
  for (auto& v : c) e += std::norm(v);
  return e * P;
}

}  // namespace

BjmSampler::BjmSampler(const DyadicParams& p, double base, bool wide_window) : p_(p) {
  grids_ = bjm_grids(p, base, wide_window);
  auto impl = std::make_shared<Impl>();
  impl->wide = wide_window;
  double lo = wide_window ? 1.0 / 8.0 : 0.5, hi = wide_window ? 19.0 / 8.0 : 2.0;
  band_bins(grids_.f.period(), lo, hi, wide_window, impl->f_idx, impl->f_win);
  band_bins(grids_.g.period(), lo, hi, wide_window, impl->g_idx, impl->g_win);
  impl_ = impl;
}

std::pair<SampledSignal, SampledSignal> BjmSampler::inputs(std::uint64_t seed, std::int64_t trial) const {
  double lo = impl_->wide ? 1.0 / 8.0 : 0.5, hi = impl_->wide ? 19.0 / 8.0 : 2.0;
  Band band{lo, hi, true};
  auto cf = draw(seed, trial, 0, impl_->f_idx.size());
  auto cg = draw(seed, trial, 1, impl_->g_idx.size());
  return {from_bins(grids_.f, impl_->f_idx, cf, band), from_bins(grids_.g, impl_->g_idx, cg, band)};
}

double BjmSampler::ratio(std::uint64_t seed, std::int64_t trial) const {
  auto cf = draw(seed, trial, 0, impl_->f_idx.size());
  auto cg = draw(seed, trial, 1, impl_->g_idx.size());
  double Pf = grids_.f.period(), Pg = grids_.g.period();
  double nf = std::sqrt(energy(cf, Pf)), ng = std::sqrt(energy(cg, Pg));
  if (nf == 0.0 || ng == 0.0) return 0.0;
  SparseSpectrum sf = windowed(Pf, impl_->f_idx, impl_->f_win, cf);
  SparseSpectrum sg = windowed(Pg, impl_->g_idx, impl_->g_win, cg);
  double ratio = pow2(double(p_.d - 1) * std::abs(p_.j));
  double scale = pow2(p_.m);
  auto out = windowed_bilinear_sum(p_.d, sf, sg, scale / Pf, scale / Pg, 1.0 / std::sqrt(ratio), grids_.out);
  if (impl_->wide) {
    int k = (p_.d - 1) * std::abs(p_.j) + p_.m;
    for (std::size_t i = 0; i < out.grid.count; ++i)
      out.samples[i] *= smooth_indicator(IndicatorKind::star, k, p_.n, out.grid.point(i));
  }
  return lp_norm(out, 1) / (nf * ng);
}

SampledSignal apply_Bjm(const DyadicParams& p, const SampledSignal& f, const SampledSignal& g, const Grid1D& out) {
  return restriction_operator(p, f, g, out, false);
}

SampledSignal apply_Bjmn(const DyadicParams& p, const SampledSignal& f, const SampledSignal& g, const Grid1D& out) {
  auto r = restriction_operator(p, f, g, out, true);
  int k = (p.d - 1) * std::abs(p.j) + p.m;
  for (std::size_t i = 0; i < out.count; ++i)
    r.samples[i] *= smooth_indicator(IndicatorKind::star, k, p.n, out.point(i));
  return r;
}

}  // namespace bht
