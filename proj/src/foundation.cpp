#include "bht/foundation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <utility>

namespace bht {

namespace {

std::mutex plan_mutex;
std::map<std::pair<std::size_t, int>, fftw_plan> plan_cache;

fftw_plan get_plan(std::size_t n, int sign) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;
  // in-place plan; FFTW_UNALIGNED lets us execute on arbitrary std::complex buffers
  fftw_complex* buf = fftw_alloc_complex(n);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  plan_cache.emplace(key, p);
  return p;
}

}  // namespace

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double Grid1D::frequency(std::size_t k) const {
  auto n = static_cast<std::int64_t>(count);
  auto kk = static_cast<std::int64_t>(k);
  if (kk >= n / 2) kk -= n;
  return static_cast<double>(kk) / period();
}

Grid1D make_grid(double origin, double period, std::size_t count) {
  if (!(period > 0.0)) throw std::invalid_argument("make_grid: period must be positive");
  if (count < 16 || !is_pow2(count)) throw std::invalid_argument("make_grid: count must be a power of two >= 16");
  return Grid1D{origin, period / static_cast<double>(count), count};
}

void fft_raw(cplx* data, std::size_t n, int sign) {
  if (n == 0) return;
  fftw_plan p = get_plan(n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, d, d);
}

void dft_inplace(cvec& data, Direction dir) {
  std::size_t n = data.size();
  fft_raw(data.data(), n, dir == Direction::forward ? -1 : +1);
  double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : data) v *= s;
}

cvec dft(const cvec& in, Direction dir) {
  cvec out = in;
  dft_inplace(out, dir);
  return out;
}

SampledSignal fourier_transform(const SampledSignal& s, Direction dir) {
  return SampledSignal{s.grid, dft(s.samples, dir), s.band};
}

cvec series_coeffs(const SampledSignal& s) {
  const Grid1D& g = s.grid;
  cvec a = s.samples;
  fft_raw(a.data(), a.size(), -1);
  double inv = 1.0 / static_cast<double>(g.count);
  for (std::size_t k = 0; k < g.count; ++k) {
    double xi = g.frequency(k);
    a[k] *= inv * std::polar(1.0, -kTwoPi * xi * g.origin);
  }
  return a;
}

SampledSignal synthesize(const Grid1D& g, const cvec& coeffs, Band band) {
  cvec v(g.count);
  for (std::size_t k = 0; k < g.count; ++k) v[k] = coeffs[k] * std::polar(1.0, kTwoPi * g.frequency(k) * g.origin);
  fft_raw(v.data(), v.size(), +1);
  return SampledSignal{g, std::move(v), band};
}

SampledSignal sample_function(const Grid1D& g, const std::function<cplx(double)>& f, Band band) {
  cvec v(g.count);
  for (std::size_t k = 0; k < g.count; ++k) v[k] = f(g.point(k));
  return SampledSignal{g, std::move(v), band};
}

double lp_norm(const SampledSignal& s, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : s.samples) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 0.5)) throw std::invalid_argument("lp_norm: p must lie in [1/2, inf]");
  double acc = 0.0;
  if (p == 2.0) {
    for (const auto& v : s.samples) acc += std::norm(v);
    return std::sqrt(acc * s.grid.step);
  }
  if (p == 1.0) {
    for (const auto& v : s.samples) acc += std::abs(v);
    return acc * s.grid.step;
  }
  for (const auto& v : s.samples) acc += std::pow(std::abs(v), p);
  return std::pow(acc * s.grid.step, 1.0 / p);
}

double l2_norm(const SampledSignal& s) { return lp_norm(s, 2.0); }

cplx inner(const SampledSignal& a, const SampledSignal& b) {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < a.samples.size(); ++k) acc += a.samples[k] * std::conj(b.samples[k]);
  return acc * a.grid.step;
}

// SplitMix64
std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng Rng::keyed(std::uint64_t seed, std::initializer_list<std::int64_t> keys) {
  Rng r(seed ^ 0x5851f42d4c957f2dULL);
  std::uint64_t h = r.next_u64();
  for (auto k : keys) {
    Rng t(h ^ (static_cast<std::uint64_t>(k) * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    h = t.next_u64();
  }
  return Rng(h);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 <= 0.0) u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

cplx Rng::complex_normal() {
  double re = normal();
  double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

SampledSignal random_bandlimited(const Grid1D& g, const Band& band, double target_norm, std::uint64_t seed) {
  double nyq = g.nyquist();
  if (band.hi > nyq || (!band.symmetric && band.lo < -nyq)) throw std::invalid_argument("random_bandlimited: band exceeds Nyquist range");
  Rng rng(seed);
  cvec a(g.count, 0.0);
  for (std::size_t k = 0; k < g.count; ++k) {
    cplx z = rng.complex_normal();  // drawn for every bin so the stream does not depend on the band
    double xi = g.frequency(k);
    if (k == g.count / 2) continue;  // Nyquist bin stays empty
    if (band.contains(xi)) a[k] = z;
  }
  SampledSignal s = synthesize(g, a, band);
  double nrm = l2_norm(s);
  double scale = nrm > 0.0 ? target_norm / nrm : 0.0;
  for (auto& v : s.samples) v *= scale;
  return s;
}

SparseSpectrum sparse_spectrum(const SampledSignal& s, const std::function<double(double)>& window) {
  SparseSpectrum out;
  out.period = s.grid.period();
  cvec a = series_coeffs(s);
  std::size_t n = s.grid.count;
  // transform round-off, judged against the unwindowed spectrum, is not band content
  double cmax = 0.0;
  for (auto& c : a) cmax = std::max(cmax, std::abs(c));
  for (std::size_t k = 0; k < n; ++k) {
    long kk = k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
    if (!(std::abs(a[k]) > 1e-15 * cmax)) continue;
    cplx c = a[k];
    if (window) c *= window(static_cast<double>(kk) / out.period);
    if (c == cplx(0.0)) continue;
    out.idx.push_back(kk);
    out.coef.push_back(c);
  }
  // sort by index so phase recurrences step through consecutive bins
  std::vector<std::size_t> order(out.idx.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return out.idx[x] < out.idx[y]; });
  SparseSpectrum sorted;
  sorted.period = out.period;
  for (auto i : order) {
    sorted.idx.push_back(out.idx[i]);
    sorted.coef.push_back(out.coef[i]);
  }
  for (std::size_t i = 0; i < sorted.idx.size(); ++i)
    sorted.max_freq = std::max(sorted.max_freq, std::abs(static_cast<double>(sorted.idx[i])) / sorted.period);
  return sorted;
}

SampledSignal synthesize_sparse(const SparseSpectrum& sp, const Grid1D& g) {
  double q = g.period() / sp.period;
  long mult = std::lround(q);
  if (mult < 1 || std::abs(q - static_cast<double>(mult)) > 1e-9 * q)
    throw std::invalid_argument("synthesize_sparse: grid period must be a multiple of the spectrum period");
  cvec a(g.count, 0.0);
  for (std::size_t i = 0; i < sp.idx.size(); ++i) {
    long k = sp.idx[i] * mult;
    if (2 * std::abs(k) >= static_cast<long>(g.count)) throw std::invalid_argument("synthesize_sparse: grid too coarse");
    long r = k % static_cast<long>(g.count);
    if (r < 0) r += static_cast<long>(g.count);
    a[static_cast<std::size_t>(r)] += sp.coef[i];
  }
  return synthesize(g, a, Band{-sp.max_freq, sp.max_freq, false});
}

cvec interpolate(const SampledSignal& s, const std::vector<double>& points) {
  cvec a = series_coeffs(s);
  const Grid1D& g = s.grid;
  std::vector<std::size_t> live;
  for (std::size_t k = 0; k < g.count; ++k)
    if (a[k] != cplx(0.0)) live.push_back(k);
  cvec out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double x = points[i];
    // on-grid points return the stored sample exactly
    double u = (x - g.origin) / g.step;
    double r = std::round(u);
    if (std::abs(u - r) < 1e-13 * std::max(1.0, std::abs(u))) {
      auto idx = static_cast<std::int64_t>(r) % static_cast<std::int64_t>(g.count);
      if (idx < 0) idx += static_cast<std::int64_t>(g.count);
      out[i] = s.samples[static_cast<std::size_t>(idx)];
      continue;
    }
    cplx acc = 0.0;
    for (auto k : live) {
      // reduce the phase by the integer bin index to keep arguments small
      double ph = g.frequency(k) * (x - g.origin);
      ph -= std::floor(ph);
      acc += a[k] * std::polar(1.0, kTwoPi * (ph + g.frequency(k) * g.origin));
    }
    out[i] = acc;
  }
  return out;
}

cvec shift_samples(const cvec& samples, const Grid1D& g, double tau) {
  cvec a = samples;
  fft_raw(a.data(), a.size(), -1);
  double inv = 1.0 / static_cast<double>(g.count);
  for (std::size_t k = 0; k < g.count; ++k) a[k] *= inv * std::polar(1.0, -kTwoPi * g.frequency(k) * tau);
  fft_raw(a.data(), a.size(), +1);
  return a;
}

void write_signal_csv(std::ostream& os, const SampledSignal& s) {
  os << "index,x,re,im\r\n";
  os << std::setprecision(17);
  for (std::size_t k = 0; k < s.grid.count; ++k)
    os << k << ',' << s.grid.point(k) << ',' << s.samples[k].real() << ',' << s.samples[k].imag() << "\r\n";
}

unsigned thread_count() {
  if (const char* env = std::getenv("BHT_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : h;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned nt = std::min<std::size_t>(thread_count(), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  for (unsigned w = 0; w < nt; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace bht
