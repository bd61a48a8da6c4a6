#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace bht {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Grid1D {
  double origin = 0.0;
  double step = 1.0;
  std::size_t count = 16;

  double period() const { return step * static_cast<double>(count); }
  double point(std::size_t k) const { return origin + step * static_cast<double>(k); }
  // frequency (cycles per unit) of DFT bin k; bins >= count/2 are negative
  double frequency(std::size_t k) const;
  double nyquist() const { return 0.5 / step; }
};

bool is_pow2(std::size_t n);
std::size_t next_pow2(std::size_t n);

Grid1D make_grid(double origin, double period, std::size_t count);

// closed frequency interval; symmetric bands describe lo <= |xi| <= hi
struct Band {
  double lo = 0.0;
  double hi = 0.0;
  bool symmetric = false;

  bool contains(double xi) const {
    double v = symmetric ? std::abs(xi) : xi;
    return v >= lo && v <= hi;
  }
  static Band full(const Grid1D& g) { return {-g.nyquist(), g.nyquist(), false}; }
};

struct SampledSignal {
  Grid1D grid;
  cvec samples;
  Band band;
};

enum class Direction { forward, inverse };

// Unitary DFT, c_k = N^{-1/2} sum_j f_j exp(-2 pi i k j / N). FFTW-backed.
cvec dft(const cvec& in, Direction dir);
void dft_inplace(cvec& data, Direction dir);
// Unnormalized forward/inverse transforms (plain sums) for callers doing their own scaling.
void fft_raw(cplx* data, std::size_t n, int sign);

SampledSignal fourier_transform(const SampledSignal& s, Direction dir);

// Fourier series coefficients a_k with f(x) = sum_k a_k exp(2 pi i xi_k x), xi_k = grid.frequency(k).
cvec series_coeffs(const SampledSignal& s);
SampledSignal synthesize(const Grid1D& g, const cvec& coeffs, Band band);

SampledSignal sample_function(const Grid1D& g, const std::function<cplx(double)>& f, Band band);

double lp_norm(const SampledSignal& s, double p);
double l2_norm(const SampledSignal& s);
cplx inner(const SampledSignal& a, const SampledSignal& b);  // integral of a * conj(b)

// Deterministic counter-based stream; independent of the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  static Rng keyed(std::uint64_t seed, std::initializer_list<std::int64_t> keys);
  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();
  cplx complex_normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

SampledSignal random_bandlimited(const Grid1D& g, const Band& band, double target_norm, std::uint64_t seed);

// Nonzero Fourier series terms, sorted by index; term i has frequency idx[i] / period.
struct SparseSpectrum {
  double period = 1.0;
  std::vector<long> idx;
  cvec coef;
  double max_freq = 0.0;
};
// series terms of s times window(xi); round-off below 1e-15 of the largest raw coefficient is dropped
SparseSpectrum sparse_spectrum(const SampledSignal& s, const std::function<double(double)>& window = nullptr);
// samples on g, whose period must be an integer multiple of the spectrum's and resolve every term
SampledSignal synthesize_sparse(const SparseSpectrum& sp, const Grid1D& g);

cvec interpolate(const SampledSignal& s, const std::vector<double>& points);

// band-limited shift: returns samples of x -> f(x - tau) on the same grid
cvec shift_samples(const cvec& samples, const Grid1D& g, double tau);

void write_signal_csv(std::ostream& os, const SampledSignal& s);

// Worker count: BHT_THREADS if set, else hardware concurrency.
unsigned thread_count();
// Runs fn(i) for i in [0, n); each index must write only its own output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace bht
