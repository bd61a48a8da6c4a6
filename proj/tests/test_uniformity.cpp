#include "doctest.h"

#include <cmath>

#include "bht/uniformity.hpp"

using namespace bht;

namespace {

const double kLo = 1.0 / 16.0, kHi = 39.0 / 16.0;

// smooth random function on I: a few random Fourier modes of the interval plus a random chirp
SampledSignal random_on_I(const Grid1D& I, std::uint64_t seed, double chirp = 0.0) {
  Rng rng = Rng::keyed(seed, {17});
  cvec c(9);
  for (auto& z : c) z = rng.complex_normal();
  double a = chirp * (1.0 + rng.uniform());
  double len = I.period();
  return sample_function(
      I,
      [&](double x) {
        cplx s = 0.0;
        for (int k = -4; k <= 4; ++k) s += c[std::size_t(k + 4)] * std::polar(1.0, kTwoPi * k * (x - I.origin) / len);
        return s * std::polar(1.0, a * x * x);
      },
      Band::full(I));
}

}  // namespace

TEST_CASE("phase family points") {
  PhaseFamilyPoint q{PhaseFamily::Q1, 8.0, -3.0, 3, 2};
  CHECK(q.eval(2.0) == doctest::Approx(8.0 * 4.0 - 6.0));
  CHECK(q.valid());
  PhaseFamilyPoint r{PhaseFamily::Q2, -8.0, 1.0, 3, 3};
  CHECK(r.eval(4.0) == doctest::Approx(-8.0 / 2.0 + 4.0));
  q.a = std::exp2(-98);
  CHECK_FALSE(q.valid());
  CHECK(FamilyGrid::standard(PhaseFamily::Q1, 2, 4, 8, 16).points.size() == 2 * 8 * 16);
  CHECK_THROWS(uniformity_deficit(random_on_I(interval_grid(kLo, kHi, 64), 1), FamilyGrid{}));
  CHECK_THROWS(phase_exponential(interval_grid(-1.0, 1.0, 64), q));
  CHECK_THROWS(interval_grid(1.0, 1.0, 64));
}

TEST_CASE("self-pairing gives deficit 1") {
  Grid1D I = interval_grid(kLo, kHi, 512);
  auto grid = FamilyGrid::standard(PhaseFamily::Q1, 2, 3, 8, 16);
  for (std::size_t i : {0UL, 37UL, 255UL}) {
    auto e = phase_exponential(I, grid.points[i]);
    CHECK(norm_I(e) * norm_I(e) == doctest::Approx(I.period()).epsilon(1e-13));
    auto r = uniformity_deficit(e, grid);
    CHECK(r.deficit == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.max_pairing == doctest::Approx(I.period()).epsilon(1e-12));
  }
}

TEST_CASE("function orthogonal to the family has zero deficit") {
  Grid1D I = interval_grid(kLo, kHi, 256);
  auto grid = FamilyGrid::standard(PhaseFamily::Q2, 3, 2, 3, 5);
  auto f = project_out_family(random_on_I(I, 4, 2.0), grid);
  CHECK(norm_I(f) > 0.1);
  CHECK(uniformity_deficit(f, grid).deficit < 1e-10);
}

TEST_CASE("deficit is stable under grid refinement") {
  Grid1D I = interval_grid(kLo, kHi, 1024);
  std::vector<double> as, bs, as4, bs4;
  int m = 3;
  double A = std::exp2(m + 2), B = std::exp2(m + 2);
  for (int i = 0; i < 64; ++i) {
    as.push_back(-A + 2 * A * i / 63.0);
    bs.push_back(-B + 2 * B * i / 63.0);
  }
  for (int i = 0; i < 253; ++i) {
    as4.push_back(-A + 2 * A * i / 252.0);
    bs4.push_back(-B + 2 * B * i / 252.0);
  }
  auto coarse = FamilyGrid::product(PhaseFamily::Q1, 2, m, as, bs);
  auto fine = FamilyGrid::product(PhaseFamily::Q1, 2, m, as4, bs4);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto f = random_on_I(I, seed, 10.0);
    double dc = uniformity_deficit(f, coarse).deficit, df = uniformity_deficit(f, fine).deficit;
    CHECK(df >= dc);  // the fine grid contains the coarse one
    CHECK(df - dc < 0.1);
  }
}

TEST_CASE("deficit is scale invariant and monotone in the family") {
  Grid1D I = interval_grid(kLo, kHi, 256);
  auto small = FamilyGrid::standard(PhaseFamily::Q1, 2, 2, 4, 8);
  auto big = small;
  for (auto& q : FamilyGrid::standard(PhaseFamily::Q1, 2, 2, 7, 11).points) big.inject(q);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    auto f = random_on_I(I, s, 4.0);
    auto g = f;
    cplx c(-2.5, 0.75);
    for (auto& v : g.samples) v *= c;
    double d = uniformity_deficit(f, small).deficit;
    CHECK(uniformity_deficit(g, small).deficit == doctest::Approx(d).epsilon(1e-12));
    CHECK(uniformity_deficit(f, big).deficit >= d);
  }
}

TEST_CASE("decomposition and Pythagorean identity") {
  Grid1D I = interval_grid(kLo, kHi, 512);
  auto grid = FamilyGrid::standard(PhaseFamily::Q1, 2, 3, 6, 12);
  for (std::uint64_t s = 1; s <= 50; ++s) {
    auto f = random_on_I(I, s, 6.0);
    auto rep = uniformity_deficit(f, grid);
    auto D = decompose(f, rep.argmax);
    CHECK(D.reconstruction_error < 1e-10);
    CHECK(D.pythagoras_error < 1e-10);
    CHECK(std::abs(inner_I(D.g, phase_exponential(I, rep.argmax))) < 1e-10);
    CHECK(norm_I(D.g) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // f a pure family exponential: the orthogonal part is empty, g is still a unit vector orthogonal to e^{iq}
  auto q = grid.points[5];
  auto D = decompose(phase_exponential(I, q), q);
  CHECK(D.reconstruction_error < 1e-12);
  CHECK(std::abs(inner_I(D.g, phase_exponential(I, q))) < 1e-10);
}

TEST_CASE("proof-level inequality on 1000 seeded trials") {
  Grid1D I = interval_grid(kLo, kHi, 256);
  auto grid = FamilyGrid::standard(PhaseFamily::Q1, 2, 2, 4, 8);
  for (std::uint64_t s = 0; s < 1000; ++s) {
    auto f = random_on_I(I, 2 * s, 3.0);
    auto h = random_on_I(I, 2 * s + 1, 3.0);
    auto q = uniformity_deficit(f, grid).argmax;
    double lhs = std::abs(inner_I(f, h));
    double rhs = proof_level_bound(f, h, q);
    CHECK(lhs <= rhs * (1.0 + 1e-9) + 1e-9);
  }
}

TEST_CASE("certificate for a family exponential") {
  Grid1D I = interval_grid(kLo, kHi, 256);
  auto grid = FamilyGrid::standard(PhaseFamily::Q1, 2, 2, 4, 8);
  auto q0 = grid.points[11];
  auto h = phase_exponential(I, q0);
  std::vector<SampledSignal> corpus;
  for (std::uint64_t s = 0; s < 40; ++s) corpus.push_back(random_on_I(I, 1000 + s, 3.0));
  for (double sigma : {0.25, 0.5, 1.0}) {
    auto c = certificate_bound(h, sigma, grid, corpus);
    CHECK(c.q_grid == doctest::Approx(I.period()).epsilon(1e-12));
    CHECK(c.bound == doctest::Approx(std::max(c.u_est, 2.0 * I.period() / sigma)));
    // consistency: L(e^{iq*}) / ||e^{iq*}|| = |I|^{1/2}
    CHECK(c.bound >= std::sqrt(I.period()));
    for (std::uint64_t s = 0; s < 1000; ++s) {
      auto f = random_on_I(I, 5000 + s, 3.0);
      CHECK(std::abs(inner_I(f, h)) <= c.bound * norm_I(f));
    }
  }
  CHECK_THROWS(certificate_bound(h, 0.0, grid, corpus));
}
