#include "doctest.h"

#include <cmath>

#include "bht/bumps.hpp"
#include "bht/operators.hpp"
#include "bht/oscsym.hpp"
#include "bht/quadrature.hpp"

using namespace bht;

namespace {

double rel_l2(const SampledSignal& a, const SampledSignal& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    num += std::norm(a.samples[i] - b.samples[i]);
    den += std::norm(b.samples[i]);
  }
  return std::sqrt(num / den);
}

double max_abs(const SampledSignal& s) { return lp_norm(s, INFINITY); }

// sum_k a_k mult(xi_k) e^{2 pi i xi_k x} on the signal's own grid
SampledSignal fourier_multiply(const SampledSignal& s, const std::function<cplx(double)>& mult) {
  cvec a = series_coeffs(s);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] *= mult(s.grid.frequency(k));
  return synthesize(s.grid, a, s.band);
}

cplx rho_hat(double xi) {
  OscQuadSpec q;
  q.tol = 1e-13;
  return rho_transform(xi, q).value;
}

SampledSignal tone(const Grid1D& g, double xi) {
  return sample_function(g, [xi](double x) { return std::polar(1.0, kTwoPi * xi * x); }, Band::full(g));
}

}  // namespace

TEST_CASE("polynomial spec") {
  PolynomialSpec p{{1.0, -2.0, 0.0, 3.0}};  // 1 - 2t + 3t^3
  CHECK(p.degree() == 3);
  CHECK(p.eval(2.0) == doctest::Approx(21.0));
  CHECK(p.deriv(2.0, 1) == doctest::Approx(34.0));
  CHECK(p.deriv(2.0, 2) == doctest::Approx(36.0));
  CHECK(p.deriv(2.0, 3) == doctest::Approx(18.0));
  auto flags = PolynomialSpec::monomial(2).nonvanishing_flags();
  REQUIRE(flags.size() == 3);
  CHECK_FALSE(flags[0]);
  CHECK_FALSE(flags[1]);
  CHECK(flags[2]);
  CHECK(p.derivative_nonvanishing(3));
  CHECK_THROWS(PolynomialSpec{{2.0}}.validate());
  CHECK_THROWS(PolynomialSpec{{1.0, 0.0}}.validate());
}

TEST_CASE("dyadic params") {
  DyadicParams p;
  p.d = 2;
  p.j = 3;
  p.m = 6;
  CHECK(p.small_j());
  p.j = -7;
  CHECK_FALSE(p.small_j());
  p.d = 1;
  CHECK_THROWS(p.validate());
}

TEST_CASE("T with g = 1 is a convolution with rho") {
  Grid1D g = make_grid(-8.0, 16.0, 128);
  auto f = random_bandlimited(g, Band{0.0, 3.0, true}, 1.0, 5);
  auto one = sample_function(g, [](double) { return cplx(1.0); }, Band{0.0, 0.0, true});
  auto t = apply_TP(PolynomialSpec::monomial(2), f, one, g);
  auto oracle = fourier_multiply(f, rho_hat);
  CHECK(rel_l2(t, oracle) < 1e-8);
}

TEST_CASE("T with P(t) = t convolves the product") {
  Grid1D g = make_grid(0.0, 8.0, 128);
  auto f = random_bandlimited(g, Band{0.0, 1.5, true}, 1.0, 6);
  auto h = random_bandlimited(g, Band{0.0, 1.5, true}, 1.0, 7);
  SampledSignal fh = f;
  for (std::size_t i = 0; i < g.count; ++i) fh.samples[i] = f.samples[i] * h.samples[i];
  auto t = apply_TP(PolynomialSpec{{0.0, 1.0}}, f, h, g);
  CHECK(rel_l2(t, fourier_multiply(fh, rho_hat)) < 1e-8);
}

TEST_CASE("zero inputs give zero") {
  Grid1D g = make_grid(0.0, 8.0, 64);
  auto z = sample_function(g, [](double) { return cplx(0.0); }, Band::full(g));
  auto f = random_bandlimited(g, Band{0.0, 2.0, true}, 1.0, 1);
  CHECK(max_abs(apply_TP(PolynomialSpec::monomial(2), z, z, g)) == 0.0);
  CHECK(max_abs(apply_TP(PolynomialSpec::monomial(2), f, z, g)) == 0.0);
  DyadicParams p;
  p.j = 0;
  p.m = 0;
  Grid1D tg = tjm_grid(p);
  auto zt = sample_function(tg, [](double) { return cplx(0.0); }, Band::full(tg));
  CHECK(max_abs(apply_Tjm_time(p, zt, zt, tg)) == 0.0);
  CHECK(max_abs(apply_Tjm_freq(p, zt, zt, tg)) == 0.0);
}

TEST_CASE("localized weight agrees with direct quadrature") {
  Grid1D g = make_grid(0.0, 8.0, 64);
  auto f = random_bandlimited(g, Band{0.0, 2.0, true}, 1.0, 8);
  auto h = random_bandlimited(g, Band{0.0, 2.0, true}, 1.0, 9);
  PolynomialSpec P{{0.0, 0.5, 0.0, 1.0}};
  Localization loc{3, 1.1};
  auto t = apply_TP(P, f, h, g, loc);
  for (std::size_t i : {0u, 7u, 31u, 50u}) {
    double x = g.point(i);
    auto integrand = [&](double s) {
      cplx a = interpolate(f, {x - s})[0], b = interpolate(h, {x - P.eval(s)})[0];
      return a * b * rho(s) * rho0(std::ldexp(s - loc.t0, loc.j));
    };
    cplx direct = integrate_gl(integrand, 0.5, 2.0, 256, 16);
    CHECK(std::abs(t.samples[i] - direct) < 1e-9);
  }
}

TEST_CASE("T_Gamma_j at j = 0 is T with P = t^d") {
  Grid1D g = make_grid(0.0, 8.0, 64);
  auto f = random_bandlimited(g, Band{0.0, 2.0, true}, 1.0, 10);
  auto h = random_bandlimited(g, Band{0.0, 2.0, true}, 1.0, 11);
  DyadicParams p;
  p.d = 3;
  auto a = apply_TGammaj(p, f, h, g);
  auto b = apply_TP(PolynomialSpec::monomial(3), f, h, g);
  CHECK(rel_l2(a, b) < 1e-12);
}

TEST_CASE("T_Gamma_j rescaling identity") {
  // T_{Gamma,j}(f,g)(x) = int F(2^j x - s) G(2^{dj} x - s^d) rho(s) ds, F = f(2^-j .), G = g(2^-dj .)
  Grid1D g = make_grid(0.0, 4.0, 64);
  auto f = random_bandlimited(g, Band{0.0, 3.0, true}, 1.0, 12);
  auto h = random_bandlimited(g, Band{0.0, 3.0, true}, 1.0, 13);
  for (int j : {-1, 1}) {
    DyadicParams p;
    p.d = 2;
    p.j = j;
    auto t = apply_TGammaj(p, f, h, g);
    double sf = std::ldexp(1.0, j), sg = std::ldexp(1.0, 2 * j);
    SampledSignal F = f, G = h;
    F.grid.origin *= sf;
    F.grid.step *= sf;
    G.grid.origin *= sg;
    G.grid.step *= sg;
    for (std::size_t i : {0u, 13u, 40u}) {
      double x = g.point(i);
      auto integrand = [&](double s) {
        return interpolate(F, {sf * x - s})[0] * interpolate(G, {sg * x - s * s})[0] * rho(s);
      };
      cplx direct = integrate_gl(integrand, -2.0, -0.5, 64, 16) + integrate_gl(integrand, 0.5, 2.0, 64, 16);
      CHECK(std::abs(t.samples[i] - direct) < 1e-8);
    }
  }
}

TEST_CASE("frequency pieces vanish off their windows") {
  DyadicParams p;
  p.d = 2;
  p.j = 0;
  Grid1D g = make_grid(0.0, 4.0, 512);
  auto f = random_bandlimited(g, Band{0.0, 3.0, true}, 1.0, 14);
  auto h = random_bandlimited(g, Band{0.0, 3.0, true}, 1.0, 15);
  // windows at 2^m [1/2, 2] with m >= 4 miss |xi| <= 3
  SampledSignal acc{g, cvec(g.count, 0.0), Band::full(g)};
  for (int m = 4; m <= 5; ++m) {
    p.m = m;
    auto part = apply_Tjm_freq(p, f, h, g);
    for (std::size_t i = 0; i < g.count; ++i) acc.samples[i] += part.samples[i];
  }
  CHECK(max_abs(acc) == 0.0);
}

TEST_CASE("single-bin frequency path") {
  DyadicParams p;
  p.d = 2;
  p.j = 1;
  p.m = 3;
  Grid1D g = tjm_grid(p);
  double P = g.period();
  double xi0 = std::round(1.3 * 16 * P) / P, eta0 = -std::round(0.9 * 32 * P) / P;
  auto out = apply_Tjm_freq(p, tone(g, xi0), tone(g, eta0), g);
  OscQuadSpec q;
  q.tol = 1e-13;
  cplx coeff = phi_hat(xi0 / 16) * phi_hat(eta0 / 32) * symbol_mj(2, 1, xi0, eta0, q).value;
  double err = 0.0;
  for (std::size_t i = 0; i < g.count; ++i)
    err = std::max(err, std::abs(out.samples[i] - coeff * std::polar(1.0, kTwoPi * (xi0 + eta0) * g.point(i))));
  CHECK(err < 1e-10);
  CHECK(std::abs(coeff) > 1e-3);
}

TEST_CASE("frequency path rejects unresolved windows") {
  DyadicParams p;
  p.j = 2;
  p.m = 4;
  Grid1D g = make_grid(0.0, 1.0, 16);
  auto f = tone(g, 1.0);
  CHECK_THROWS(apply_Tjm_freq(p, f, f, g));
}

TEST_CASE("time path at a window centre matches the unrestricted operator") {
  DyadicParams p;
  p.d = 2;
  p.j = 1;
  p.m = 2;
  Grid1D g = make_grid(0.0, 1.0, 128);
  double P = g.period();
  // phi_hat = 1 exactly at |xi| = 1, so tones at the window centres pass unchanged
  double xi0 = 8.0, eta0 = -16.0;
  REQUIRE(std::abs(xi0 * P - std::round(xi0 * P)) < 1e-9);
  REQUIRE(std::abs(eta0 * P - std::round(eta0 * P)) < 1e-9);
  auto f = tone(g, xi0), h = tone(g, eta0);
  auto a = apply_Tjm_time(p, f, h, g);
  auto b = apply_TGammaj(p, f, h, g);
  CHECK(rel_l2(a, b) < 1e-10);
}

TEST_CASE("two evaluation paths of T_jm agree") {
  for (auto [j, m] : std::vector<std::pair<int, int>>{{2, 4}, {-2, 4}, {1, 6}}) {
    DyadicParams p;
    p.d = 2;
    p.j = j;
    p.m = m;
    Grid1D g = tjm_grid(p);
    double sx = std::ldexp(1.0, j + m), sy = std::ldexp(1.0, 2 * j + m);
    for (std::uint64_t trial = 0; trial < 3; ++trial) {
      auto f = random_bandlimited(g, Band{sx / 2, 2 * sx, true}, 1.0, 100 + trial);
      auto h = random_bandlimited(g, Band{sy / 2, 2 * sy, true}, 1.0, 200 + trial);
      CHECK(rel_l2(apply_Tjm_time(p, f, h, g), apply_Tjm_freq(p, f, h, g)) < 1e-6);
    }
  }
  DyadicParams p3;
  p3.d = 3;
  p3.j = 1;
  p3.m = 4;
  Grid1D g = tjm_grid(p3);
  auto f = random_bandlimited(g, Band{16, 64, true}, 1.0, 300);
  auto h = random_bandlimited(g, Band{64, 256, true}, 1.0, 301);
  CHECK(rel_l2(apply_Tjm_time(p3, f, h, g), apply_Tjm_freq(p3, f, h, g)) < 1e-6);
}

TEST_CASE("bilinearity") {
  DyadicParams p;
  p.d = 2;
  p.j = 1;
  p.m = 3;
  Grid1D g = tjm_grid(p);
  auto f1 = random_bandlimited(g, Band{8, 32, true}, 1.0, 1);
  auto f2 = random_bandlimited(g, Band{8, 32, true}, 1.0, 2);
  auto h = random_bandlimited(g, Band{16, 64, true}, 1.0, 3);
  cplx al(0.3, -1.2), be(2.0, 0.5);
  SampledSignal comb = f1;
  for (std::size_t i = 0; i < g.count; ++i) comb.samples[i] = al * f1.samples[i] + be * f2.samples[i];
  auto check = [&](auto op) {
    auto lhs = op(comb, h);
    auto r1 = op(f1, h), r2 = op(f2, h);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < lhs.samples.size(); ++i) {
      err = std::max(err, std::abs(lhs.samples[i] - al * r1.samples[i] - be * r2.samples[i]));
      scale = std::max(scale, std::abs(lhs.samples[i]));
    }
    CHECK(err <= 1e-10 * std::max(1.0, scale));
  };
  check([&](const SampledSignal& a, const SampledSignal& b) { return apply_Tjm_freq(p, a, b, g); });
  check([&](const SampledSignal& a, const SampledSignal& b) { return apply_Tjm_time(p, a, b, g); });
  check([&](const SampledSignal& a, const SampledSignal& b) { return apply_TP(PolynomialSpec::monomial(2), a, b, g); });

  BjmSampler s(p, 4.0);
  auto [u1, v] = s.inputs(1, 0);
  auto [u2, w] = s.inputs(1, 1);
  SampledSignal uc = u1;
  for (std::size_t i = 0; i < uc.samples.size(); ++i) uc.samples[i] = al * u1.samples[i] + be * u2.samples[i];
  auto lhs = apply_Bjm(p, uc, v, s.grids().out);
  auto r1 = apply_Bjm(p, u1, v, s.grids().out), r2 = apply_Bjm(p, u2, v, s.grids().out);
  double err = 0.0;
  for (std::size_t i = 0; i < lhs.samples.size(); ++i)
    err = std::max(err, std::abs(lhs.samples[i] - al * r1.samples[i] - be * r2.samples[i]));
  CHECK(err < 1e-10);
}

TEST_CASE("B_jm trivial bound and zero inputs") {
  for (int j : {-2, 0, 1, 2}) {
    for (int m : {2, 5}) {
      DyadicParams p;
      p.d = 2;
      p.j = j;
      p.m = m;
      BjmSampler s(p, 8.0);
      for (int t = 0; t < 5; ++t) {
        double r = s.ratio(3, t);
        CHECK(r <= rho_l1());
        CHECK(r <= 10.0 * std::exp2(-std::abs(j) / 2.0) * rho_l1());
      }
      auto [f, g] = s.inputs(3, 0);
      SampledSignal z = f;
      for (auto& v : z.samples) v = 0.0;
      CHECK(max_abs(apply_Bjm(p, z, g, s.grids().out)) == 0.0);
    }
  }
}

TEST_CASE("sampler ratio equals the operator on its inputs") {
  for (int j : {-3, 2}) {
    DyadicParams p;
    p.d = 2;
    p.j = j;
    p.m = 5;
    BjmSampler s(p, 8.0);
    auto [f, g] = s.inputs(9, 4);
    auto b = apply_Bjm(p, f, g, s.grids().out);
    CHECK(s.ratio(9, 4) == doctest::Approx(lp_norm(b, 1) / (l2_norm(f) * l2_norm(g))).epsilon(1e-10));
  }
  CHECK_THROWS(apply_Bjm(DyadicParams{2, 1, 3, 0, 4}, BjmSampler(DyadicParams{2, 2, 3, 0, 4}, 8.0).inputs(1, 0).first,
                         BjmSampler(DyadicParams{2, 2, 3, 0, 4}, 8.0).inputs(1, 0).second,
                         BjmSampler(DyadicParams{2, 2, 3, 0, 4}, 8.0).grids().out));
}

TEST_CASE("T_jm and B_jm agree under rescaling") {
  // T_{j,m}(f,g)(x) = 2^{(d-1)j/2} B_{j,m}(F,G)(2^{dj+m} x) with F = f(2^{-(j+m)} .), G = g(2^{-(dj+m)} .)
  for (int j : {2, -2}) {
    DyadicParams p;
    p.d = 2;
    p.j = j;
    p.m = 4;
    Grid1D g = tjm_grid(p);
    double sx = std::ldexp(1.0, j + 4), sy = std::ldexp(1.0, 2 * j + 4);
    auto f = random_bandlimited(g, Band{sx / 2, 2 * sx, true}, 1.0, 41);
    auto h = random_bandlimited(g, Band{sy / 2, 2 * sy, true}, 1.0, 42);
    auto t = apply_Tjm_freq(p, f, h, g);
    double rt = lp_norm(t, 1) / (l2_norm(f) * l2_norm(h));

    SampledSignal F = f, G = h;
    F.grid.step *= sx;
    G.grid.step *= sy;
    double Pout = std::max(F.grid.period(), G.grid.period());
    Grid1D out = make_grid(0.0, Pout, g.count);
    auto b = apply_Bjm(p, F, G, out);
    double rb = lp_norm(b, 1) / (l2_norm(F) * l2_norm(G));
    CHECK(rt == doctest::Approx(rb).epsilon(1e-9));
  }
}

TEST_CASE("measured T_jm and B_jm norms track each other") {
  DyadicParams p;
  p.d = 2;
  p.j = 2;
  p.m = 4;
  Grid1D g = tjm_grid(p);
  double sx = std::ldexp(1.0, 6), sy = std::ldexp(1.0, 8);
  double best_t = 0.0;
  for (int t = 0; t < 40; ++t) {
    auto f = random_bandlimited(g, Band{sx / 2, 2 * sx, true}, 1.0, 500 + 2 * t);
    auto h = random_bandlimited(g, Band{sy / 2, 2 * sy, true}, 1.0, 501 + 2 * t);
    auto out = apply_Tjm_freq(p, f, h, g);
    best_t = std::max(best_t, lp_norm(out, 1) / (l2_norm(f) * l2_norm(h)));
  }
  BjmSampler s(p, sx * g.period());
  double best_b = 0.0;
  for (int t = 0; t < 40; ++t) best_b = std::max(best_b, s.ratio(77, t));
  CHECK(best_t / best_b > 0.7);
  CHECK(best_t / best_b < 1.3);
}

TEST_CASE("cell-localized operator") {
  DyadicParams p;
  p.d = 2;
  p.j = 1;
  p.m = 2;  // cells of length 2^3
  BjmSampler s(p, 8.0, true);
  auto [f, g] = s.inputs(5, 0);
  const Grid1D& out = s.grids().out;
  REQUIRE(out.period() == doctest::Approx(16.0));
  SampledSignal total{out, cvec(out.count, 0.0), Band::full(out)};
  SampledSignal cell0;
  for (long n = -1; n <= 2; ++n) {
    p.n = n;
    auto b = apply_Bjmn(p, f, g, out);
    if (n == 0) cell0 = b;
    for (std::size_t i = 0; i < out.count; ++i) total.samples[i] += b.samples[i];
  }
  double slack = 8.0 * kMollifierHalfWidth;
  for (std::size_t i = 0; i < out.count; ++i) {
    double x = out.point(i);
    if (x < -slack || x > 8.0 + slack) CHECK(cell0.samples[i] == cplx(0.0));
    if (x > slack && x < 8.0 - slack) CHECK(std::abs(cell0.samples[i] - total.samples[i]) < 1e-12);
  }
  // at the window centre |xi| = 1 both window families equal 1, so the pieces sum to B_jm
  double P = s.grids().f.period(), Q = s.grids().g.period();
  auto tf = tone(s.grids().f, std::round(P) / P), tg = tone(s.grids().g, -std::round(Q) / Q);
  SampledSignal sum{out, cvec(out.count, 0.0), Band::full(out)};
  for (long n = -1; n <= 2; ++n) {
    p.n = n;
    auto b = apply_Bjmn(p, tf, tg, out);
    for (std::size_t i = 0; i < out.count; ++i) sum.samples[i] += b.samples[i];
  }
  CHECK(rel_l2(sum, apply_Bjm(p, tf, tg, out)) < 1e-10);
}
