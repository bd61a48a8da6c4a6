#include <cmath>

#include "bht/bumps.hpp"
#include "bht/quadrature.hpp"
#include "doctest.h"

using namespace bht;

TEST_CASE("theta plateau, support and range") {
  CHECK(theta(0.25) == 1.0);
  CHECK(theta(0.5) == 1.0);
  CHECK(theta(1.5) == 0.0);
  CHECK(theta(1.0) == 0.0);
  for (int i = -200; i <= 200; ++i) {
    double x = i / 100.0;
    CHECK(theta(x) == theta(-x));
    CHECK(theta(x) >= 0.0);
    CHECK(theta(x) <= 1.0);
  }
}

TEST_CASE("phi_hat support") {
  for (int i = -300; i <= 300; ++i) {
    double x = i / 100.0;
    if (std::abs(x) <= 0.5 || std::abs(x) >= 2.0) CHECK(phi_hat(x) == 0.0);
  }
  CHECK(phi_hat(1.0) == 1.0);
}

TEST_CASE("rho is odd with support in 1/2 <= |t| <= 2") {
  for (int i = -2500; i <= 2500; ++i) {
    double t = i / 1000.0;
    CHECK(rho(t) + rho(-t) == 0.0);
    if (std::abs(t) <= 0.5 || std::abs(t) >= 2.0) CHECK(rho(t) == 0.0);
  }
  CHECK(rho(1.25) == 1.0);
}

TEST_CASE("partition sums") {
  CHECK(check_partition(1.0, -20, 0) == doctest::Approx(theta(0.5)).epsilon(1e-15));
  CHECK(std::abs(check_partition(3.0, -20, 20) - 1.0) < 1e-12);
  CHECK(check_partition(std::ldexp(1.0, 10), -20, 8) == 0.0);
  CHECK_THROWS(check_partition(0.0, -1, 1));

  Rng rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double e = -18.0 + 36.0 * rng.uniform();
    double xi = std::exp2(e) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    worst = std::max(worst, std::abs(check_partition(xi, -20, 20) - 1.0));
  }
  CHECK(worst < 1e-10);

  double worst_tel = 0.0;
  for (int m0 = -10; m0 <= 10; ++m0)
    for (int i = 0; i < 200; ++i) {
      double xi = std::exp2(-12.0 + 24.0 * rng.uniform());
      worst_tel = std::max(worst_tel, std::abs(check_partition(xi, -20, m0) - theta(std::ldexp(xi, -(m0 + 1)))));
    }
  CHECK(worst_tel < 1e-10);
}

TEST_CASE("rho0 partition") {
  double worst = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    double t = std::exp2(-8.0 + 16.0 * i / 4000.0);
    double acc = 0.0;
    for (int j = -40; j <= 40; ++j) acc += rho0(std::ldexp(t, j));
    worst = std::max(worst, std::abs(acc - 1.0));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("phi1_hat and phi2_hat") {
  CHECK(phi1_hat(0.375) == 1.0);
  CHECK(phi1_hat(-2.125) == 1.0);
  CHECK(phi1_hat(0.125) == 0.0);
  CHECK(phi1_hat(2.375) == 0.0);
  CHECK(phi1_hat(0.2) > 0.0);
  CHECK(phi2_hat(0.0) == 1.0);
  CHECK(phi2_hat(1.0) == 0.0);
  CHECK(phi2_hat(-1.0) == 0.0);
}

TEST_CASE("mollifier has unit mass and is nonnegative") {
  double mass = integrate_gl(mollifier, -kMollifierHalfWidth, kMollifierHalfWidth, 64, 16);
  CHECK(std::abs(mass - 1.0) < 1e-12);
  for (int i = -100; i <= 100; ++i) CHECK(mollifier(i * 1e-4) >= 0.0);
}

TEST_CASE("star indicator") {
  for (int k : {-3, 0, 4}) {
    double len = std::ldexp(1.0, k);
    CHECK(std::abs(smooth_indicator(IndicatorKind::star, k, 5, 5.5 * len) - 1.0) < 1e-10);
    CHECK(smooth_indicator(IndicatorKind::star, k, 5, 7.5 * len) == 0.0);
    Rng rng(k + 100);
    for (int i = 0; i < 50; ++i) {
      double x = (rng.uniform() * 40.0 - 20.0) * len;
      double acc = 0.0;
      auto n0 = static_cast<long>(std::floor(x / len));
      for (long n = n0 - 3; n <= n0 + 3; ++n) acc += smooth_indicator(IndicatorKind::star, k, n, x);
      CHECK(std::abs(acc - 1.0) < 1e-10);
    }
  }
  // oracle: direct convolution quadrature of 1_I with the scaled mollifier near an edge
  int k = 2;
  double h = std::ldexp(kMollifierHalfWidth, k);
  double x = cell_lo(k, 3) + 0.3 * h;
  double lo = std::max(x - h, cell_lo(k, 3));
  double direct = integrate_gl([&](double y) { return std::ldexp(mollifier(std::ldexp(x - y, -k)), -k); }, lo, x + h, 64, 16);
  CHECK(std::abs(smooth_indicator(IndicatorKind::star, k, 3, x) - direct) < 1e-10);
}

TEST_CASE("double-star indicator matches quadrature and is tiny far away") {
  for (int k : {-2, 0, 3}) {
    double len = std::ldexp(1.0, k);
    for (double x : {-0.7 * len, 0.4 * len, 1.6 * len, 5.0 * len}) {
      long n = 0;
      auto kern = [&](double y) { return std::ldexp(1.0, -k) * std::pow(1.0 + std::ldexp(std::abs(x - y), -k), -200.0); };
      // split at x so the kink of |x - y| sits on a panel edge
      double a = cell_lo(k, n), b = cell_hi(k, n);
      double q = 0.0;
      if (x > a && x < b)
        q = integrate_gl(kern, a, x, 400, 16) + integrate_gl(kern, x, b, 400, 16);
      else
        q = integrate_gl(kern, a, b, 400, 16);
      CHECK(std::abs(smooth_indicator(IndicatorKind::double_star, k, n, x) - q) < 1e-10);
    }
    double far = smooth_indicator(IndicatorKind::double_star, k, 0, 11.0 * len);
    CHECK(far < 1e-10);
    CHECK(far <= std::pow(11.0, -199.0) / 199.0 + 1e-300);
  }
}

TEST_CASE("frequency restriction") {
  auto g = make_grid(0.0, 32.0, 256);
  // spectrum at |xi| <= 1/4 where phi_hat vanishes
  auto low = random_bandlimited(g, Band{0.0, 0.25, true}, 1.0, 3);
  auto r = restrict(low, BumpSpec{BumpKind::phi_hat});
  CHECK(l2_norm(r) < 1e-14);

  auto s = random_bandlimited(g, Band{0.0, 3.0, true}, 1.0, 4);
  auto twice = restrict(restrict(s, BumpSpec{BumpKind::phi_hat}), BumpSpec{BumpKind::phi_hat});
  auto c = fourier_transform(s, Direction::forward);
  for (std::size_t k = 0; k < g.count; ++k) {
    double w = phi_hat(g.frequency(k));
    c.samples[k] *= w * w;
  }
  auto once_sq = fourier_transform(c, Direction::inverse);
  for (std::size_t k = 0; k < g.count; ++k) CHECK(std::abs(twice.samples[k] - once_sq.samples[k]) < 1e-12);
  CHECK(l2_norm(restrict(s, BumpSpec{BumpKind::phi_hat})) <= l2_norm(s));
}

TEST_CASE("bump kinds parse and evaluate with scale and shift") {
  CHECK(parse_bump_kind("rho") == BumpKind::rho);
  CHECK_THROWS(parse_bump_kind("nope"));
  BumpSpec s{BumpKind::theta, 2.0, 1.0};
  CHECK(eval_bump(s, 1.0) == 1.0);
  CHECK(eval_bump(s, 3.5) == 0.0);
  BumpSpec p{BumpKind::phi_m0_hat, 1.0, 0.0, 3};
  CHECK(eval_bump(p, 7.0) == theta(7.0 / 16.0));
}
