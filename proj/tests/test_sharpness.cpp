#include "doctest.h"

#include <cmath>

#include "bht/bumps.hpp"
#include "bht/foundation.hpp"
#include "bht/sharpness.hpp"

using namespace bht;

TEST_CASE("Q construction") {
  CounterexampleSpec s{2, 2, 1e4, 1e-6};
  auto Q = build_Q(s);
  CHECK(q_shifted_coeffs(s)[0] == 0.0);
  CHECK(q_shifted_coeffs(s)[1] == 1.0);
  CHECK(Q.degree() == 2);
  CHECK(std::abs(Q.eval(1.0)) < 1e-15);
  CHECK(Q.deriv(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(Q.eval(2.0) == doctest::Approx(1.0001).epsilon(1e-14));
  // expanded and shifted forms agree
  CounterexampleSpec s3{5, 3, 300, 1e-4};
  auto Q3 = build_Q(s3);
  for (double t : {-1.5, 0.3, 1.7})
    CHECK(Q3.eval(t) == doctest::Approx(q_nonlinear(s3, t) + t - 1.0).epsilon(1e-12));
  CHECK_THROWS(build_Q({2, 3, 1e4, 1e-6}));
  CHECK_THROWS(build_Q({3, 2, 50, 1e-6}));
  CHECK_THROWS(build_Q({3, 2, 1e4, 1.5}));
}

TEST_CASE("intersection roots at the reference instance") {
  auto r = intersection_roots({2, 2, 1e4, 1e-6});
  CHECK(r.t1.holds());
  CHECK(r.t2.holds());
  CHECK(r.t1.lo == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(r.t1.hi == doctest::Approx(1.0 + 2.0 * std::sqrt(2e4 * 1e-6)).epsilon(1e-12));
  CHECK(r.t2.lo == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(r.t2.hi == doctest::Approx(1.0 + std::sqrt(2e4 * 1e-6)).epsilon(1e-12));
  // the roots solve their equations
  CounterexampleSpec s{2, 2, 1e4, 1e-6};
  CHECK(std::abs(q_nonlinear(s, r.t1.root) - 4e-6) < 1e-16);
  CHECK(std::abs(q_nonlinear(s, r.t2.root) - 1e-6) < 1e-16);
  // not bracketed in (1, 2]
  CHECK_THROWS_AS(intersection_roots({2, 2, 100, 0.9}), std::runtime_error);
}

TEST_CASE("root offsets scale like delta^{1/n}") {
  for (int n : {2, 3}) {
    auto a = intersection_roots({3, n, 1e4, 1e-8});
    auto b = intersection_roots({3, n, 1e4, 0.5e-8});
    CHECK((b.t1.root - 1.0) / (a.t1.root - 1.0) == doctest::Approx(std::pow(2.0, -1.0 / n)).epsilon(0.02));
    CHECK((b.t2.root - 1.0) / (a.t2.root - 1.0) == doctest::Approx(std::pow(2.0, -1.0 / n)).epsilon(0.02));
  }
}

TEST_CASE("root enclosures on a grid of admissible A and delta") {
  Rng rng(17);
  for (auto [d, n] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{3, 3}, std::pair{5, 3}})
    for (double A : {100.0, 1e3, 1e4, 1e5, 1e6})
      for (double frac : {1e-4, 1e-3, 1e-2, 0.1, 0.9}) {
        // delta just inside the window 2 (A n!)^{1/n} delta^{1/n} < 1/4, jittered
        double nf = std::tgamma(n + 1.0);
        double delta = frac * (1.0 + 0.05 * rng.uniform()) * std::pow(0.125, n) / (A * nf) * 0.95;
        CounterexampleSpec s{d, n, A, delta};
        REQUIRE(s.in_window());
        auto r = intersection_roots(s);
        CHECK(r.t1.holds());
        CHECK(r.t2.holds());
        CHECK(r.t2.root < r.t1.root);
      }
}

TEST_CASE("indicator norms and mollifier convergence") {
  CounterexampleSpec s{2, 2, 1e4, 1e-7};
  auto c = sharpness_cell(s, 0.75, 1.5, 1.5);
  CHECK(c.fp_norm == doctest::Approx(std::pow(4e-7, 1.0 / 1.5)).epsilon(0.01));
  CHECK(c.gq_norm == doctest::Approx(std::pow(1e-7, 1.0 / 1.5)).epsilon(0.01));
  CHECK(c.converged);
  SharpnessOptions half;
  half.mollifier_fraction = 1.0 / 200.0;
  auto h = sharpness_cell(s, 0.75, 1.5, 1.5, half);
  CHECK(std::abs(h.lhs - c.lhs) < 0.02 * c.lhs);
  CHECK(c.lhs >= c.lower_bound);
}

TEST_CASE("sharpness exponent") {
  auto a = sharpness_scan(2, 2, 1e4, 0.5, 1.0, 1.0, {5e-7, 2e-7, 1e-7, 5e-8, 2e-8, 1e-8});
  CHECK(a.expected_exponent == 1.0);
  CHECK(std::abs(a.fitted_exponent - 1.0) <= 0.1);
  CHECK(a.passes);
  auto b = sharpness_scan(3, 3, 1e4, 2.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0, {3e-8, 1e-8, 3e-9, 1e-9, 3e-10, 1e-10});
  CHECK(std::abs(b.fitted_exponent - (2.0 / 3.0 + 1.0 / 3.0)) <= 0.1);
  CHECK(b.passes);
  for (const auto& c : b.cells) {
    CHECK(c.lhs >= c.lower_bound);
    CHECK(c.rho_min >= 0.1);
  }
}

TEST_CASE("sharpness scan rejects bad inputs") {
  std::vector<double> ds{5e-7, 2e-7, 1e-7, 5e-8};
  CHECK_THROWS(sharpness_scan(2, 2, 1e4, 0.5, 2.0, 2.0, ds));
  CHECK_THROWS(sharpness_scan(2, 2, 1e4, 0.4, 0.8, 0.8, ds));
  // outside the window near t = 1
  CHECK_THROWS(sharpness_scan(2, 2, 1e4, 0.5, 1.0, 1.0, {1e-3, 1e-4, 1e-5, 1e-6}));
  CHECK_THROWS_AS(sharpness_cell({2, 2, 1e4, 1e-12}, 0.5, 1.0, 1.0), std::domain_error);
}

TEST_CASE("norm of T_Q against a brute-force Riemann sum") {
  // original variables, expanded Q, uniform sums in t and x
  CounterexampleSpec s{2, 2, 100, 1e-5};
  REQUIRE(s.in_window());
  auto Q = build_Q(s);
  double delta = s.delta, w = delta / 200.0, r = 0.75;
  auto soft = [&](double z, double a, double b) {
    return smooth_step((z - a + w) / (2 * w)) * (1.0 - smooth_step((z - b + w) / (2 * w)));
  };
  auto T = [&](double x) {
    double lo = x - 4 * delta - w, hi = x + w, h = w / 8;
    double acc = 0.0;
    for (double t = lo + h / 2; t < hi; t += h)
      acc += soft(x - t, 0.0, 4 * delta) * soft(x - Q.eval(t), 1.0 - delta, 1.0) * rho(t);
    return acc * h;
  };
  double x_lo = 1.0 - 0.08, x_hi = 1.0 + 0.08, hx = (x_hi - x_lo) / 8000;
  double brute = 0.0;
  for (int k = 0; k < 8000; ++k) brute += std::pow(T(x_lo + (k + 0.5) * hx), r) * hx;
  auto c = sharpness_cell(s, r, 1.5, 1.5);
  CHECK(c.lhs == doctest::Approx(brute).epsilon(1e-4));
}
