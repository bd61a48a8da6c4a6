#include <cmath>

#include "bht/bumps.hpp"
#include "bht/harness.hpp"
#include "bht/lattice.hpp"
#include "bht/oscsym.hpp"
#include "bht/quadrature.hpp"
#include "doctest.h"

using namespace bht;

namespace {

OscQuadSpec tight() {
  OscQuadSpec q;
  q.tol = 1e-13;
  return q;
}

// brute-force fixed rule: many panels, no adaptivity
cplx brute_rho_integral(const std::function<double(double)>& phase_cycles, double cycles_per_unit) {
  auto panels = static_cast<std::size_t>(std::max(64.0, 32.0 * cycles_per_unit * 1.5));
  auto f = [&](double t) { return rho(t) * std::polar(1.0, -kTwoPi * phase_cycles(t)); };
  return integrate_gl(f, -2.0, -0.5, panels, 12) + integrate_gl(f, 0.5, 2.0, panels, 12);
}

}  // namespace

TEST_CASE("osc_integral trivial cases") {
  auto r = osc_integral([](double t) { return cplx(rho(t)); }, PhaseSpec::monomial(2, 0.0, 0.0), -2.0, 2.0, tight());
  CHECK(std::abs(r.value) < 1e-13);
  CHECK(r.converged);
  auto p = osc_integral([](double) { return cplx(1.0); }, PhaseSpec::monomial(2, 4.0, 0.0), 0.0, 1.0, tight());
  CHECK(std::abs(p.value) < 1e-13);
  CHECK_THROWS(osc_integral([](double) { return cplx(1.0); }, PhaseSpec::monomial(2, 1.0, 0.0), 0.0, 1.0, OscQuadSpec{8}));
}

TEST_CASE("osc_integral matches a 4x refined fixed rule") {
  double xi = 64.0, eta = 64.0;
  auto v = symbol_md(2, xi, eta, tight());
  double rate = xi + 2 * eta * 2.0;
  auto ref = brute_rho_integral([&](double t) { return xi * t + eta * t * t; }, 4.0 * rate);
  CHECK(std::abs(v.value - ref) < 1e-8);
}

TEST_CASE("non-convergence is reported, not thrown") {
  OscQuadSpec q;
  q.tol = 1e-300;
  q.max_refine = 1;
  auto v = symbol_md(2, 10.0, 3.0, q);
  CHECK_FALSE(v.converged);
  CHECK(v.refinements_used == 1);
  CHECK(std::isfinite(v.est_error));
}

TEST_CASE("symbol symmetries") {
  CHECK(std::abs(symbol_md(2, 0.0, 0.0, tight()).value) < 1e-13);
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    int d = 2 + i % 3;
    double xi = (rng.uniform() - 0.5) * 40.0;
    double eta = (rng.uniform() - 0.5) * 40.0;
    auto a = symbol_md(d, xi, eta, tight()).value;
    auto b = symbol_md(d, -xi, -eta, tight()).value;
    CHECK(std::abs(std::conj(a) - b) < 1e-10);
    auto c = symbol_md(d, -xi, (d % 2 == 0 ? 1.0 : -1.0) * eta, tight()).value;
    CHECK(std::abs(a + c) < 1e-10);
  }
}

TEST_CASE("scaled symbol") {
  CHECK(symbol_mj(2, 0, 3.0, -2.0, tight()).value == symbol_md(2, 3.0, -2.0, tight()).value);
  for (int j : {-3, 2, 5}) {
    int d = 2;
    auto a = symbol_mj(d, j, std::ldexp(1.0, j), std::ldexp(1.0, d * j), tight()).value;
    CHECK(std::abs(a - symbol_md(d, 1.0, 1.0, tight()).value) < 1e-10);
  }
  // direct definition: int 2^j rho(2^j t) exp(-2 pi i (xi t + eta t^d)) dt
  Rng rng(17);
  for (int i = 0; i < 6; ++i) {
    int d = 2 + i % 2;
    int j = static_cast<int>(rng.uniform() * 7) - 3;
    double xi = (rng.uniform() - 0.5) * 30.0 * std::ldexp(1.0, j);
    double eta = (rng.uniform() - 0.5) * 30.0 * std::ldexp(1.0, d * j);
    double s = std::ldexp(1.0, -j);
    auto f = [&](double t) {
      return std::ldexp(rho(std::ldexp(t, j)), j) * std::polar(1.0, -kTwoPi * (xi * t + eta * std::pow(t, d)));
    };
    cplx ref = integrate_gl(f, -2.0 * s, -0.5 * s, 2000, 12) + integrate_gl(f, 0.5 * s, 2.0 * s, 2000, 12);
    CHECK(std::abs(symbol_mj(d, j, xi, eta, tight()).value - ref) < 1e-8);
  }
}

TEST_CASE("critical points") {
  CHECK(*critical_point(2, -2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*critical_point(2, 2.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(*critical_point(3, -3.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(critical_point(3, 3.0, 1.0).has_value());
  CHECK_FALSE(critical_point(2, -2.0, 0.0).has_value());
  CHECK_FALSE(critical_point(2, -100.0, 1.0).has_value());
}

TEST_CASE("stationary phase term") {
  // c_2 = pi / 2
  CHECK(chirp_constant(2) == doctest::Approx(kPi / 2).epsilon(1e-15));
  double xi = -2.0, eta = 1.1;
  int m = 12;
  auto v = symbol_md(2, std::ldexp(xi, m), std::ldexp(eta, m), tight()).value;
  auto s = stationary_md(2, m, xi, eta);
  CHECK(std::abs(v - s) / std::ldexp(1.0, -m / 2) < 0.1);

  std::vector<double> ms, mags;
  for (int mm = 4; mm <= 14; ++mm) {
    ms.push_back(mm);
    mags.push_back(std::abs(symbol_md(2, std::ldexp(xi, mm), std::ldexp(eta, mm), tight()).value));
  }
  auto fit = fit_slope(ms, mags);
  CHECK(std::abs(fit.slope + 0.5) < 0.05);

  double offset0 = 0.0;
  for (int mm = 10; mm <= 14; ++mm) {
    auto a = symbol_md(2, std::ldexp(xi, mm), std::ldexp(eta, mm), tight()).value;
    auto b = stationary_md(2, mm, xi, eta);
    double off = std::arg(a / b);
    if (mm == 10) offset0 = off;
    CHECK(std::abs(std::remainder(off - offset0, kTwoPi)) < 0.1);
  }
  CHECK_THROWS(stationary_md(2, 4, 2.0, -100.0));
}

TEST_CASE("chirp phase agrees with the critical value of the phase") {
  // positive xi, negative eta puts the critical point at t > 0 for even d
  for (int d : {2, 4}) {
    double xi = 1.3, eta = -0.7;
    auto t = critical_points_in_support(d, xi, eta);
    REQUIRE(t.size() == 1);
    double psi = -kTwoPi * 8.0 * (xi * t[0] + eta * std::pow(t[0], d));
    CHECK(std::abs(std::remainder(psi - chirp_phase(d, 3, xi, eta), kTwoPi)) < 1e-9);
  }
}

TEST_CASE("odd degree has two symmetric critical points") {
  auto t = critical_points_in_support(3, -1.5, 0.5);
  REQUIRE(t.size() == 2);
  CHECK(t[0] == doctest::Approx(-1.0));
  CHECK(t[1] == doctest::Approx(1.0));
  std::vector<double> ms, mags;
  for (int m = 4; m <= 14; ++m) {
    ms.push_back(m);
    mags.push_back(std::abs(symbol_md(3, std::ldexp(-1.5, m), std::ldexp(0.5, m), tight()).value));
  }
  auto fit = fit_slope(ms, mags);
  CHECK(std::abs(fit.slope + 0.5) < 0.05);
  CHECK(fit.r2 > 0.98);
}

TEST_CASE("nonstationary tail decays fast") {
  std::vector<double> ms, mags;
  for (int m = 4; m <= 10; ++m) {
    ms.push_back(m);
    mags.push_back(std::abs(symbol_md_tilde(2, std::ldexp(1.0, m), std::ldexp(1.0 / 32, m), tight()).value));
  }
  CHECK(fit_slope(ms, mags).slope <= -3.0);
  // oracle for the cancellation-free form at a moderate frequency
  auto a = symbol_md_tilde(2, 20.0, 0.5, tight()).value;
  auto b = symbol_md(2, 20.0, 0.5, tight()).value - rho_transform(20.0, tight()).value;
  CHECK(std::abs(a - b) < 1e-12);
}

TEST_CASE("halving tol stays within the previous error estimate") {
  Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    double xi = (rng.uniform() - 0.5) * 200.0, eta = (rng.uniform() - 0.5) * 200.0;
    OscQuadSpec q;
    q.tol = 1e-9;
    auto a = symbol_md(2, xi, eta, q);
    q.tol = 5e-10;
    auto b = symbol_md(2, xi, eta, q);
    CHECK(std::abs(a.value - b.value) <= a.est_error + 1e-15);
  }
}

TEST_CASE("lattice tables agree with adaptive quadrature") {
  std::vector<double> xs = {-41.5, 3.25, 150.0};
  for (int d : {2, 3}) {
    auto te = symbol_table_eta_lattice(d, xs, 0.37, -200, 500);
    auto tx = symbol_table_xi_lattice(d, xs, 0.37, -200, 500);
    for (std::size_t r = 0; r < xs.size(); ++r)
      for (std::size_t c = 0; c < 500; c += 41) {
        double lat = (-200.0 + static_cast<double>(c)) * 0.37;
        CHECK(std::abs(te[r][c] - symbol_md(d, xs[r], lat, tight()).value) < 1e-11);
        CHECK(std::abs(tx[r][c] - symbol_md(d, lat, xs[r], tight()).value) < 1e-11);
      }
  }
}

TEST_CASE("principal part of the q1 integral") {
  int d = 2;
  double a = std::ldexp(1.0, 12), b = 3.0;
  double Cd = pp_q1_Cd(d);
  double p = 2.0;
  // window of x where the critical point lies in supp phi1_hat
  double xlo = -b - a * p * 19.0 / 8.0, xhi = -b - a * p / 8.0;
  double num = 0.0, den = 0.0;
  OscQuadSpec q;
  q.tol = 1e-10;
  q.min_panels_per_oscillation = 4;
  for (int i = 0; i < 48; ++i) {
    double x = xlo + (xhi - xlo) * (i + 0.5) / 48;
    cplx pp = principal_part_q1(d, a, b, x);
    CHECK(std::abs(pp) <= Cd / std::sqrt(a) + 1e-15);
    cplx dq = direct_q1(d, a, b, x, q);
    num += std::norm(pp - dq);
    den += std::norm(dq);
  }
  CHECK(std::sqrt(num / den) < 0.15);

  // vanishes where the argument of phi1_hat leaves its support
  for (double x : {xhi + 10.0, xlo - 4000.0, 1000.0}) {
    double arg = pp_q1_c2(d) * std::pow(a, -(d - 1.0)) * std::pow(x + b, d - 1);
    if (std::abs(arg) < 0.125 || std::abs(arg) > 2.375) CHECK(principal_part_q1(d, a, b, x) == cplx(0.0));
  }
  CHECK_THROWS(principal_part_q1(d, 0.0, b, 1.0));
}

TEST_CASE("principal part constants for higher degree") {
  for (int d : {3, 4}) {
    double a = std::ldexp(1.0, 11) * (d == 3 ? 1.0 : -1.0), b = 0.0;
    double pexp = double(d) / (d - 1);
    // pick x so the critical point sits at xi* = 1
    double x = -a * pexp;
    cplx pp = principal_part_q1(d, a, b, x);
    OscQuadSpec q;
    q.tol = 1e-10;
    cplx dq = direct_q1(d, a, b, x, q);
    CHECK(std::abs(pp - dq) / std::abs(dq) < 0.15);
    double expected_phase = pp_q1_c1(d) * std::pow(a, -(d - 1.0)) * std::pow(x + b, d);
    double psi = a * 1.0 + (x + b) * 1.0;
    CHECK(std::abs(std::remainder(expected_phase - psi, kTwoPi)) < 1e-6);
  }
}

TEST_CASE("principal part of the q2 integral") {
  int d = 2;
  double a = std::ldexp(1.0, 12), b = 0.0;
  double num = 0.0, den = 0.0;
  OscQuadSpec q;
  q.tol = 1e-10;
  q.min_panels_per_oscillation = 4;
  // eta* = ((d-1)(x+b)/a)^{-(d-1)/d} in [3/8, 17/8]
  for (int i = 0; i < 32; ++i) {
    double es = 0.4 + 1.7 * (i + 0.5) / 32;
    double x = a * std::pow(es, -double(d) / (d - 1)) / (d - 1) - b;
    cplx pp = principal_part_q2(d, a, b, x);
    CHECK(std::abs(pp) <= pp_q2_Cd(d) / std::sqrt(a) + 1e-15);
    cplx dq = direct_q2(d, a, b, x, q);
    num += std::norm(pp - dq);
    den += std::norm(dq);
  }
  CHECK(std::sqrt(num / den) < 0.15);
}
