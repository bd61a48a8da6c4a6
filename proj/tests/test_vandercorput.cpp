#include "doctest.h"

#include <cmath>

#include "bht/quadrature.hpp"
#include "bht/vandercorput.hpp"

using namespace bht;

TEST_CASE("decay exponents") {
  CHECK(dexp(2) == 0.25);
  CHECK(dexp(3) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(dexp(1, 0.5) == doctest::Approx(0.4).epsilon(1e-15));
  for (int l = 1; l < 10; ++l) CHECK(dexp(l + 1) < dexp(l));
  CHECK_THROWS(dexp(0));
}

TEST_CASE("lambda = 0 gives the product of the integrals") {
  auto phase = VdcPhase::generic([](double x, double y) { return x * x * y; }, 2);
  ScalarFn f = [](double x) { return cplx(x, 1.0); };
  ScalarFn g = [](double y) { return cplx(std::cos(y)); };
  auto r = bilinear_osc_form(phase, 0.0, f, g, {0, 1}, {0, 2});
  cplx expect = cplx(0.5, 1.0) * std::sin(2.0);
  CHECK(std::abs(r.value - expect) < 1e-13);
  CHECK(r.converged);
}

TEST_CASE("bilinear phase against a one-dimensional oracle") {
  // int int e^{i lambda x y} = int_0^1 (e^{i lambda y} - 1) / (i lambda y) dy
  double lambda = kTwoPi * 8.0;
  auto oracle = integrate_gl(
      [&](double y) {
        if (y == 0.0) return cplx(1.0);
        return (std::polar(1.0, lambda * y) - 1.0) / (cplx(0.0, 1.0) * lambda * y);
      },
      0.0, 1.0, 400, 16);
  auto phase = VdcPhase::generic([](double x, double y) { return x * y; }, 1);
  ScalarFn one = [](double) { return cplx(1.0); };
  auto r = bilinear_osc_form(phase, lambda, one, one, {0, 1}, {0, 1});
  CHECK(std::abs(r.value - oracle) < 1e-8);
}

TEST_CASE("ell = 1 hypothesis check") {
  auto flat = VdcPhase::generic([](double x, double y) { return x * y; }, 1);
  CHECK_FALSE(ell1_hypothesis_holds(flat, {0, 1}, {0, 1}));
  auto curved = VdcPhase::generic([](double x, double y) { return x * x * y; }, 1);
  CHECK(ell1_hypothesis_holds(curved, {0, 1}, {0.5, 1}));
  CHECK_THROWS_AS(osc_form_scan(flat, {0, 1}, {0, 1}, 2, 4), std::invalid_argument);
}

TEST_CASE("oscillatory form decays in lambda") {
  auto phase = VdcPhase::generic([](double x, double y) { return 0.5 * x * x * y; }, 2);
  auto s = osc_form_scan(phase, {0, 1}, {0, 1}, 4, 12);
  CHECK(s.values.size() == 9);
  CHECK(s.slope <= -0.2);
}

TEST_CASE("mixed derivative of Q matches finite differences") {
  // x-differences with a wide step are exact on the degree-d polynomial in x
  for (int d : {2, 3}) {
    auto Q = VdcPhase::Q(d, 0.3, 2, 0.4);
    for (double y : {0.7, 1.3, 2.0}) {
      double hx = 0.1, hy = 1e-4, x = 0.8;
      auto dx = [&](double yy) {
        // (d-1)-th forward difference in x
        double s = 0.0, binom = 1.0;
        for (int k = 0; k <= d - 1; ++k) {
          s += ((d - 1 - k) % 2 ? -1.0 : 1.0) * binom * Q.value(x + k * hx, yy);
          binom = binom * (d - 1 - k) / (k + 1);
        }
        return s / std::pow(hx, d - 1);
      };
      double fd = (dx(y + hy) - dx(y - hy)) / (2 * hy);
      double exact = mixed_derivative_Q(d, 0.4, y);
      CHECK(std::abs(fd - exact) < 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("mixed derivative witness") {
  auto Q = VdcPhase::Q(2, 0.0, 4, 0.5);
  VdcBox box{{1, 2}, {1, 2}};
  CHECK(mixed_derivative_witness(Q, box) > 0.0);
  // swapping the roles of y and y + tau flips tau
  auto Qm = VdcPhase::Q(2, 0.0, 4, -0.5);
  VdcBox shifted{{1, 2}, {1.5, 2.5}};
  CHECK(mixed_derivative_witness(Q, box) == doctest::Approx(mixed_derivative_witness(Qm, shifted)).epsilon(1e-12));
  CHECK_THROWS(mixed_derivative_witness(VdcPhase::Q(2, 0.0, 4, 0.0), box));
  CHECK_THROWS(mixed_derivative_witness(Q, VdcBox{{1, 2}, {0.0, 1.0}}));
}

TEST_CASE("phase derivative witness on the negative side") {
  VdcBox box{{2, 3}, {0.5, 1}};
  double w = phase_deriv_witness_neg(2, -12, 6, 0.3, box);
  CHECK(w > 0.0);
  // derivative against a centred difference of the phase
  auto ph = VdcPhase::phi_djm_tau(2, -12, 0.3);
  double u = 2.4, v = 0.7, h = 1e-5;
  double fd = (ph.value(u, v + h) - ph.value(u, v - h)) / (2 * h);
  CHECK(fd == doctest::Approx(dv_phi_tau(2, -12, 0.3, u, v)).epsilon(1e-7));
  CHECK_THROWS(phase_deriv_witness_neg(2, -12, 6, 0.0, box));
  CHECK_THROWS(phase_deriv_witness_neg(2, -2, 6, 0.3, box));
  CHECK_THROWS(phase_deriv_witness_neg(2, -12, 6, 0.3, VdcBox{{0.5, 1}, {0.5, 1}}));
}

TEST_CASE("forms vanish for g = 0") {
  ScalarFn zero = [](double) { return cplx(0.0); };
  ScalarFn one = [](double) { return cplx(1.0); };
  VdcFormParams p;
  p.m = 4;
  p.j = 4;
  CHECK(form_lambda_djm(VdcVariant::interval_I, p, one, zero) == cplx(0.0));
  CHECK(form_dual_kernel(VdcVariant::interval_I, p, zero).l2() == 0.0);
  p.j = -6;
  CHECK(form_lambda_djm(VdcVariant::neg, p, one, zero) == cplx(0.0));
  CHECK_THROWS(form_lambda_djm(VdcVariant::neg, VdcFormParams{2, -1, 6}, one, one));
  CHECK_THROWS(form_lambda_djm(VdcVariant::interval_I, VdcFormParams{2, 4, 4, 0.0}, one, one));
}

TEST_CASE("dual kernel reproduces the direct form") {
  ScalarFn f = [](double y) { return std::polar(1.0 + 0.3 * std::sin(3 * y), 2.0 * y); };
  ScalarFn g = [](double x) { return std::polar(1.0, 0.7 * std::cos(x) - 0.4 * std::cos(2 * x)); };
  for (auto v : {VdcVariant::interval_I, VdcVariant::neg}) {
    VdcFormParams p;
    p.m = 4;
    p.j = v == VdcVariant::interval_I ? 4 : -6;
    cplx direct = form_lambda_djm(v, p, f, g);
    auto K = form_dual_kernel(v, p, g);
    cplx via = 0.0;
    for (std::size_t i = 0; i < K.y.size(); ++i) via += K.w[i] * f(K.y[i]) * K.K[i];
    CHECK(std::abs(direct - via) < 1e-7 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("forms decay in m") {
  auto a = form_decay_scan(VdcVariant::interval_I, 2, 4, 9, 2, 3);
  CHECK(a.slope <= -dexp(1) * 0.5 + 0.06);
  auto b = form_decay_scan(VdcVariant::neg, 2, 4, 9, 2, 3);
  CHECK(b.slope <= -0.25 + 0.06);
  CHECK(b.values == form_decay_scan(VdcVariant::neg, 2, 4, 9, 2, 3).values);
}
