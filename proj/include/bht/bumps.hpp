#pragma once

#include <string>

#include "bht/foundation.hpp"

namespace bht {

enum class BumpKind { theta, phi_hat, phi_m0_hat, rho, rho0, rho1, phi1_hat, phi2_hat, mollifier_phi };

// Value is base((x - shift) / scale); m0 is used by phi_m0_hat only.
struct BumpSpec {
  BumpKind kind = BumpKind::theta;
  double scale = 1.0;
  double shift = 0.0;
  int m0 = 0;
};

BumpKind parse_bump_kind(const std::string& name);
const char* bump_kind_name(BumpKind k);

// templates
double bump_template(double x);  // exp(1 - 1/(1-x^2)) on |x| < 1
double smooth_step(double x);    // 0 for x <= 0, 1 for x >= 1

double theta(double xi);
double phi_hat(double xi);
double phi_m0_hat(double xi, int m0);
double rho1(double t);
double rho(double t);
double rho0(double t);
double phi1_hat(double xi);
double phi2_hat(double xi);
double mollifier(double x);  // half-width 1/100, unit mass

constexpr double kMollifierHalfWidth = 0.01;

double eval_bump(const BumpSpec& spec, double x);

// sum_{m = m_lo}^{m_hi} phi_hat(xi / 2^m)
double check_partition(double xi, int m_lo, int m_hi);

// I_{k,n} = [2^k n, 2^k (n+1)]
double cell_lo(int k, long n);
double cell_hi(int k, long n);

enum class IndicatorKind { star, double_star };
double smooth_indicator(IndicatorKind kind, int k, long n, double x);

SampledSignal restrict(const SampledSignal& s, const BumpSpec& spec);

// integral of |rho|
double rho_l1();

}  // namespace bht
