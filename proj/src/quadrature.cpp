#include "bht/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "bht/foundation.hpp"

namespace bht {

namespace {

GLRule build_rule(std::size_t n) {
  GLRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k - 1.0) * z * p2 - (k - 1.0) * p3) / static_cast<double>(k);
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

}  // namespace

const GLRule& gauss_legendre(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<GLRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GLRule>(build_rule(n));
  return *slot;
}

Nodes composite_gl(double a, double b, std::size_t panels, std::size_t order) {
  const GLRule& r = gauss_legendre(order);
  Nodes out;
  out.x.reserve(panels * order);
  out.w.reserve(panels * order);
  double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    double c = a + (static_cast<double>(p) + 0.5) * h;
    for (std::size_t i = 0; i < order; ++i) {
      out.x.push_back(c + 0.5 * h * r.x[i]);
      out.w.push_back(0.5 * h * r.w[i]);
    }
  }
  return out;
}

}  // namespace bht
