#pragma once

#include <cstddef>
#include <vector>

namespace bht {

struct GLRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Cached n-point Gauss-Legendre rule (Newton on the three-term recurrence).
const GLRule& gauss_legendre(std::size_t n);

// Composite rule on [a, b]: `panels` equal panels with `order` nodes each.
struct Nodes {
  std::vector<double> x;
  std::vector<double> w;
};
Nodes composite_gl(double a, double b, std::size_t panels, std::size_t order);

template <class F>
auto integrate_gl(F&& f, double a, double b, std::size_t panels, std::size_t order) -> decltype(f(a)) {
  const GLRule& r = gauss_legendre(order);
  double h = (b - a) / static_cast<double>(panels);
  decltype(f(a)) acc{};
  for (std::size_t p = 0; p < panels; ++p) {
    double c = a + (static_cast<double>(p) + 0.5) * h;
    for (std::size_t i = 0; i < order; ++i) acc += r.w[i] * 0.5 * h * f(c + 0.5 * h * r.x[i]);
  }
  return acc;
}

}  // namespace bht
