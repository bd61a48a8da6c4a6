#include "bht/uniformity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bht {

namespace {

void require_positive_interval(const Grid1D& g) {
  if (!(g.origin > 0.0)) throw std::invalid_argument("phase families need an interval inside (0, inf)");
}

bool lex_less(const PhaseFamilyPoint& x, const PhaseFamilyPoint& y) {
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

}  // namespace

Grid1D interval_grid(double lo, double hi, std::size_t n) {
  if (!(hi > lo)) throw std::invalid_argument("interval_grid: empty interval");
  if (n < 2) throw std::invalid_argument("interval_grid: need at least 2 points");
  return make_grid(lo, hi - lo, n);
}

cplx inner_I(const SampledSignal& f, const SampledSignal& g) {
  if (f.samples.size() != g.samples.size()) throw std::invalid_argument("inner_I: grids differ");
  cplx s = 0.0;
  for (std::size_t k = 0; k < f.samples.size(); ++k) s += f.samples[k] * std::conj(g.samples[k]);
  return s * f.grid.step;
}

double norm_I(const SampledSignal& f) { return std::sqrt(std::max(0.0, inner_I(f, f).real())); }

double PhaseFamilyPoint::eval(double xi) const {
  double p = family == PhaseFamily::Q1 ? double(d) / double(d - 1) : -1.0 / double(d - 1);
  return a * std::pow(xi, p) + b * xi;
}

bool PhaseFamilyPoint::valid() const {
  double m = std::abs(a);
  return d >= 2 && m >= std::exp2(m_tag - 100) && m <= std::exp2(m_tag + 100);
}

FamilyGrid FamilyGrid::standard(PhaseFamily family, int d, int m, int na, int nb) {
  if (na < 1 || nb < 1) throw std::invalid_argument("FamilyGrid::standard: empty grid");
  std::vector<double> as, bs;
  for (int i = 0; i < na; ++i) {
    double e = na == 1 ? double(m) : double(m) - 2.0 + 4.0 * double(i) / double(na - 1);
    as.push_back(-std::exp2(e));
    as.push_back(std::exp2(e));
  }
  double B = std::exp2(m + 2);
  for (int i = 0; i < nb; ++i) bs.push_back(nb == 1 ? 0.0 : -B + 2.0 * B * double(i) / double(nb - 1));
  return product(family, d, m, as, bs);
}

FamilyGrid FamilyGrid::product(PhaseFamily family, int d, int m, const std::vector<double>& as,
                               const std::vector<double>& bs) {
  FamilyGrid g;
  for (double a : as)
    for (double b : bs) g.points.push_back(PhaseFamilyPoint{family, a, b, m, d});
  return g;
}

SampledSignal phase_exponential(const Grid1D& I, const PhaseFamilyPoint& q) {
  require_positive_interval(I);
  return sample_function(I, [&](double xi) { return std::polar(1.0, q.eval(xi)); }, Band::full(I));
}

cplx pair_with_phase(const SampledSignal& f, const PhaseFamilyPoint& q) {
  require_positive_interval(f.grid);
  cplx s = 0.0;
  for (std::size_t k = 0; k < f.samples.size(); ++k) s += f.samples[k] * std::polar(1.0, -q.eval(f.grid.point(k)));
  return s * f.grid.step;
}

UniformityReport uniformity_deficit(const SampledSignal& f, const FamilyGrid& grid) {
  if (grid.points.empty()) throw std::invalid_argument("uniformity_deficit: empty family grid");
  require_positive_interval(f.grid);
  std::vector<double> val(grid.points.size());
  const std::size_t n = f.samples.size();
  const double h = f.grid.step;
  std::vector<double> xi(n), p1(n), p2(n);
  for (std::size_t k = 0; k < n; ++k) {
    xi[k] = f.grid.point(k);
    int d = grid.points.front().d;
    p1[k] = std::pow(xi[k], double(d) / double(d - 1));
    p2[k] = std::pow(xi[k], -1.0 / double(d - 1));
  }
  for (const auto& q : grid.points)
    if (q.d != grid.points.front().d) throw std::invalid_argument("uniformity_deficit: mixed degrees in one grid");
  parallel_for(grid.points.size(), [&](std::size_t i) {
    const auto& q = grid.points[i];
    const auto& pw = q.family == PhaseFamily::Q1 ? p1 : p2;
    cplx s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += f.samples[k] * std::polar(1.0, -(q.a * pw[k] + q.b * xi[k]));
    val[i] = std::abs(s * h);
  });
  UniformityReport r;
  r.grid_size = grid.points.size();
  std::size_t best = 0;
  for (std::size_t i = 1; i < val.size(); ++i)
    if (val[i] > val[best] || (val[i] == val[best] && lex_less(grid.points[i], grid.points[best]))) best = i;
  r.max_pairing = val[best];
  r.argmax = grid.points[best];
  double nf = norm_I(f);
  r.deficit = nf > 0.0 ? val[best] / (std::sqrt(f.grid.period()) * nf) : 0.0;
  return r;
}

Decomposition decompose(const SampledSignal& f, const PhaseFamilyPoint& q) {
  double I = f.grid.period();
  auto e = phase_exponential(f.grid, q);
  Decomposition D;
  D.coef_q = inner_I(f, e);
  SampledSignal r = f;
  for (std::size_t k = 0; k < r.samples.size(); ++k) r.samples[k] -= D.coef_q / I * e.samples[k];
  double nr = norm_I(r);
  D.g = r;
  if (nr > 0.0) {
    for (auto& v : D.g.samples) v /= nr;
  } else {
    // any unit vector orthogonal to e^{iq} will do; take the normalized alternating sequence projected off e^{iq}
    for (std::size_t k = 0; k < D.g.samples.size(); ++k) D.g.samples[k] = (k % 2 == 0) ? 1.0 : -1.0;
    cplx c = inner_I(D.g, e);
    for (std::size_t k = 0; k < D.g.samples.size(); ++k) D.g.samples[k] -= c / I * e.samples[k];
    double ng = norm_I(D.g);
    for (auto& v : D.g.samples) v /= ng;
  }
  D.coef_g = inner_I(f, D.g);
  double fmax = 0.0, err = 0.0;
  for (std::size_t k = 0; k < f.samples.size(); ++k) {
    cplx s = D.coef_g * D.g.samples[k] + D.coef_q / I * e.samples[k];
    err = std::max(err, std::abs(f.samples[k] - s));
    fmax = std::max(fmax, std::abs(f.samples[k]));
  }
  D.reconstruction_error = fmax > 0.0 ? err / fmax : err;
  double ff = inner_I(f, f).real();
  double rhs = std::norm(D.coef_g) + std::norm(D.coef_q) / I;
  D.pythagoras_error = ff > 0.0 ? std::abs(ff - rhs) / ff : std::abs(rhs);
  return D;
}

double proof_level_bound(const SampledSignal& f, const SampledSignal& h, const PhaseFamilyPoint& q) {
  double I = f.grid.period();
  double nf = norm_I(f);
  if (nf == 0.0) return 0.0;
  cplx fq = pair_with_phase(f, q);
  double x = std::norm(fq) / (I * nf * nf);
  double Le = std::abs(inner_I(phase_exponential(f.grid, q), h));
  return std::sqrt(std::max(0.0, 1.0 - x)) * norm_I(h) * nf + std::abs(fq) / I * Le;
}

Certificate certificate_bound(const SampledSignal& h, double sigma, const FamilyGrid& grid,
                              const std::vector<SampledSignal>& corpus) {
  if (!(sigma > 0.0)) throw std::invalid_argument("certificate_bound: sigma must be positive");
  if (grid.points.empty()) throw std::invalid_argument("certificate_bound: empty family grid");
  Certificate c;
  // L(e^{iq}) = |<e^{iq}, h>| = |<h, e^{iq}>|
  c.q_grid = uniformity_deficit(h, grid).max_pairing;
  for (const auto& f : corpus) {
    double nf = norm_I(f);
    if (nf == 0.0) continue;
    if (uniformity_deficit(f, grid).max_pairing > sigma * nf) continue;
    ++c.uniform_members;
    c.u_est = std::max(c.u_est, std::abs(inner_I(f, h)) / nf);
  }
  c.bound = std::max(c.u_est, 2.0 * c.q_grid / sigma);
  return c;
}

SampledSignal project_out_family(const SampledSignal& f, const FamilyGrid& grid) {
  std::vector<SampledSignal> basis;
  for (const auto& q : grid.points) {
    auto v = phase_exponential(f.grid, q);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : basis) {
        cplx c = inner_I(v, u);
        for (std::size_t k = 0; k < v.samples.size(); ++k) v.samples[k] -= c * u.samples[k];
      }
    double nv = norm_I(v);
    if (nv < 1e-8 * std::sqrt(f.grid.period())) continue;  // numerically dependent
    for (auto& s : v.samples) s /= nv;
    basis.push_back(std::move(v));
  }
  SampledSignal r = f;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& u : basis) {
      cplx c = inner_I(r, u);
      for (std::size_t k = 0; k < r.samples.size(); ++k) r.samples[k] -= c * u.samples[k];
    }
  return r;
}

}  // namespace bht
