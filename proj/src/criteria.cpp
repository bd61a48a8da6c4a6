#include "bht/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bht/bumps.hpp"
#include "bht/operators.hpp"
#include "bht/oscsym.hpp"
#include "bht/paraproducts.hpp"
#include "bht/sharpness.hpp"
#include "bht/trilinear.hpp"
#include "bht/uniformity.hpp"
#include "bht/vandercorput.hpp"

namespace bht {

namespace {

std::uint64_t stream(std::uint64_t seed, std::int64_t id, std::int64_t slot = 0) {
  return Rng::keyed(seed, {id, slot}).next_u64();
}

DecayScanResult make_scan(const std::string& name, std::vector<double> axis, std::vector<double> values, int trials,
                          std::uint64_t seed, bool fit) {
  DecayScanResult s;
  s.scan = name;
  s.axis = std::move(axis);
  s.values = std::move(values);
  s.trials_per_cell = trials;
  s.seed = seed;
  if (fit) s.fit();
  return s;
}

ScanReport unfitted(const std::string& name, json params, double tol) {
  ScanReport r;
  r.scan = name;
  r.params = std::move(params);
  r.tolerance = tol;
  return r;
}

double rel_l2(const SampledSignal& a, const SampledSignal& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    num += std::norm(a.samples[i] - b.samples[i]);
    den += std::norm(b.samples[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

// ---- 1: partition of unity
ScanReport partition_of_unity(std::uint64_t seed) {
  Rng rng(stream(seed, 1));
  double worst = 0.0, worst_tel = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double xi = std::exp2(-18.0 + 36.0 * rng.uniform());
    if (rng.uniform() < 0.5) xi = -xi;
    worst = std::max(worst, std::abs(check_partition(xi, -20, 20) - 1.0));
    int m0 = -10 + int(rng.next_u64() % 21);
    worst_tel = std::max(worst_tel, std::abs(check_partition(xi, -20, m0) - theta(std::ldexp(xi, -(m0 + 1)))));
  }
  auto r = unfitted("partition_of_unity", {{"samples", 10000}, {"xi_range", "+-[2^-18, 2^18]"}, {"m_range", "-20..20"}},
                    1e-10);
  r.checks.push_back(make_check("max |sum phi_hat - 1|", worst, "<", 1e-10));
  r.checks.push_back(make_check("max telescoping error", worst_tel, "<", 1e-10));
  return r;
}

// ---- 2: stationary-phase rate
ScanReport stationary_rate(std::uint64_t seed) {
  OscQuadSpec q;
  q.tol = 1e-13;
  struct Config {
    int d;
    double xi, eta;
  };
  ScanReport out = unfitted("stationary_rate", json::object(), 0.05);
  for (Config c : {Config{2, -2.0, 1.1}, Config{3, -1.5, 0.5}}) {
    std::vector<double> ms, vs;
    bool conv = true;
    for (int m = 4; m <= 14; ++m) {
      auto v = symbol_md(c.d, std::ldexp(c.xi, m), std::ldexp(c.eta, m), q);
      conv = conv && v.converged;
      ms.push_back(m);
      vs.push_back(std::abs(v.value));
    }
    auto s = make_scan("stationary_rate_d" + std::to_string(c.d), ms, vs, 1, seed, true);
    std::string tag = "d=" + std::to_string(c.d);
    out.params[tag] = {{"xi0", c.xi}, {"eta0", c.eta}, {"m_range", "4..14"}};
    if (c.d == 2) {
      out.axis = s.axis;
      out.values = s.values;
      out.slope = s.slope;
      out.r2 = s.r2;
    }
    out.checks.push_back(make_check(tag + " |slope + 1/2|", s.slope + 0.5, "within", 0.05));
    out.checks.push_back(make_check(tag + " r2", s.r2, ">=", 0.98));
    out.checks.push_back(make_check(tag + " quadrature converged", conv ? 1.0 : 0.0, ">=", 1.0));
  }
  return out;
}

// ---- 3: nonstationary tail
ScanReport nonstationary_tail(std::uint64_t seed) {
  OscQuadSpec q;
  q.tol = 1e-13;
  std::vector<double> ms, vs;
  // |xi| = 32 |eta| > 5^2 |eta|
  for (int m = 4; m <= 10; ++m) {
    ms.push_back(m);
    vs.push_back(std::abs(symbol_md_tilde(2, std::ldexp(1.0, m), std::ldexp(1.0 / 32.0, m), q).value));
  }
  auto s = make_scan("nonstationary_tail", ms, vs, 1, seed, true);
  auto r = scan_report(s, {{"d", 2}, {"xi0", 1.0}, {"eta0", 1.0 / 32.0}, {"m_range", "4..10"}}, 0.0);
  r.checks.push_back(make_check("slope", s.slope, "<=", -3.0));
  return r;
}

// ---- 4: two evaluation paths of T_{j,m}
ScanReport two_path(std::uint64_t seed) {
  auto r = unfitted("two_path", {{"d", 2}, {"trials", 50}, {"pairs", "{+-2, +-6} x {4, 8}"}}, 1e-6);
  int idx = 0;
  for (int j : {-6, -2, 2, 6})
    for (int m : {4, 8}) {
      DyadicParams p;
      p.d = 2;
      p.j = j;
      p.m = m;
      Grid1D g = tjm_grid(p);
      double sx = std::ldexp(1.0, j + m), sy = std::ldexp(1.0, p.d * j + m);
      double worst = 0.0;
      for (int t = 0; t < 50; ++t) {
        auto f = random_bandlimited(g, Band{sx / 2, 2 * sx, true}, 1.0, stream(seed, 4, 2 * (idx * 50 + t)));
        auto h = random_bandlimited(g, Band{sy / 2, 2 * sy, true}, 1.0, stream(seed, 4, 2 * (idx * 50 + t) + 1));
        worst = std::max(worst, rel_l2(apply_Tjm_time(p, f, h, g), apply_Tjm_freq(p, f, h, g)));
      }
      r.axis.push_back(idx++);
      r.values.push_back(worst);
      r.params["cells"].push_back({{"j", j}, {"m", m}});
      r.checks.push_back(make_check("j=" + std::to_string(j) + " m=" + std::to_string(m) + " max rel L2", worst, "<",
                                    1e-6));
    }
  return r;
}

// ---- 5: restricted operator decay for small |j|
ScanReport bjm_small_j(std::uint64_t seed) {
  std::uint64_t s5 = stream(seed, 5);
  std::vector<double> ms, vs;
  for (int m = 4; m <= 12; ++m) {
    DyadicParams p;
    p.d = 2;
    p.j = 2;
    p.m = m;
    BjmSampler smp(p, 4.0);
    double best = 0.0;
    for (int t = 0; t < 200; ++t) best = std::max(best, smp.ratio(s5, t));
    ms.push_back(m);
    vs.push_back(best);
  }
  auto s = make_scan("bjm_small_j", ms, vs, 200, s5, true);
  auto r = scan_report(s, {{"d", 2}, {"j", 2}, {"m_range", "4..12"}, {"expected_slope", -0.125}}, 0.05);
  r.checks.push_back(make_check("slope", s.slope, "<=", -0.125 + 0.05));
  return r;
}

// ---- 6: restricted operator for large |j|
ScanReport bjm_large_j(std::uint64_t seed) {
  std::uint64_t s6 = stream(seed, 6);
  const int d = 2, m = 8;
  std::vector<double> js, vs, env;
  for (int j = 8; j <= 16; ++j) {
    DyadicParams p;
    p.d = d;
    p.j = j;
    p.m = m;
    BjmSampler smp(p, 4.0);
    double best = 0.0;
    for (int t = 0; t < 20; ++t) best = std::max(best, smp.ratio(s6, t));
    js.push_back(j);
    vs.push_back(best);
    env.push_back(std::max(std::exp2((m - (d - 1) * j) / 3.0), std::exp2(-m / 16.0)));
  }
  auto s = make_scan("bjm_large_j", js, vs, 20, s6, true);
  auto r = scan_report(s, {{"d", d}, {"m", m}, {"j_range", "8..16"}}, 0.0);
  // largest increase between consecutive |j|
  double rise = 0.0;
  for (std::size_t i = 1; i < vs.size(); ++i) rise = std::max(rise, vs[i] / vs[i - 1] - 1.0);
  r.checks.push_back(make_check("max relative increase in |j|", rise, "<=", 0.0));
  // envelope constant fixed at the first cell
  double C = vs.front() / env.front(), excess = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) excess = std::max(excess, vs[i] / (C * env[i]));
  r.params["envelope_constant"] = C;
  r.checks.push_back(make_check("max ratio / (C envelope)", excess, "<=", 1.0));
  return r;
}

// ---- 7: failure witness
ScanReport witness(std::uint64_t seed) {
  std::uint64_t s7 = stream(seed, 7);
  std::vector<double> ms, vs, cs;
  double lowest = 1e300;
  for (int m = 4; m <= 12; ++m) {
    double v = failure_witness(2, m).normalized;
    lowest = std::min(lowest, v);
    ms.push_back(m);
    vs.push_back(v);
    cs.push_back(failure_contrast(2, m, s7).normalized);
  }
  auto s = make_scan("failure_witness", ms, vs, 1, s7, true);
  auto c = make_scan("failure_contrast", ms, cs, 1, s7, true);
  auto r = scan_report(s, {{"d", 2}, {"m_range", "4..12"}}, 0.05);
  r.params["contrast_values"] = cs;
  r.params["contrast_slope"] = c.slope;
  r.checks.push_back(make_check("min normalized witness", lowest, ">=", 0.3));
  r.checks.push_back(make_check("witness |slope|", std::abs(s.slope), "<", 0.05));
  r.checks.push_back(make_check("random f1 slope", c.slope, "<=", -0.2));
  return r;
}

// ---- 8: counterexample sharpness
ScanReport counterexample(std::uint64_t seed) {
  (void)seed;
  auto roots = intersection_roots({2, 2, 1e4, 1e-6});
  auto a = sharpness_scan(2, 2, 1e4, 0.5, 1.0, 1.0, {5e-7, 2e-7, 1e-7, 5e-8, 2e-8, 1e-8});
  auto b = sharpness_scan(3, 3, 1e4, 2.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0, {3e-8, 1e-8, 3e-9, 1e-9, 3e-10, 1e-10});
  auto r = scan_report(a.scan, {{"A", 1e4}, {"d2_n2", {{"r", 0.5}, {"p", 1.0}, {"q", 1.0}}},
                                {"d3_n3", {{"r", 2.0 / 3.0}, {"p", 4.0 / 3.0}, {"q", 4.0 / 3.0}}}},
                       0.1);
  r.params["d3_n3"]["axis"] = b.scan.axis;
  r.params["d3_n3"]["values"] = b.scan.values;
  r.checks.push_back(make_check("t1 enclosure", roots.t1.holds() ? 1.0 : 0.0, ">=", 1.0));
  r.checks.push_back(make_check("t2 enclosure", roots.t2.holds() ? 1.0 : 0.0, ">=", 1.0));
  for (const auto* res : {&a, &b}) {
    std::string tag = res == &a ? "(2,2)" : "(3,3)";
    double margin = 1e300;
    bool conv = true;
    for (const auto& c : res->cells) {
      margin = std::min(margin, c.lhs / c.lower_bound);
      conv = conv && c.converged;
    }
    r.checks.push_back(make_check(tag + " exponent - (r + 1/n)", res->fitted_exponent - res->expected_exponent,
                                  "within", 0.1));
    r.checks.push_back(make_check(tag + " min lhs / lower bound", margin, ">=", 1.0));
    r.checks.push_back(make_check(tag + " converged", conv ? 1.0 : 0.0, ">=", 1.0));
  }
  return r;
}

// ---- 9: paraproduct coefficients and shift stability
ScanReport paraproduct_coeffs(std::uint64_t seed) {
  std::uint64_t s9 = stream(seed, 9);
  auto r = unfitted("paraproduct_coefficients", {{"d", 2}, {"m", 2}}, 4.0);
  double ref = fourier_coeffs_C1(2, 2, -4).max_abs(), worst = 0.0;
  for (int mp = -12; mp <= -4; mp += 2) {
    double v = fourier_coeffs_C1(2, 2, mp).max_abs();
    r.axis.push_back(mp);
    r.values.push_back(v);
    worst = std::max(worst, (v / ref) / std::exp2((mp + 4) / 2.0));
  }
  r.checks.push_back(make_check("max |C(m')| / |C(-4)| / 2^{(m'+4)/2}", worst, "<=", 4.0));

  auto g = fourier_coeffs_C1(2, 2, -10);
  double decay = std::abs(g.at(8, 8)) / std::abs(g.at(1, 1));
  r.params["C_8_8"] = std::abs(g.at(8, 8));
  r.params["C_1_1"] = std::abs(g.at(1, 1));
  r.checks.push_back(make_check("|C(8,8)| / |C(1,1)| at m' = -10", decay, "<", 1e-3));

  std::vector<double> ratios;
  json shifts = json::array();
  auto run = [&](int M1, int M2) {
    ParaparamSet p;
    p.M1 = M1;
    p.M2 = M2;
    p.j_lo = 0;
    p.j_hi = 2;
    ratios.push_back(paraproduct_max_ratio(p, s9, 20));
    shifts.push_back({{"M1", M1}, {"M2", M2}, {"max_ratio", ratios.back()}});
  };
  for (int M1 : {-10, -5, 0, 5, 10}) run(M1, 0);
  for (int M2 : {-10, 10}) run(0, M2);
  r.params["shifts"] = shifts;
  double lo = *std::min_element(ratios.begin(), ratios.end()), hi = *std::max_element(ratios.begin(), ratios.end());
  r.checks.push_back(make_check("max / min ratio over shifts", lo > 0.0 ? hi / lo : INFINITY, "<=", 2.0));
  return r;
}

// ---- 10: uniformity machinery
constexpr double kILo = 1.0 / 16.0, kIHi = 39.0 / 16.0;

}  // namespace

SampledSignal random_interval_signal(const Grid1D& I, std::uint64_t seed, double chirp) {
  Rng rng(seed);
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

namespace {

ScanReport uniformity(std::uint64_t seed) {
  auto r = unfitted("uniformity", {{"interval", {kILo, kIHi}}}, 1e-10);
  {
    Grid1D I = interval_grid(kILo, kIHi, 512);
    auto grid = FamilyGrid::standard(PhaseFamily::Q1, 2, 3, 6, 12);
    double rec = 0.0, pyth = 0.0;
    for (int t = 0; t < 50; ++t) {
      auto f = random_interval_signal(I, stream(seed, 10, t), 6.0);
      auto D = decompose(f, uniformity_deficit(f, grid).argmax);
      rec = std::max(rec, D.reconstruction_error);
      pyth = std::max(pyth, D.pythagoras_error);
    }
    r.checks.push_back(make_check("decomposition error", rec, "<", 1e-10));
    r.checks.push_back(make_check("Pythagoras error", pyth, "<", 1e-10));
  }
  {
    Grid1D I = interval_grid(kILo, kIHi, 256);
    auto grid = FamilyGrid::standard(PhaseFamily::Q1, 2, 2, 4, 8);
    double excess = -INFINITY;
    for (int t = 0; t < 1000; ++t) {
      auto f = random_interval_signal(I, stream(seed, 10, 1000 + 2 * t), 3.0);
      auto h = random_interval_signal(I, stream(seed, 10, 1001 + 2 * t), 3.0);
      auto q = uniformity_deficit(f, grid).argmax;
      double rhs = proof_level_bound(f, h, q);
      excess = std::max(excess, (std::abs(inner_I(f, h)) - rhs) / std::max(1.0, rhs));
    }
    r.params["proof_level_trials"] = 1000;
    r.checks.push_back(make_check("proof-level (lhs - rhs) / max(1, rhs)", excess, "<=", 1e-9));
  }
  {
    Grid1D I = interval_grid(kILo, kIHi, 2048);
    std::vector<double> probes;
    for (int i = 0; i < 40; ++i) probes.push_back(0.5 + 1.5 * i / 39.0);
    double mismatch = 0.0, excess = -INFINITY;
    for (auto side : {MultiplierSide::positive_j, MultiplierSide::negative_j})
      for (int t = 1; t <= 10; ++t) {
        MultiplierSpec s{2 + t % 2, side == MultiplierSide::positive_j ? 2 : -2, 4, long(t), side};
        Rng rng(stream(seed, 10, 5000 + t + (side == MultiplierSide::positive_j ? 0 : 100)));
        cvec c(7);
        for (auto& z : c) z = rng.complex_normal();
        auto f = sample_function(
            I,
            [&](double x) {
              cplx v = 0.0;
              for (int k = 0; k < 7; ++k) v += c[std::size_t(k)] * std::polar(1.0, kTwoPi * (k - 3) * x / 2.375);
              return v;
            },
            Band::full(I));
        auto m = multiplier_mdjm(s, f, probes);
        auto fw = multiplier_input(f);
        auto grid = FamilyGrid::standard(side == MultiplierSide::positive_j ? PhaseFamily::Q1 : PhaseFamily::Q2, s.d,
                                         s.m, 4, 8);
        for (double e : probes) grid.inject(multiplier_probe_point(s, e));
        auto rep = uniformity_deficit(fw, grid);
        double sup = 0.0;
        for (std::size_t i = 0; i < probes.size(); ++i) {
          sup = std::max(sup, std::abs(m[i]));
          mismatch = std::max(mismatch, std::abs(m[i] - pair_with_phase(fw, multiplier_probe_point(s, probes[i]))));
        }
        excess = std::max(excess, sup - rep.deficit * std::sqrt(I.period()) * norm_I(fw));
      }
    r.checks.push_back(make_check("multiplier vs injected pairing", mismatch, "<", 1e-10));
    r.checks.push_back(make_check("sup |m| - deficit |I|^{1/2} ||f||", excess, "<=", 1e-9));
  }
  return r;
}

// ---- 11: van der Corput rates
ScanReport vdc_rates(std::uint64_t seed) {
  std::uint64_t s11 = stream(seed, 11);
  auto phase = VdcPhase::generic([](double x, double y) { return 0.5 * x * x * y; }, 2);
  auto two_d = osc_form_scan(phase, {0, 1}, {0, 1}, 4, 12);
  auto a = form_decay_scan(VdcVariant::interval_I, 2, 4, 12, 3, s11);
  auto b = form_decay_scan(VdcVariant::neg, 2, 4, 12, 3, s11);
  auto r = scan_report(two_d, {{"model_phase", "x^2 y / 2"}, {"k_range", "4..12"}}, 0.06);
  r.params["interval_form"] = {{"values", a.values}, {"slope", a.slope}};
  r.params["neg_form"] = {{"values", b.values}, {"slope", b.slope}};
  r.checks.push_back(make_check("D(2) - 1/4", dexp(2) - 0.25, "within", 0.0));
  r.checks.push_back(make_check("D(3) - 1/6", dexp(3) - 1.0 / 6.0, "within", 0.0));
  r.checks.push_back(make_check("2D form slope", two_d.slope, "<=", -0.2));
  r.checks.push_back(make_check("interval form slope", a.slope, "<=", -dexp(1) / 2.0 + 0.06));
  r.checks.push_back(make_check("negative-j form slope", b.slope, "<=", -0.25 + 0.06));
  return r;
}

}  // namespace

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> list{
      {1, "partition of unity"},      {2, "stationary-phase rate"},    {3, "nonstationary tail"},
      {4, "two-path equality"},       {5, "B_jm decay, small |j|"},    {6, "B_jm shape, large |j|"},
      {7, "failure witness"},         {8, "counterexample sharpness"}, {9, "paraproduct coefficients"},
      {10, "uniformity machinery"},   {11, "van der Corput rates"}};
  return list;
}

ScanReport run_criterion(int id, std::uint64_t seed) {
  switch (id) {
    case 1: return partition_of_unity(seed);
    case 2: return stationary_rate(seed);
    case 3: return nonstationary_tail(seed);
    case 4: return two_path(seed);
    case 5: return bjm_small_j(seed);
    case 6: return bjm_large_j(seed);
    case 7: return witness(seed);
    case 8: return counterexample(seed);
    case 9: return paraproduct_coeffs(seed);
    case 10: return uniformity(seed);
    case 11: return vdc_rates(seed);
    default: throw std::out_of_range("no criterion " + std::to_string(id));
  }
}

json run_all_criteria(std::uint64_t seed, std::vector<ScanReport>* reports) {
  json out;
  out["seed"] = seed;
  out["reports"] = json::array();
  bool pass = true;
  for (const auto& c : criteria()) {
    auto r = run_criterion(c.id, seed);
    json j = r.to_json();
    j["criterion"] = c.id;
    j["name"] = c.name;
    out["reports"].push_back(j);
    pass = pass && r.pass();
    if (reports) reports->push_back(std::move(r));
  }
  out["pass"] = pass;
  return out;
}

}  // namespace bht
