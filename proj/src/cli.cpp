#include "bht/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "bht/bumps.hpp"
#include "bht/criteria.hpp"
#include "bht/harness.hpp"
#include "bht/operators.hpp"
#include "bht/oscsym.hpp"
#include "bht/paraproducts.hpp"
#include "bht/report.hpp"
#include "bht/sharpness.hpp"
#include "bht/trilinear.hpp"
#include "bht/uniformity.hpp"
#include "bht/vandercorput.hpp"

namespace bht {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void RunConfig::validate() const {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  if (m.first > m.second || j.first > j.second || k.first > k.second)
    throw std::invalid_argument("ranges must be ascending");
  if (m.second > 14) throw std::invalid_argument("m is capped at 14");
  if (std::max(std::abs(j.first), std::abs(j.second)) > 20) throw std::invalid_argument("|j| is capped at 20");
  if (k.second > 20) throw std::invalid_argument("log2 lambda is capped at 20");
  if (trials < 0) throw std::invalid_argument("trials must be >= 0");
  if (!power_of_two(samples)) throw std::invalid_argument("samples must be a power of two");
  if (emit_svg && out_dir.empty()) throw std::invalid_argument("--emit svg needs --out");
}

std::pair<int, int> parse_range(const std::string& s) {
  auto pos = s.find("..");
  auto to_int = [&](const std::string& t) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad range: " + s);
    }
    if (used != t.size()) throw std::invalid_argument("bad range: " + s);
    return v;
  };
  if (pos == std::string::npos) {
    int v = to_int(trim(s));
    return {v, v};
  }
  auto r = std::pair{to_int(trim(s.substr(0, pos))), to_int(trim(s.substr(pos + 2)))};
  if (r.first > r.second) throw std::invalid_argument("descending range: " + s);
  return r;
}

std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number: " + item);
    }
    if (used != item.size()) throw std::invalid_argument("bad number: " + item);
    out.push_back(v);
  }
  return out;
}

void parse_emit(const std::string& s, RunConfig& cfg) {
  cfg.emit_csv = cfg.emit_json = cfg.emit_svg = false;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item == "csv") cfg.emit_csv = true;
    else if (item == "json") cfg.emit_json = true;
    else if (item == "svg") cfg.emit_svg = true;
    else throw std::invalid_argument("unknown --emit format: " + item);
  }
}

std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

namespace {

// everything a subcommand produces
struct Artifacts {
  std::string stem;
  std::optional<CsvTable> csv;
  json summary = json::object();
  std::optional<DecayScanResult> scan;
  std::vector<Check> checks;
  bool converged = true;
};

// raw option strings, converted into RunConfig after parsing
struct Raw {
  std::string j = "0", m = "4", k = "4..12", deltas, emit = "csv,json", config;
};

struct Extra {
  // bumps
  std::string kind = "theta";
  double from = -3.0, to = 3.0;
  int m0 = 0;
  // symbol
  double xi = -2.0, eta = 1.1;
  bool tilde = false;
  double quad_tol = 1e-13;
  int max_refine = 10;
  // op
  std::string which = "Bjm";
  double base = 4.0;
  // paraproduct
  std::string scan = "shifts";
  int m_prime = -10, n_box = 16, M1 = 0, M2 = 0, j_lo = 0, j_hi = 2;
  long n1 = 0, n2 = 0;
  // trilinear
  std::string form = "lambda";
  // uniformity
  bool deficit = false, certificate = false;
  std::string family = "Q1";
  int na = 8, nb = 16;
  double sigma = 0.5, chirp = 3.0;
  // vdc
  std::string vdc_form = "plane";
  // counterexample
  int n = 2;
  double A = 1e4, r = 0.5, p = 0.0, q = 0.0;
  // report
  bool all = false;
  std::vector<std::string> csv_inputs;
};

std::string fmt(double v) { return format_double(v); }

// status lines only
std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void add_check(Artifacts& a, const std::string& name, double value, const std::string& rel, double thr) {
  a.checks.push_back(make_check(name, value, rel, thr));
}

DecayScanResult fitted_scan(const std::string& name, const std::vector<double>& axis, const std::vector<double>& values,
                            int trials, std::uint64_t seed) {
  DecayScanResult s;
  s.scan = name;
  s.axis = axis;
  s.values = values;
  s.trials_per_cell = trials;
  s.seed = seed;
  bool positive = std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; });
  if (axis.size() >= 4 && positive) s.fit();
  return s;
}

bool has_fit(const DecayScanResult& s) {
  return s.axis.size() >= 4 && std::all_of(s.values.begin(), s.values.end(), [](double v) { return v > 0.0; });
}

void put_fit(Artifacts& a, const DecayScanResult& s) {
  if (has_fit(s)) {
    a.summary["fitted_slope"] = s.slope;
    a.summary["r2"] = s.r2_defined ? json(s.r2) : json(nullptr);
  } else {
    a.summary["fitted_slope"] = nullptr;
    a.summary["r2"] = nullptr;
  }
}

// ---- subcommands

Artifacts cmd_bumps(const RunConfig& c, const Extra& e) {
  BumpSpec spec;
  spec.kind = parse_bump_kind(e.kind);
  spec.m0 = e.m0;
  if (!(e.to > e.from)) throw std::invalid_argument("bumps: needs --to > --from");
  Artifacts a;
  a.stem = "bumps";
  a.csv = CsvTable({"x", "value"});
  for (std::size_t i = 0; i < c.samples; ++i) {
    double x = e.from + (e.to - e.from) * double(i) / double(c.samples - 1);
    a.csv->add_row({fmt(x), fmt(eval_bump(spec, x))});
  }
  a.summary = {{"kind", bump_kind_name(spec.kind)}, {"samples", c.samples}};
  return a;
}

Artifacts cmd_symbol(const RunConfig& c, const Extra& e) {
  OscQuadSpec q;
  q.tol = e.quad_tol;
  q.max_refine = e.max_refine;
  Artifacts a;
  a.stem = "symbol";
  a.csv = CsvTable({"m", "re", "im", "abs", "est_error"});
  std::vector<double> ms, vs;
  for (int m = c.m.first; m <= c.m.second; ++m) {
    double xi = std::ldexp(e.xi, m), eta = std::ldexp(e.eta, m);
    auto v = e.tilde ? symbol_md_tilde(c.d, xi, eta, q) : symbol_md(c.d, xi, eta, q);
    a.converged = a.converged && v.converged;
    a.csv->add_row({std::to_string(m), fmt(v.value.real()), fmt(v.value.imag()), fmt(std::abs(v.value)),
                    fmt(v.est_error)});
    ms.push_back(m);
    vs.push_back(std::abs(v.value));
  }
  auto s = fitted_scan(e.tilde ? "symbol_tilde" : "symbol", ms, vs, 1, c.seed);
  bool stationary = !critical_points_in_support(c.d, e.xi, e.eta).empty();
  bool separated = std::abs(e.xi) > std::pow(5.0, c.d) * std::abs(e.eta);
  a.summary = {{"d", c.d}, {"xi0", e.xi}, {"eta0", e.eta}, {"tilde", e.tilde}, {"stationary", stationary}};
  put_fit(a, s);
  if (has_fit(s)) {
    if (stationary && !e.tilde) add_check(a, "stationary rate |slope + 1/2|", s.slope + 0.5, "within", c.tol);
    if (separated) add_check(a, "nonstationary slope", s.slope, "<=", -3.0);
  }
  a.scan = s;
  return a;
}

double ratio_of(const SampledSignal& out, const SampledSignal& f, const SampledSignal& g) {
  double den = l2_norm(f) * l2_norm(g);
  return den > 0.0 ? lp_norm(out, 1.0) / den : 0.0;
}

Artifacts cmd_op(const RunConfig& c, const Extra& e) {
  static const std::vector<std::string> kinds{"Tjm", "Bjm", "TGammaj", "TP"};
  if (std::find(kinds.begin(), kinds.end(), e.which) == kinds.end())
    throw std::invalid_argument("op: --which must be one of Tjm, Bjm, TGammaj, TP");
  Artifacts a;
  a.stem = "op_" + e.which;
  a.csv = CsvTable({"j", "m", "trial", "ratio"});
  std::vector<double> ms, best_by_m;
  double max_ratio = 0.0;
  for (int m = c.m.first; m <= c.m.second; ++m) {
    double best_m = 0.0;
    for (int j = c.j.first; j <= c.j.second; ++j) {
      DyadicParams p;
      p.d = c.d;
      p.j = j;
      p.m = m;
      p.L = c.L;
      std::vector<double> ratios(std::size_t(c.trials), 0.0);
      auto key = [&](int t, int slot) { return Rng::keyed(c.seed, {j, m, t, slot}).next_u64(); };
      if (e.which == "Bjm") {
        BjmSampler s(p, e.base);
        for (int t = 0; t < c.trials; ++t) ratios[std::size_t(t)] = s.ratio(c.seed, t);
      } else if (e.which == "Tjm") {
        Grid1D g = tjm_grid(p);
        double sx = std::ldexp(1.0, j + m), sy = std::ldexp(1.0, c.d * j + m);
        for (int t = 0; t < c.trials; ++t) {
          auto f = random_bandlimited(g, Band{sx / 2, 2 * sx, true}, 1.0, key(t, 0));
          auto h = random_bandlimited(g, Band{sy / 2, 2 * sy, true}, 1.0, key(t, 1));
          ratios[std::size_t(t)] = ratio_of(apply_Tjm_freq(p, f, h, g), f, h);
        }
      } else {
        Grid1D g = make_grid(0.0, 16.0, c.samples);
        Band band{0.5, std::min(2.0, 0.4 * g.nyquist()), true};
        for (int t = 0; t < c.trials; ++t) {
          auto f = random_bandlimited(g, band, 1.0, key(t, 0));
          auto h = random_bandlimited(g, band, 1.0, key(t, 1));
          auto out = e.which == "TGammaj" ? apply_TGammaj(p, f, h, g)
                                          : apply_TP(PolynomialSpec::monomial(c.d), f, h, g, Localization{j, 1.0});
          ratios[std::size_t(t)] = ratio_of(out, f, h);
        }
      }
      for (int t = 0; t < c.trials; ++t) {
        double v = ratios[std::size_t(t)];
        a.csv->add_row({std::to_string(j), std::to_string(m), std::to_string(t), fmt(v)});
        best_m = std::max(best_m, v);
      }
    }
    ms.push_back(m);
    best_by_m.push_back(best_m);
    max_ratio = std::max(max_ratio, best_m);
  }
  auto s = fitted_scan("op_" + e.which, ms, best_by_m, c.trials, c.seed);
  a.summary = {{"which", e.which}, {"max_ratio", max_ratio}};
  put_fit(a, s);
  bool small_j = (c.d - 1) * std::max(std::abs(c.j.first), std::abs(c.j.second)) <= c.m.first;
  if (e.which == "Bjm" && has_fit(s) && small_j) add_check(a, "B_jm slope in m", s.slope, "<=", -0.125 + c.tol);
  a.scan = s;
  return a;
}

Artifacts cmd_paraproduct(const RunConfig& c, const Extra& e) {
  Artifacts a;
  if (e.scan == "shifts") {
    a.stem = "paraproduct_shifts";
    a.csv = CsvTable({"M1", "M2", "max_ratio"});
    std::vector<double> r;
    auto run = [&](int M1, int M2) {
      ParaparamSet p;
      p.L1 = p.L2 = 1;
      p.M1 = M1;
      p.M2 = M2;
      p.n1 = e.n1;
      p.n2 = e.n2;
      p.j_lo = e.j_lo;
      p.j_hi = e.j_hi;
      p.validate();
      r.push_back(paraproduct_max_ratio(p, c.seed, c.trials));
      a.csv->add_row({std::to_string(M1), std::to_string(M2), fmt(r.back())});
    };
    for (int M1 : {-10, -5, 0, 5, 10}) run(M1, e.M2);
    for (int M2 : {-10, 10}) run(e.M1, M2);
    double lo = *std::min_element(r.begin(), r.end()), hi = *std::max_element(r.begin(), r.end());
    a.summary = {{"min_ratio", lo}, {"max_ratio", hi}};
    add_check(a, "shift stability max / min", lo > 0.0 ? hi / lo : INFINITY, "<=", 2.0);
  } else if (e.scan == "coeffs") {
    a.stem = "paraproduct_coeffs";
    if (c.m.first != c.m.second) throw std::invalid_argument("paraproduct coeffs: --m takes a single value");
    auto g = fourier_coeffs_C1(c.d, c.m.first, e.m_prime, e.n_box);
    a.csv = CsvTable({"n1", "n2", "re", "im", "abs"});
    for (long n1 = -e.n_box; n1 <= e.n_box; ++n1)
      for (long n2 = -e.n_box; n2 <= e.n_box; ++n2) {
        cplx v = g.at(n1, n2);
        a.csv->add_row({std::to_string(n1), std::to_string(n2), fmt(v.real()), fmt(v.imag()), fmt(std::abs(v))});
      }
    a.summary = {{"d", c.d},           {"m", c.m.first},
                 {"m_prime", e.m_prime}, {"max_abs", g.max_abs()},
                 {"total_energy", g.total_energy}, {"tail_energy", g.tail_energy}};
  } else {
    throw std::invalid_argument("paraproduct: --scan must be shifts or coeffs");
  }
  return a;
}

Artifacts cmd_trilinear(const RunConfig& c, const Extra& e) {
  Artifacts a;
  a.stem = "trilinear_" + e.form;
  a.csv = CsvTable({"j", "m", "trial", "normalized"});
  std::vector<double> ms, best;
  int j = c.j.first;
  if (c.j.first != c.j.second) throw std::invalid_argument("trilinear: --j takes a single value");
  std::vector<double> witness;
  for (int m = c.m.first; m <= c.m.second; ++m) {
    DyadicParams p;
    p.d = c.d;
    p.j = j;
    p.m = m;
    p.L = c.L;
    double b = 0.0;
    auto row = [&](int t, double v) {
      a.csv->add_row({std::to_string(j), std::to_string(m), std::to_string(t), fmt(v)});
      b = std::max(b, v);
    };
    if (e.form == "lambda") {
      for (int t = 0; t < c.trials; ++t) row(t, lambda_trial(p, t, c.seed).normalized);
    } else if (e.form == "lambda_star") {
      for (int t = 0; t < c.trials; ++t) {
        std::uint64_t s = Rng::keyed(c.seed, {m, t}).next_u64();
        row(t, lambda_star_jm(p, random_window_signal(s, 0), random_window_signal(s, 1), random_window_signal(s, 2))
                   .normalized);
      }
    } else if (e.form == "failure") {
      double w = failure_witness(c.d, m).normalized;
      witness.push_back(w);
      // trial rows: the matched witness first, then random f1 contrasts
      row(0, w);
      for (int t = 1; t < c.trials; ++t) row(t, failure_contrast(c.d, m, Rng::keyed(c.seed, {t}).next_u64()).normalized);
      b = w;
    } else {
      throw std::invalid_argument("trilinear: --form must be lambda, lambda_star or failure");
    }
    ms.push_back(m);
    best.push_back(b);
  }
  auto s = fitted_scan(a.stem, ms, best, c.trials, c.seed);
  a.summary = {{"form", e.form}, {"d", c.d}, {"j", j}};
  put_fit(a, s);
  if (e.form == "failure") {
    add_check(a, "min normalized witness", *std::min_element(witness.begin(), witness.end()), ">=", 0.3);
    if (has_fit(s)) add_check(a, "witness |slope|", std::abs(s.slope), "<", c.tol);
    if (c.trials >= 2 && ms.size() >= 4) {
      std::vector<double> cs;
      for (int m = c.m.first; m <= c.m.second; ++m)
        cs.push_back(failure_contrast(c.d, m, Rng::keyed(c.seed, {1}).next_u64()).normalized);
      double cslope = fit_slope(ms, cs).slope;
      a.summary["contrast_slope"] = cslope;
      add_check(a, "random f1 slope", cslope, "<=", -0.2);
    }
  }
  a.scan = s;
  return a;
}

Artifacts cmd_uniformity(const RunConfig& c, const Extra& e) {
  if (e.deficit == e.certificate) throw std::invalid_argument("uniformity: pass exactly one of --deficit, --certificate");
  PhaseFamily fam;
  if (e.family == "Q1") fam = PhaseFamily::Q1;
  else if (e.family == "Q2") fam = PhaseFamily::Q2;
  else throw std::invalid_argument("uniformity: --family must be Q1 or Q2");
  if (c.m.first != c.m.second) throw std::invalid_argument("uniformity: --m takes a single value");
  Grid1D I = interval_grid(1.0 / 16.0, 39.0 / 16.0, c.samples);
  auto grid = FamilyGrid::standard(fam, c.d, c.m.first, e.na, e.nb);
  json gj = {{"family", e.family}, {"d", c.d}, {"m", c.m.first}, {"na", e.na}, {"nb", e.nb}, {"size", grid.points.size()}};
  Artifacts a;
  if (e.deficit) {
    a.stem = "uniformity_deficit";
    auto f = random_interval_signal(I, c.seed, e.chirp);
    auto rep = uniformity_deficit(f, grid);
    auto D = decompose(f, rep.argmax);
    a.summary = {{"deficit", rep.deficit}, {"a", rep.argmax.a}, {"b", rep.argmax.b}, {"grid", gj},
                 {"reconstruction_error", D.reconstruction_error}, {"pythagoras_error", D.pythagoras_error}};
    add_check(a, "decomposition error", D.reconstruction_error, "<", 1e-10);
    add_check(a, "Pythagoras error", D.pythagoras_error, "<", 1e-10);
  } else {
    a.stem = "uniformity_certificate";
    auto h = random_interval_signal(I, c.seed, e.chirp);
    std::vector<SampledSignal> corpus;
    for (int t = 0; t < c.trials; ++t)
      corpus.push_back(random_interval_signal(I, Rng::keyed(c.seed, {t + 1}).next_u64(), e.chirp));
    auto cert = certificate_bound(h, e.sigma, grid, corpus);
    auto rep = uniformity_deficit(h, grid);
    a.summary = {{"deficit", rep.deficit}, {"a", rep.argmax.a},       {"b", rep.argmax.b},
                 {"grid", gj},             {"sigma", e.sigma},        {"bound", cert.bound},
                 {"u_est", cert.u_est},    {"q_grid", cert.q_grid},   {"uniform_members", cert.uniform_members}};
  }
  return a;
}

Artifacts cmd_vdc(const RunConfig& c, const Extra& e) {
  Artifacts a;
  DecayScanResult s;
  if (e.vdc_form == "plane") {
    auto phase = VdcPhase::generic([](double x, double y) { return 0.5 * x * x * y; }, 2);
    s = osc_form_scan(phase, {0, 1}, {0, 1}, c.k.first, c.k.second);
    a.summary = {{"form", e.vdc_form}, {"model_phase", "x^2 y / 2"}};
    if (has_fit(s)) add_check(a, "2D form slope", s.slope, "<=", -0.2);
  } else if (e.vdc_form == "interval" || e.vdc_form == "negative") {
    bool neg = e.vdc_form == "negative";
    s = form_decay_scan(neg ? VdcVariant::neg : VdcVariant::interval_I, c.d, c.m.first, c.m.second,
                        std::max(1, c.trials), c.seed);
    a.summary = {{"form", e.vdc_form}, {"d", c.d}};
    double expected = neg ? -0.25 : -dexp(c.d - 1) * (c.d - 1) / 2.0;
    a.summary["expected_slope"] = expected;
    if (has_fit(s)) add_check(a, "form slope", s.slope, "<=", expected + c.tol);
  } else {
    throw std::invalid_argument("vdc: --form must be plane, interval or negative");
  }
  a.stem = "vdc_" + e.vdc_form;
  a.csv = CsvTable({"axis", "value"});
  for (std::size_t i = 0; i < s.axis.size(); ++i) a.csv->add_row({fmt(s.axis[i]), fmt(s.values[i])});
  put_fit(a, s);
  a.scan = s;
  return a;
}

Artifacts cmd_counterexample(const RunConfig& c, const Extra& e) {
  if (c.deltas.empty()) throw std::invalid_argument("counterexample: --deltas is required");
  double p = e.p > 0.0 ? e.p : 2.0 * e.r, q = e.q > 0.0 ? e.q : 2.0 * e.r;
  auto res = sharpness_scan(c.d, e.n, e.A, e.r, p, q, c.deltas);
  Artifacts a;
  a.stem = "counterexample";
  a.csv = CsvTable({"delta", "lhs", "lower_bound", "fp_norm", "gq_norm"});
  for (const auto& cell : res.cells) {
    a.csv->add_row({fmt(cell.delta), fmt(cell.lhs), fmt(cell.lower_bound), fmt(cell.fp_norm), fmt(cell.gq_norm)});
    a.converged = a.converged && cell.converged;
  }
  a.summary = {{"fitted_exponent", res.fitted_exponent}, {"expected_exponent", res.expected_exponent},
               {"passes", res.passes}};
  add_check(a, "exponent - (r + 1/n)", res.fitted_exponent - res.expected_exponent, "within", 0.1);
  double margin = INFINITY;
  for (const auto& cell : res.cells) margin = std::min(margin, cell.lhs / cell.lower_bound);
  add_check(a, "min lhs / lower bound", margin, ">=", 1.0);
  a.scan = res.scan;
  return a;
}

json aggregate_csv(const std::vector<std::string>& paths) {
  json tables = json::array();
  for (const auto& path : paths) {
    auto t = CsvTable::parse(read_file(path));
    json cols = json::object();
    for (std::size_t k = 0; k < t.header().size(); ++k) {
      double lo = INFINITY, hi = -INFINITY;
      bool numeric = !t.rows().empty();
      for (const auto& row : t.rows()) {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(row[k], &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != row[k].size()) {
          numeric = false;
          break;
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      cols[t.header()[k]] = numeric ? json{{"min", lo}, {"max", hi}} : json(nullptr);
    }
    tables.push_back({{"path", path}, {"columns", t.header()}, {"rows", t.rows().size()}, {"numeric", cols}});
  }
  return {{"tables", tables}};
}

Artifacts cmd_report(const RunConfig& c, const Extra& e) {
  Artifacts a;
  a.stem = "report";
  if (e.all == !e.csv_inputs.empty()) throw std::invalid_argument("report: pass exactly one of --all, --csv");
  if (e.all) {
    std::vector<ScanReport> reports;
    a.summary = run_all_criteria(c.seed, &reports);
    for (const auto& r : reports)
      add_check(a, "report " + r.scan, r.pass() ? 1.0 : 0.0, ">=", 1.0);
  } else {
    a.summary = aggregate_csv(e.csv_inputs);
  }
  return a;
}

// ---- output

int finish(const Artifacts& a, const RunConfig& c, bool json_primary, std::ostream& out, std::ostream& err) {
  std::string json_text = a.summary.dump(2) + "\n";
  if (c.out_dir.empty()) {
    if (a.csv && c.emit_csv && !json_primary) {
      out << a.csv->str();
      if (c.emit_json) err << "summary " << a.summary.dump() << "\n";
    } else if (c.emit_json || json_primary) {
      out << json_text;
    }
  } else {
    std::filesystem::create_directories(c.out_dir);
    auto path = [&](const char* ext) { return (std::filesystem::path(c.out_dir) / (a.stem + ext)).string(); };
    if (a.csv && c.emit_csv) write_file_atomic(path(".csv"), a.csv->str());
    if (c.emit_json || json_primary) write_file_atomic(path(".json"), json_text);
    if (c.emit_svg) {
      if (!a.scan) throw std::invalid_argument("--emit svg: this subcommand produces no scan");
      emit_svg(*a.scan, path(".svg"));
    }
  }
  bool ok = true;
  for (const auto& ch : a.checks) {
    err << (ch.pass ? "PASS " : "FAIL ") << a.stem << ": " << ch.name << " = " << short_num(ch.value) << " "
        << ch.relation << " " << short_num(ch.threshold) << "\n";
    ok = ok && ch.pass;
  }
  if (!a.converged) {
    err << "FAIL " << a.stem << ": quadrature did not converge\n";
    return kExitNonConvergence;
  }
  return ok ? kExitPass : kExitAssertion;
}

void add_common(CLI::App* sub, RunConfig& c, Raw& raw) {
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--trials", c.trials, "trials per cell");
  sub->add_option("--out", c.out_dir, "output directory (default: stdout)");
  sub->add_option("--emit", raw.emit, "comma list of csv, json, svg");
  sub->add_option("--tol", c.tol, "slope tolerance");
  sub->add_option("--config", raw.config, "key=value config file (default ./bht.conf when present)");
}

bool user_passed(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  Raw raw;
  Extra e;
  CLI::App app{"bht: numerical checks for bilinear Hilbert transforms along curves", "bht"};
  app.require_subcommand(1);

  auto* bumps = app.add_subcommand("bumps", "sample a bump function");
  bumps->add_option("--kind", e.kind, "theta, phi_hat, phi_m0_hat, rho, rho0, rho1, phi1_hat, phi2_hat, mollifier_phi");
  bumps->add_option("--from", e.from);
  bumps->add_option("--to", e.to);
  bumps->add_option("--samples", c.samples);
  bumps->add_option("--m0", e.m0);

  auto* symbol = app.add_subcommand("symbol", "m_d(2^m xi, 2^m eta) over a range of m");
  symbol->add_option("--d", c.d);
  symbol->add_option("--m", raw.m, "A..B");
  symbol->add_option("--xi", e.xi);
  symbol->add_option("--eta", e.eta);
  symbol->add_flag("--tilde", e.tilde, "subtract the eta = 0 part");
  symbol->add_option("--quad-tol", e.quad_tol, "absolute quadrature tolerance");
  symbol->add_option("--max-refine", e.max_refine, "panel doublings before giving up");

  auto* op = app.add_subcommand("op", "randomized ratios of the single-scale operators");
  op->add_option("--which", e.which, "Tjm, Bjm, TGammaj or TP");
  op->add_option("--d", c.d);
  op->add_option("--j", raw.j, "J or A..B");
  op->add_option("--m", raw.m, "M or A..B");
  op->add_option("--L", c.L);
  op->add_option("--base", e.base);
  op->add_option("--samples", c.samples);

  auto* para = app.add_subcommand("paraproduct", "paraproduct shift scan or C1 coefficients");
  para->add_option("--scan", e.scan, "shifts or coeffs");
  para->add_option("--d", c.d);
  para->add_option("--m", raw.m);
  para->add_option("--m-prime", e.m_prime);
  para->add_option("--n-box", e.n_box);
  para->add_option("--M1", e.M1);
  para->add_option("--M2", e.M2);
  para->add_option("--n1", e.n1);
  para->add_option("--n2", e.n2);
  para->add_option("--j-lo", e.j_lo);
  para->add_option("--j-hi", e.j_hi);

  auto* tri = app.add_subcommand("trilinear", "trilinear form scans");
  tri->add_option("--form", e.form, "lambda, lambda_star or failure");
  tri->add_option("--d", c.d);
  tri->add_option("--j", raw.j);
  tri->add_option("--m-range", raw.m, "A..B");
  tri->add_option("--L", c.L);

  auto* uni = app.add_subcommand("uniformity", "uniformity deficit or certificate bound");
  uni->add_flag("--deficit", e.deficit);
  uni->add_flag("--certificate", e.certificate);
  uni->add_option("--family", e.family, "Q1 or Q2");
  uni->add_option("--d", c.d);
  uni->add_option("--m", raw.m);
  uni->add_option("--na", e.na);
  uni->add_option("--nb", e.nb);
  uni->add_option("--sigma", e.sigma);
  uni->add_option("--chirp", e.chirp);
  uni->add_option("--samples", c.samples);

  auto* vdc = app.add_subcommand("vdc", "oscillatory form decay scans");
  vdc->add_option("--form", e.vdc_form,
                  "plane: x^2 y / 2 over the unit square, range is log2 lambda; interval, negative: dyadic forms, "
                  "range is m");
  vdc->add_option("--d", c.d);
  vdc->add_option("--range", raw.k, "A..B");

  auto* cex = app.add_subcommand("counterexample", "sharpness scan over delta");
  cex->add_option("--d", c.d);
  cex->add_option("--n", e.n);
  cex->add_option("--A", e.A);
  cex->add_option("--r", e.r);
  cex->add_option("--p", e.p, "default 2r");
  cex->add_option("--q", e.q, "default 2r");
  cex->add_option("--deltas", raw.deltas, "comma list");

  auto* rep = app.add_subcommand("report", "aggregate acceptance JSON or emitted CSVs");
  rep->add_flag("--all", e.all, "run every in-process acceptance criterion");
  rep->add_option("--csv", e.csv_inputs, "CSV files to aggregate");

  for (auto* sub : {bumps, symbol, op, para, tri, uni, vdc, cex, rep}) add_common(sub, c, raw);

  try {
    std::vector<std::string> argv = args;
    // config injection: flag > config file > default
    if (!argv.empty() && argv[0].rfind("-", 0) != 0) {
      CLI::App* sub = nullptr;
      try {
        sub = app.get_subcommand(argv[0]);
      } catch (const CLI::OptionNotFound&) {
      }
      std::string cfg_path;
      for (std::size_t i = 1; i < argv.size(); ++i) {
        if (argv[i] == "--config" && i + 1 < argv.size()) cfg_path = argv[i + 1];
        else if (argv[i].rfind("--config=", 0) == 0) cfg_path = argv[i].substr(9);
      }
      bool explicit_cfg = !cfg_path.empty();
      if (!explicit_cfg && std::filesystem::exists("bht.conf")) cfg_path = "bht.conf";
      if (sub && !cfg_path.empty()) {
        if (explicit_cfg && !std::filesystem::exists(cfg_path)) throw std::invalid_argument("no config " + cfg_path);
        for (const auto& [key, value] : parse_config(read_file(cfg_path))) {
          std::string flag = "--" + key;
          if (key == "config" || !sub->get_option_no_throw(flag) || user_passed(argv, flag)) continue;
          argv.push_back(flag + "=" + value);
        }
      }
    }
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::CallForHelp& ex) {
    app.exit(ex, out, err);
    return kExitPass;
  } catch (const CLI::CallForAllHelp& ex) {
    app.exit(ex, out, err);
    return kExitPass;
  } catch (const CLI::ParseError& ex) {
    app.exit(ex, err, err);
    err << app.help();
    return kExitBadArgs;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitBadArgs;
  }

  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    c.j = parse_range(raw.j);
    c.m = parse_range(raw.m);
    c.k = parse_range(raw.k);
    if (!raw.deltas.empty()) c.deltas = parse_real_list(raw.deltas);
    parse_emit(raw.emit, c);
    if (name == "vdc" && e.vdc_form != "plane") c.m = c.k;
    c.validate();
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitBadArgs;
  }

  using Handler = std::function<Artifacts(const RunConfig&, const Extra&)>;
  static const std::vector<std::pair<std::string, Handler>> handlers{
      {"bumps", cmd_bumps},   {"symbol", cmd_symbol},         {"op", cmd_op},
      {"paraproduct", cmd_paraproduct}, {"trilinear", cmd_trilinear}, {"uniformity", cmd_uniformity},
      {"vdc", cmd_vdc},       {"counterexample", cmd_counterexample}, {"report", cmd_report}};
  try {
    for (const auto& [n, h] : handlers)
      if (n == name) {
        bool json_primary = name == "uniformity" || name == "report";
        return finish(h(c, e), c, json_primary, out, err);
      }
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitBadArgs;
  } catch (const std::domain_error& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitBadArgs;
  } catch (const std::out_of_range& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitBadArgs;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitAssertion;
  }
  err << "error: unknown subcommand " << name << "\n";
  return kExitBadArgs;
}

}  // namespace bht
