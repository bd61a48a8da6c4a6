#include "bht/harness.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace bht {

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& v) {
  if (x.size() != v.size()) throw std::invalid_argument("fit_slope: size mismatch");
  if (x.size() < 4) throw std::invalid_argument("fit_slope: need at least 4 points");
  std::vector<double> y(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw std::invalid_argument("fit_slope: values must be positive");
    y[i] = std::log2(v[i]);
  }
  double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate axis");
  SlopeFit out;
  out.slope = sxy / sxx;
  if (syy <= 1e-24 * std::max(1.0, my * my)) {
    out.slope = 0.0;
    out.r2 = 0.0;
    out.r2_defined = false;
  } else {
    out.r2 = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  }
  return out;
}

void DecayScanResult::fit() {
  SlopeFit f = fit_slope(axis, values);
  slope = f.slope;
  r2 = f.r2;
  r2_defined = f.r2_defined;
}

namespace {

std::mutex registry_mu;

std::map<std::string, OpFactory>& registry() {
  static std::map<std::string, OpFactory> r;
  return r;
}

RegisteredOp product_op(const OpParams& params) {
  double period = params.count("period") ? params.at("period") : 16.0;
  auto count = static_cast<std::size_t>(params.count("count") ? params.at("count") : 1024.0);
  Grid1D g = make_grid(-period / 2, period, count);
  RegisteredOp op;
  op.apply = [](const SampledSignal& f, const SampledSignal& h) {
    SampledSignal out = f;
    for (std::size_t k = 0; k < out.samples.size(); ++k) out.samples[k] = f.samples[k] * h.samples[k];
    return out;
  };
  // matched pair: the same smooth bump in both slots
  op.sample = [g](std::uint64_t seed, std::int64_t trial) {
    Rng rng = Rng::keyed(seed, {trial});
    double c = (rng.uniform() - 0.5) * g.period() / 4;
    double w = 0.5 + rng.uniform();
    auto f = sample_function(g, [&](double x) { return cplx(std::exp(-(x - c) * (x - c) / (w * w))); }, Band::full(g));
    return std::make_pair(f, f);
  };
  return op;
}

struct Builtins {
  Builtins() { registry()["product"] = product_op; }
};

void ensure_builtins() {
  static Builtins b;
  (void)b;
}

double ratio_of(const RegisteredOp& op, const SampledSignal& f, const SampledSignal& g, double p, double q, double r) {
  double nf = lp_norm(f, p);
  double ng = lp_norm(g, q);
  if (nf == 0.0 || ng == 0.0) return 0.0;
  return lp_norm(op.apply(f, g), r) / (nf * ng);
}

}  // namespace

void register_op(const std::string& id, OpFactory factory) {
  ensure_builtins();
  std::lock_guard<std::mutex> lock(registry_mu);
  registry()[id] = std::move(factory);
}

bool has_op(const std::string& id) {
  ensure_builtins();
  std::lock_guard<std::mutex> lock(registry_mu);
  return registry().count(id) > 0;
}

std::vector<std::string> registered_ops() {
  ensure_builtins();
  std::lock_guard<std::mutex> lock(registry_mu);
  std::vector<std::string> out;
  for (const auto& kv : registry()) out.push_back(kv.first);
  return out;
}

double norm_lower_bound(const RegisteredOp& op, double p, double q, double r, int trials, std::uint64_t seed,
                        NormBoundOptions opts, std::vector<double>* ratios) {
  if (trials <= 0) return 0.0;
  std::vector<double> vals(static_cast<std::size_t>(trials));
  parallel_for(vals.size(), [&](std::size_t t) {
    auto [f, g] = op.sample(seed, static_cast<std::int64_t>(t));
    vals[t] = ratio_of(op, f, g, p, q, r);
  });
  if (ratios) *ratios = vals;
  auto best_it = std::max_element(vals.begin(), vals.end());
  double best = *best_it;
  int steps = std::min(opts.greedy_steps, 20);
  if (steps <= 0) return best;

  // coordinate ascent on the Fourier coefficients of f for the best trial
  auto [f, g] = op.sample(seed, static_cast<std::int64_t>(best_it - vals.begin()));
  SampledSignal c = fourier_transform(f, Direction::forward);
  std::vector<std::size_t> live;
  double cmax = 0.0;
  for (std::size_t k = 0; k < c.samples.size(); ++k) cmax = std::max(cmax, std::abs(c.samples[k]));
  for (std::size_t k = 0; k < c.samples.size(); ++k)
    if (std::abs(c.samples[k]) > 1e-12 * cmax) live.push_back(k);
  if (live.empty()) return best;
  Rng rng = Rng::keyed(seed, {-1});
  const cplx moves[] = {{0.5, 0.0}, {-0.5, 0.0}, {0.0, 0.5}, {0.0, -0.5}};
  for (int s = 0; s < steps; ++s) {
    std::size_t k = live[static_cast<std::size_t>(rng.uniform() * live.size())];
    cplx orig = c.samples[k];
    cplx best_val = orig;
    for (cplx mv : moves) {
      c.samples[k] = orig * (1.0 + mv);
      double v = ratio_of(op, fourier_transform(c, Direction::inverse), g, p, q, r);
      if (v > best) {
        best = v;
        best_val = c.samples[k];
      }
    }
    c.samples[k] = best_val;
  }
  return best;
}

double norm_lower_bound(const std::string& op_id, double p, double q, double r, int trials, std::uint64_t seed,
                        const OpParams& params, NormBoundOptions opts) {
  ensure_builtins();
  OpFactory factory;
  {
    std::lock_guard<std::mutex> lock(registry_mu);
    auto it = registry().find(op_id);
    if (it == registry().end()) throw std::invalid_argument("norm_lower_bound: unknown op " + op_id);
    factory = it->second;
  }
  return norm_lower_bound(factory(params), p, q, r, trials, seed, opts);
}

}  // namespace bht
