#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bht/foundation.hpp"

namespace bht {

struct SlopeFit {
  double slope = 0.0;
  double r2 = 0.0;
  bool r2_defined = true;  // false when the values are constant
};

// least squares of log2(v) against x; needs >= 4 points with v > 0
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& v);

struct DecayScanResult {
  std::string scan;
  std::vector<double> axis;
  std::vector<double> values;
  double slope = 0.0;
  double r2 = 0.0;
  bool r2_defined = true;
  int trials_per_cell = 0;
  std::uint64_t seed = 0;

  void fit();
};

// Bilinear operator under test together with the spaces its inputs live on.
struct RegisteredOp {
  // returns op(f, g)
  std::function<SampledSignal(const SampledSignal&, const SampledSignal&)> apply;
  // random input pair for trial index
  std::function<std::pair<SampledSignal, SampledSignal>(std::uint64_t seed, std::int64_t trial)> sample;
};

using OpParams = std::map<std::string, double>;
using OpFactory = std::function<RegisteredOp(const OpParams&)>;

void register_op(const std::string& id, OpFactory factory);
bool has_op(const std::string& id);
std::vector<std::string> registered_ops();

struct NormBoundOptions {
  int greedy_steps = 0;  // capped at 20
};

// max over seeded trials of ||op(f,g)||_r / (||f||_p ||g||_q)
double norm_lower_bound(const std::string& op_id, double p, double q, double r, int trials, std::uint64_t seed,
                        const OpParams& params, NormBoundOptions opts = {});

// same, for an already-built operator; also returns per-trial ratios when `ratios` is non-null
double norm_lower_bound(const RegisteredOp& op, double p, double q, double r, int trials, std::uint64_t seed,
                        NormBoundOptions opts = {}, std::vector<double>* ratios = nullptr);

}  // namespace bht
