#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace bht {

enum ExitCode : int { kExitPass = 0, kExitAssertion = 1, kExitBadArgs = 2, kExitNonConvergence = 3 };

// Settings shared by the scan subcommands.
struct RunConfig {
  int d = 2;
  int L = 4;
  std::pair<int, int> j{0, 0};
  std::pair<int, int> m{4, 4};
  std::pair<int, int> k{4, 12};  // log2 lambda
  std::vector<double> deltas;
  int trials = 20;
  std::uint64_t seed = 1;
  double tol = 0.05;
  std::string out_dir;  // empty: primary artifact on stdout
  bool emit_csv = true;
  bool emit_json = true;
  bool emit_svg = false;
  std::size_t samples = 1024;

  // m <= 14, |j| <= 20, ascending ranges, samples a power of two; throws std::invalid_argument
  void validate() const;
};

// "A..B" or a single integer
std::pair<int, int> parse_range(const std::string& s);
// comma separated reals
std::vector<double> parse_real_list(const std::string& s);
// "csv,json,svg" subsets
void parse_emit(const std::string& s, RunConfig& cfg);

// flat key=value lines, '#' starts a comment; throws std::invalid_argument on a line without '='
std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text);

// args exclude the program name. Status lines go to err, the primary artifact to out (or --out files).
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bht
