// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exits 0 once all criteria ran, whatever their verdicts; nonzero only when the run itself breaks.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "bht/criteria.hpp"

namespace {

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return out;
  }
  char buf[1 << 14];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  status = pclose(p);
  return out;
}

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string bht;
  std::uint64_t seed = 1;
  app.add_option("--bht", bht, "path to the bht binary")->required();
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  int passed = 0, total = 0;
  try {
    for (const auto& c : bht::criteria()) {
      auto t0 = std::chrono::steady_clock::now();
      auto r = bht::run_criterion(c.id, seed);
      std::ostringstream detail;
      for (const auto& ch : r.checks)
        if (!ch.pass)
          detail << "; failed " << ch.name << " = " << ch.value << " (needs " << ch.relation << " " << ch.threshold
                 << ")";
      ++total;
      passed += r.pass();
      std::printf("%s criterion %d (%s) [%.1fs]%s\n", r.pass() ? "PASS" : "FAIL", c.id, c.name.c_str(),
                  seconds_since(t0), detail.str().c_str());
      std::fflush(stdout);
    }
  } catch (const std::exception& ex) {
    std::printf("ERROR acceptance run aborted: %s\n", ex.what());
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  std::string cmd = shell_quote(bht) + " report --all --seed 1 2>/dev/null";
  int s1 = 0, s2 = 0;
  std::string a = capture(cmd, s1);
  std::string b = capture(cmd, s2);
  bool same = !a.empty() && a == b && a.find("\"reports\"") != std::string::npos;
  ++total;
  passed += same;
  std::printf("%s criterion 12 (determinism of report --all --seed 1) [%.1fs]%s\n", same ? "PASS" : "FAIL",
              seconds_since(t0), same ? "" : "; outputs differ or are empty");
  std::printf("acceptance: %d/%d criteria pass\n", passed, total);
  return 0;
}
