#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bht/foundation.hpp"
#include "bht/report.hpp"

namespace bht {

struct CriterionInfo {
  int id = 0;
  std::string name;
};

// modes -4..4 of the interval times a random chirp e^{i a x^2}, a in [chirp, 2 chirp)
SampledSignal random_interval_signal(const Grid1D& I, std::uint64_t seed, double chirp);

// the in-process acceptance criteria, ids 1..11 (12 needs the CLI binary and lives in the acceptance runner)
const std::vector<CriterionInfo>& criteria();

// runs one criterion; throws std::out_of_range for an unknown id
ScanReport run_criterion(int id, std::uint64_t seed);

// {"seed", "reports": [...], "pass"}; reports in id order
json run_all_criteria(std::uint64_t seed, std::vector<ScanReport>* reports = nullptr);

}  // namespace bht
