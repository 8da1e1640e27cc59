#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "matconvex/report.hpp"

namespace matconvex {

/// One battery of the acceptance suite. `criterion` groups checks that
/// together decide one acceptance line.
struct SuiteCheck {
  std::string group;  // convexity, resolvent, jointconcavity, entropy
  std::string name;
  std::string criterion;
  std::function<CheckRecord(std::uint64_t seed)> run;
};

const std::vector<std::string>& suite_groups();
const std::vector<SuiteCheck>& suite_checks();

/// Runs every check whose group is in `only` (all when empty). Throws
/// ValidationError for an unknown group name.
Report run_suite(std::uint64_t seed, const std::vector<std::string>& only = {});

}  // namespace matconvex
