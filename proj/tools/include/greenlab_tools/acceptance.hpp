#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace greenlab::tools {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  // Everything the criterion computed; compared byte-for-byte across worker counts.
  nlohmann::json data;
};

inline constexpr int kCriteria = 10;

// Runs criterion `id` (1..9) with the current worker count. Timing is measured
// and checked against the criterion's budget.
CriterionResult run_criterion(int id, std::uint64_t seed);

// Criteria 1..9 with one worker, then criterion 10 (all of them again with four
// workers, outputs compared). `only` restricts to a subset of 1..10; criterion
// 10 always reruns the members of the subset that it has results for.
std::vector<CriterionResult> run_acceptance(
    std::uint64_t seed, const std::vector<int>& only = {},
    const std::function<void(const CriterionResult&)>& on_result = {});

std::string result_line(const CriterionResult& r);

}  // namespace greenlab::tools
