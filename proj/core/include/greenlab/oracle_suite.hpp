#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "greenlab/shift.hpp"

namespace greenlab {

struct OracleCheck {
  std::string name;
  bool passed = false;
  int cases = 0;
  std::string detail;
};

struct OracleSuiteParams {
  std::uint64_t seed = 0;
  int exp_series_families = 5;
  int exp_series_depth = 6;
};

struct OracleSuiteReport {
  std::vector<OracleCheck> checks;
  BennettReport bennett;
  std::vector<FiberSetReport> fiber_sets;
  std::vector<AbstractSystemReport> jacobian;
  std::vector<ExpSeriesReport> exp_series;
  double ldt_h = 0.0;  // fitted on exact Bin(n, 1/2) tails, eps = 1/4, n = 4..64
  bool ok = false;
};

// The d = 2 observables mirrored by the Monte-Carlo validation:
// 1{x1=0} - 1/2, 1{x1=0, x2=0} - 1/4, and a depth-3 table with mean 0.
std::vector<CylinderFunction> mirror_observables();

// Exact Bin(n, 1/2) tails at eps = 1/4 for n = 4..64 and the single envelope
// rate h fitted to them.
struct BinomialEnvelope {
  std::vector<int> n;
  std::vector<Rational> tail;
  double h = 0.0;
  bool all_under = false;
};
BinomialEnvelope binomial_ldt_envelope();

OracleSuiteReport run_oracle_suite(const OracleSuiteParams& params = {});

}  // namespace greenlab
