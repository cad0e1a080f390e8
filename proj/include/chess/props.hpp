#pragma once

// Randomized property suites for the scalar and matrix inequalities on
// Gamma_k. Each suite draws its own reproducible stream from the seed.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace chess {

struct SuiteResult {
  std::string name;
  std::size_t samples = 0;
  double worst_slack = 0.0;  // smallest signed slack seen; pass iff >= -tolerance
  double tolerance = 0.0;
  bool pass = true;
  std::string note;
};

struct PropsReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<SuiteResult> suites;

  bool all_pass() const;
  const SuiteResult* find(const std::string& name) const;
};

PropsReport run_props(std::size_t n, std::size_t k, std::size_t samples, std::uint64_t seed);

}  // namespace chess
