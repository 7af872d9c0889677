#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

// The twelve acceptance checks. Each draws its randomness from the seed alone,
// so metrics are reproducible; only the wall-clock time varies between runs.
namespace ccrlab::selftest {

inline constexpr int kCriterionCount = 12;
inline constexpr std::uint64_t kDefaultSeed = 20241016;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  nlohmann::json metrics = nlohmann::json::object();
  double seconds = 0.0;

  /// Everything except the timing.
  nlohmann::json to_json() const;
};

std::string_view criterion_name(int id);

/// Runs one check; errors raised inside are reported as a failure with the message.
/// Throws kInvalidInput for an id outside 1..12.
CriterionResult run_criterion(int id, std::uint64_t seed = kDefaultSeed);

/// "PASS  3 pairing counts (2.1 s): detail".
std::string format_line(const CriterionResult& r);

}  // namespace ccrlab::selftest
