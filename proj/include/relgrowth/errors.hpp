#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace relgrowth {

// Invalid input: unknown symbols, malformed presentations, bad parameters.
struct input_error : std::invalid_argument {
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// A query exceeded what the computed data can certify. When a partial
// answer exists (e.g. a lower bound on a depth), it rides along.
struct range_error : std::out_of_range {
  explicit range_error(const std::string& what, std::optional<long> bound = std::nullopt)
      : std::out_of_range(what), lower_bound(bound) {}
  std::optional<long> lower_bound;
};

// The presentation kind has no exact word-problem procedure.
struct unsupported_oracle_error : std::runtime_error {
  explicit unsupported_oracle_error(const std::string& what) : std::runtime_error(what) {}
};

// A resource budget ran out. `completed` names the largest fully finished
// stage (for ball builds: the last complete radius).
struct budget_error : std::runtime_error {
  budget_error(const std::string& what, int completed_stage)
      : std::runtime_error(what), completed(completed_stage) {}
  int completed;
};

}  // namespace relgrowth
