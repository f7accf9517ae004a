#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rapidip/mipsearch.hpp"

namespace rapidip {

struct BenchConfig {
  std::string name;
  SolveConfig solve;
};

struct BenchRow {
  std::string instance;
  std::uint64_t seed = 0;
  std::string config;
  /// Solve status name, or "error" when the run failed before solving.
  std::string status;
  double time = 0.0;
  std::uint64_t nodes = 0;
  std::optional<double> objective;
  std::uint64_t branch_hash = 0;
  std::uint64_t rl_calls = 0;
  std::string error;

  bool solved() const { return status == "optimal" || status == "infeasible"; }
};

struct SuiteResult {
  std::vector<BenchRow> rows;
  std::vector<std::string> warnings;
};

/// Every (instance, seed, config) combination over the `.mps` files of `dir`,
/// ordered by file name, then seed, then config. The seed replaces each
/// config's Rapid Learning base seed. Runs may be spread over `workers`
/// threads; the row order does not depend on it.
SuiteResult run_suite(const std::string& dir, const std::vector<BenchConfig>& configs,
                      const std::vector<std::uint64_t>& seeds, std::size_t workers = 1);

/// Same over already loaded instances (name, instance).
SuiteResult run_suite(const std::vector<std::pair<std::string, Instance>>& instances,
                      const std::vector<BenchConfig>& configs,
                      const std::vector<std::uint64_t>& seeds, std::size_t workers = 1);

/// exp(mean(log(v + shift))) - shift; 0 for an empty input.
double shifted_geomean(std::span<const double> values, double shift);

using RunKey = std::pair<std::string, std::uint64_t>;

struct AffectedSplit {
  std::vector<RunKey> affected;
  std::vector<RunKey> unaffected;
};

/// A run is affected when its branching sequence hash differs from the
/// baseline's. Throws Error(MissingPair) unless both sides cover the same
/// (instance, seed) keys.
AffectedSplit affected_split(std::span<const BenchRow> baseline, std::span<const BenchRow> treatment);

struct Quartiles {
  std::size_t count = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

Quartiles quartiles(std::vector<double> values);

struct ConfigSummary {
  std::string config;
  std::size_t runs = 0;
  std::size_t solved = 0;
  double time = 0.0;   // shifted geometric mean, shift 1
  double nodes = 0.0;  // shifted geometric mean, shift 100
  double time_q = 1.0;
  double nodes_q = 1.0;
  std::size_t affected = 0;
  std::size_t unaffected = 0;
  double affected_time_q = 1.0;
  double affected_nodes_q = 1.0;
  /// Per-run time ratios (config / baseline) on affected runs.
  Quartiles affected_time_ratio;
};

struct BenchReport {
  std::string baseline;
  std::vector<ConfigSummary> configs;
};

/// Aggregates rows per config relative to `baseline`. Throws
/// Error(MissingPair) when a config does not cover the baseline's runs.
BenchReport summarize(std::span<const BenchRow> rows, const std::string& baseline);

std::string rows_to_csv(std::span<const BenchRow> rows);
std::string report_to_csv(const BenchReport& report);
std::string report_to_markdown(const BenchReport& report);

}  // namespace rapidip
