#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "rapidip/conflict.hpp"
#include "rapidip/history.hpp"
#include "rapidip/model.hpp"

namespace rapidip {

struct CpConfig {
  std::uint64_t node_limit = 5000;
  double max_conflict_frac = 0.05;
  std::uint64_t seed = 0;
  /// Only solutions strictly better than this (by 1e-6) are accepted.
  double incumbent_bound = kInf;
  /// Caller statistics used for scoring only; they are not copied into the
  /// outcome.
  const InferenceStats* initial_stats = nullptr;
  bool record_traces = false;
};

/// Throws Error(InvalidConfig) on node_limit == 0 or a fraction outside (0,1].
void validate(const CpConfig& config);

enum class CpStatus : std::uint8_t { NodeLimitReached, SolvedOptimal, SolvedInfeasible };

std::string_view to_string(CpStatus status);

/// Everything known about one analyzed failure, kept for auditing.
struct ConflictTrace {
  BoundDisjunction conflict;
  std::vector<int> literal_levels;
  int failure_level = 0;
  BoundBox box_at_failure;
  double cutoff = kInf;
  bool stored = false;
};

struct CpOutcome {
  CpStatus status = CpStatus::NodeLimitReached;
  /// Stored conflicts of length >= 2; single-literal ones are folded into box.
  std::vector<LearnedConstraint> conflicts;
  BoundBox box;
  std::optional<std::vector<double>> solution;
  double solution_value = kInf;
  InferenceStats inference_stats;
  std::uint64_t nodes = 0;
  std::uint64_t conflicts_found = 0;
  std::uint64_t conflicts_too_long = 0;
  std::vector<ConflictTrace> traces;
};

/// Minimizer of c^T x over the box alone; zero-cost variables sit at their
/// lower bound.
std::vector<double> pseudo_solution(const BoundBox& box, std::span<const double> objective);

struct BranchChoice {
  int var = -1;
  long long value = 0;  // children: x <= value, x >= value + 1
};

/// Unfixed integer variable with the best value-based inference score; ties
/// are broken uniformly by `rng`. Throws Error(AllFixed) when nothing is left.
BranchChoice select_inference_branching(const Instance& instance, const BoundBox& box,
                                        const InferenceStats& stats,
                                        std::span<const double> pseudo, std::mt19937_64& rng);

/// Depth-first CP search with propagation, pseudo-solution bounding and 1-UIP
/// learning over the scope box. Requires a pure integer program.
CpOutcome cp_search(const Instance& instance, const BoundBox& scope, const CpConfig& config);

/// min(5000, max(500, iter_lp))
std::uint64_t node_limit_from_iters(std::uint64_t iter_lp);

/// ceil(frac * n), at least 1.
std::size_t conflict_length_cap(std::size_t num_vars, double frac);

}  // namespace rapidip
