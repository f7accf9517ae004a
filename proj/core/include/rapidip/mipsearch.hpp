#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rapidip/conflict.hpp"
#include "rapidip/cpsearch.hpp"
#include "rapidip/lp.hpp"
#include "rapidip/rapid.hpp"
#include "rapidip/search_stats.hpp"

namespace rapidip {

struct SolveConfig {
  RapidConfig rapid;
  /// Processed-node cap; 0 solves the root LP only.
  std::uint64_t node_limit = std::numeric_limits<std::uint64_t>::max();
  double time_limit = 3600.0;
  bool collect_events = false;
  /// Keep every learned constraint together with the box it is valid in,
  /// plus the raw conflict traces, for auditing.
  bool audit = false;
  std::size_t strong_branch_candidates = 5;
  int strong_branch_max_depth = 4;
  int plunge_limit = 10;
};

enum class SolveStatus : std::uint8_t { Optimal, Infeasible, Unbounded, NodeLimit, TimeLimit };

std::string_view to_string(SolveStatus status);

struct BranchRecord {
  int var = -1;
  double value = 0.0;
};

struct NodeEvent {
  int id = -1;
  int parent = -1;
  int depth = 0;
  /// branch | infeasible | cutoff | incumbent | rl_pruned
  std::string action;
  double bound = -kInf;
  double dual_bound = -kInf;
  double incumbent = kInf;
  std::optional<BranchRecord> branch;
  std::vector<std::string> criteria;
  std::optional<TransferSummary> rl;
};

/// A learned constraint and the box whose feasible points it must keep
/// (objective below the constraint's cutoff).
struct AuditedConstraint {
  LearnedConstraint constraint;
  BoundBox scope;
  bool from_cp = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<std::vector<double>> solution;
  /// c^T x of the solution in minimization form, without the offset.
  double objective = kInf;
  double dual_bound = -kInf;
  std::uint64_t nodes = 0;
  std::uint64_t rl_calls = 0;
  std::array<std::uint64_t, 6> criterion_counts{};
  SearchStats stats;
  std::vector<NodeEvent> events;
  std::vector<AuditedConstraint> learned;
  std::vector<ConflictTrace> traces;
  double wall_seconds = 0.0;
};

SolveResult solve(const Instance& instance, const SolveConfig& config);

/// One JSON object per line, no timing fields.
std::string events_to_jsonl(const std::vector<NodeEvent>& events);

/// FNV-1a over the (var, value) sequence of branching events.
std::uint64_t branch_hash(const std::vector<NodeEvent>& events);

/// User-facing objective: offset added and sign restored for maximization.
double reported_objective(const Instance& instance, double internal);

}  // namespace rapidip
