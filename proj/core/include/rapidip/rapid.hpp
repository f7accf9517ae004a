#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rapidip/cpsearch.hpp"
#include "rapidip/lp.hpp"
#include "rapidip/search_stats.hpp"

namespace rapidip {

enum class Criterion : std::uint8_t { DualBound, Leaves, Degeneracy, Obj, NSols, SbLps };

inline constexpr std::array<Criterion, 6> kAllCriteria{
    Criterion::DualBound, Criterion::Leaves, Criterion::Degeneracy,
    Criterion::Obj,       Criterion::NSols,  Criterion::SbLps};

std::string_view to_string(Criterion c);
std::optional<Criterion> criterion_from_string(std::string_view name);

/// Criteria that may trigger a call at the root node.
bool is_root_criterion(Criterion c);

using CriterionSet = std::array<bool, 6>;

/// Parses "degeneracy,leaves"; "" and "none" give the empty set. Throws
/// Error(InvalidConfig) on unknown names.
CriterionSet parse_criteria(std::string_view list);
std::string format_criteria(const CriterionSet& set);

enum class RapidMode : std::uint8_t { Off, Root, Local };

std::string_view to_string(RapidMode mode);
std::optional<RapidMode> rapid_mode_from_string(std::string_view name);

struct RapidConfig {
  RapidMode mode = RapidMode::Local;
  CriterionSet criteria = parse_criteria("degeneracy");
  long long f = 5;
  double beta = 4.0;
  std::size_t max_transferred_conflicts = 10;
  double ratio_threshold = 10.0;
  double degeneracy_share_threshold = 0.80;
  double face_ratio_threshold = 2.0;
  /// Criterion obj fires while at most this many objective variables are
  /// unfixed.
  std::size_t obj_support_extra = 0;
  double max_conflict_frac = 0.05;
  std::uint64_t base_seed = 0;
};

/// Throws Error(InvalidConfig) on f < 1, beta <= 1 or a non-positive threshold.
void validate(const RapidConfig& config);

/// d == 0 or d == f * beta^k for an integer k >= 0, by repeated multiplication.
bool is_rl_depth(long long depth, long long f, double beta);

struct CriterionReport {
  CriterionSet fired{};
  double dual_bound_delta = 0.0;
  double leaf_ratio = 0.0;
  double degeneracy_share = 0.0;
  double face_ratio = 0.0;
  std::size_t objective_support = 0;
  std::uint64_t n_solutions = 0;
  double sb_ratio = 0.0;

  bool fired_on(Criterion c) const { return fired[static_cast<std::size_t>(c)]; }
};

/// Ratio of two counters where a zero denominator makes any positive numerator
/// infinitely large.
double guarded_ratio(std::uint64_t num, std::uint64_t den);

/// All six criteria evaluated for the node, regardless of which are enabled.
CriterionReport evaluate_criteria(const Instance& instance, const BoundBox& node_box,
                                  const SearchStats& stats, const DegeneracyInfo& degeneracy,
                                  const RapidConfig& config);

struct RunDecision {
  bool depth_ok = false;
  bool run = false;
  CriterionReport report;
};

/// Applies the mode, the depth schedule and the enabled criteria (restricted
/// to the root criteria at depth 0). Root mode runs at the root only and
/// ignores the criteria.
RunDecision decide_run(const Instance& instance, const BoundBox& node_box, int depth,
                       const SearchStats& stats, const DegeneracyInfo& degeneracy,
                       const RapidConfig& config);

CpConfig cp_config_for(int node_id, const SearchStats& stats, const RapidConfig& config);

struct TransferSummary {
  int node_id = -1;
  CpStatus status = CpStatus::NodeLimitReached;
  std::uint64_t cp_nodes = 0;
  std::size_t conflicts_found = 0;
  std::size_t conflicts_transferred = 0;
  std::size_t bounds_tightened = 0;
  bool solution_installed = false;
  bool solution_rejected = false;
  bool node_pruned = false;
};

/// Moves CP results into the MIP: best conflicts (linear first, then shorter)
/// appended to `sink` with global scope at the root and local scope elsewhere,
/// scope bounds applied to `node_box`, a verified solution installed as
/// incumbent, inference counts merged.
TransferSummary transfer(const CpOutcome& outcome, const Instance& instance, int node_id,
                         bool at_root, BoundBox& node_box, std::vector<LearnedConstraint>& sink,
                         SearchStats& stats, const RapidConfig& config);

}  // namespace rapidip
