#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rapidip/conflict.hpp"
#include "rapidip/history.hpp"
#include "rapidip/model.hpp"

namespace rapidip {

/// Conflict participation activity per variable with multiplicative decay.
class VsidsTable {
 public:
  static constexpr double kDecay = 0.95;
  static constexpr std::uint64_t kEpoch = 100;

  VsidsTable() = default;
  explicit VsidsTable(std::size_t num_vars) : activity_(num_vars, 0.0) {}

  /// +1 for each literal of the conflict; every kEpoch conflicts all
  /// activities are scaled by kDecay.
  void bump(const BoundDisjunction& conflict);
  double activity(int var) const { return activity_[var]; }
  std::uint64_t conflicts() const { return conflicts_; }
  const std::vector<double>& activities() const { return activity_; }

 private:
  std::vector<double> activity_;
  std::uint64_t conflicts_ = 0;
};

struct PseudoCost {
  double sum = 0.0;
  std::uint64_t count = 0;
  double average() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
};

struct SearchStats {
  SearchStats() = default;
  explicit SearchStats(std::size_t num_vars);

  double dual_bound = -kInf;
  double root_dual_bound = -kInf;
  std::optional<std::vector<double>> incumbent;
  double incumbent_value = kInf;
  std::uint64_t n_solutions = 0;
  std::uint64_t leaves_infeasible = 0;
  std::uint64_t leaves_cutoff = 0;
  std::uint64_t sb_no_improvement = 0;
  std::uint64_t sb_objective_changed = 0;
  std::vector<PseudoCost> pc_down;
  std::vector<PseudoCost> pc_up;
  InferenceStats inference;
  VsidsTable vsids;
  std::uint64_t iter_lp = 0;
  double switching_seconds = 0.0;

  /// Objective gain per unit of fractionality moved in direction `dir`.
  void update_pseudocost(int var, BranchDir dir, double gain, double frac);
};

enum class LeafKind : std::uint8_t { Infeasible, Cutoff, Improving };

/// Improving leaves install `solution` with `value` as the new incumbent.
void record_leaf(SearchStats& stats, LeafKind kind, std::span<const double> solution = {},
                 double value = kInf);

struct BranchingWeights {
  double pseudocost;
  double inference;
  double vsids;
};

inline constexpr BranchingWeights kDefaultWeights{1.0, 0.1, 0.1};
inline constexpr BranchingWeights kConflictHeavyWeights{0.1, 0.5, 1.0};
inline constexpr double kLeafRatioThreshold = 10.0;

/// Conflict-heavy weights once infeasible leaves outnumber cutoff leaves more
/// than tenfold.
BranchingWeights branching_weights(const SearchStats& stats);

double hybrid_branching_score(int var, double value, const SearchStats& stats);

/// Highest hybrid score among `candidates` (values taken from `x`); the lowest
/// index wins ties.
int select_branching(std::span<const int> candidates, std::span<const double> x,
                     const SearchStats& stats);

}  // namespace rapidip
