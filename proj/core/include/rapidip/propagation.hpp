#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rapidip/conflict.hpp"
#include "rapidip/model.hpp"

namespace rapidip {

/// A bound implied by one constraint, together with the bounds it was derived
/// from.
struct Deduction {
  int var;
  Side side;
  double value;
  std::vector<BoundRef> reason;
};

/// Result of evaluating a single constraint against a box. Deductions are all
/// computed from the same box; they are not applied.
struct RowPropagation {
  bool infeasible = false;
  std::vector<Deduction> deductions;
  /// Bounds that together violate the constraint (valid when infeasible).
  std::vector<BoundRef> failure;
};

/// Two watched positions of a clause-like constraint. Positions are hints and
/// are revalidated on every call.
struct WatchState {
  int first = -1;
  int second = -1;
};

/// Residual-activity bound strengthening on a `<=` row.
RowPropagation propagate_linear_row(const Row& row, const BoundBox& box,
                                    std::span<const char> integer);

/// Knapsack rows: binary variables, positive integer weights. Integer arithmetic
/// with one pass over the weight-sorted items.
RowPropagation propagate_knapsack(const Row& row, const BoundBox& box);

/// Set-covering rows `sum x >= 1` stored as `-sum x <= -1`.
RowPropagation propagate_setcover(const Row& row, const BoundBox& box, WatchState& watch);

/// Bound disjunctions with the same two-watch scheme, literals generalized to
/// bound predicates.
RowPropagation propagate_disjunction(const BoundDisjunction& d, const BoundBox& box,
                                     WatchState& watch);

enum class PropagationOutcome : std::uint8_t { Reduced, Fixpoint, Infeasible };

struct PropagationResult {
  PropagationOutcome outcome = PropagationOutcome::Fixpoint;
  std::vector<BoundChange> deductions;
  std::optional<int> infeasible_row;
  Reason failure;
};

/// Round-robin propagation over instance rows and learned constraints. Keeps
/// watch state across calls; construct one per search.
class Propagator {
 public:
  explicit Propagator(const Instance& instance);

  PropagationResult run(BoundBox& box, ConflictGraph& recorder,
                        std::span<const LearnedConstraint* const> learned = {});

  std::uint64_t row_evaluations() const { return evaluations_; }

 private:
  enum class Step : std::uint8_t { Nothing, Changed, Failed };

  Step apply(const RowPropagation& rp, Reason reason, BoundBox& box, ConflictGraph& recorder,
             PropagationResult& result);
  RowPropagation evaluate_row(const Row& row, const BoundBox& box, WatchState& watch) const;

  const Instance* instance_;
  std::vector<WatchState> row_watch_;
  std::vector<WatchState> learned_watch_;
  std::uint64_t evaluations_ = 0;
};

PropagationResult propagate_to_fixpoint(const Instance& instance, BoundBox& box,
                                        ConflictGraph& recorder,
                                        std::span<const LearnedConstraint* const> learned = {});

}  // namespace rapidip
