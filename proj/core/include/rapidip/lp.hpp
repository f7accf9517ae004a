#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rapidip/model.hpp"

namespace rapidip {

enum class LpStatus : std::uint8_t { Optimal, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(LpStatus status);

enum class BasisStatus : std::uint8_t {
  Basic,
  AtLower,
  AtUpper,
  Zero,   // free nonbasic column resting at 0
  Fixed,  // nonbasic column with equal bounds
};

/// Column statuses for the n structural columns followed by the m row slacks.
using Basis = std::vector<BasisStatus>;

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> primal;
  double objective = 0.0;
  /// Structural columns then slacks (slack i: a_i.x + s_i = b_i, s_i >= 0).
  Basis basis;
  std::vector<double> reduced_costs;
  std::uint64_t iterations = 0;
};

struct LpOptions {
  /// 0 selects the default cap 10*(n+m)+1000.
  std::uint64_t iteration_limit = 0;
};

/// Dense bounded-variable primal simplex (Dantzig pricing, Bland's rule after
/// 3(n+m) consecutive non-improving pivots). A warm basis is used when it is
/// primal feasible for the given box; otherwise the solve starts from the
/// slack basis with a phase-one over artificial columns.
LpResult solve_lp(const Instance& instance, const BoundBox& box,
                  const Basis* warm_basis = nullptr, LpOptions options = {});

struct DegeneracyInfo {
  double degenerate_share = 0.0;
  double face_var_constraint_ratio = 0.0;
  std::size_t nonbasic = 0;
  std::size_t degenerate_nonbasic = 0;
  std::size_t basic = 0;
};

/// Share of non-fixed nonbasic columns with |d_j| <= 1e-6, and
/// (basic + degenerate nonbasic) / max(1, num_rows).
DegeneracyInfo measure_degeneracy(const LpResult& result, std::size_t num_rows);

struct StrongBranchTally {
  std::uint64_t no_improvement = 0;
  std::uint64_t objective_changed = 0;
  std::uint64_t evaluations() const { return no_improvement + objective_changed; }
};

struct StrongBranchResult {
  std::optional<double> down;  // nullopt: child infeasible
  std::optional<double> up;
  std::uint64_t iterations = 0;
};

/// Solves both children of `candidate` (x <= floor(x*), x >= ceil(x*)) and
/// tallies children whose objective stayed within 1e-6 of the parent or that
/// went infeasible.
StrongBranchResult strong_branch(const Instance& instance, const BoundBox& box, int candidate,
                                 const LpResult& parent, StrongBranchTally& tally);

}  // namespace rapidip
