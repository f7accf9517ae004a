#include "rapidip/search_stats.hpp"

#include <algorithm>
#include <cmath>

namespace rapidip {

void VsidsTable::bump(const BoundDisjunction& conflict) {
  for (const Literal& lit : conflict.literals()) {
    if (static_cast<std::size_t>(lit.var) >= activity_.size()) activity_.resize(lit.var + 1, 0.0);
    activity_[lit.var] += 1.0;
  }
  if (++conflicts_ % kEpoch == 0) {
    for (double& a : activity_) a *= kDecay;
  }
}

SearchStats::SearchStats(std::size_t num_vars)
    : pc_down(num_vars), pc_up(num_vars), inference(num_vars), vsids(num_vars) {}

void SearchStats::update_pseudocost(int var, BranchDir dir, double gain, double frac) {
  if (frac <= 0.0 || !std::isfinite(gain)) return;
  PseudoCost& pc = dir == BranchDir::Down ? pc_down[var] : pc_up[var];
  pc.sum += std::max(0.0, gain) / frac;
  ++pc.count;
}

void record_leaf(SearchStats& stats, LeafKind kind, std::span<const double> solution, double value) {
  switch (kind) {
    case LeafKind::Infeasible:
      ++stats.leaves_infeasible;
      break;
    case LeafKind::Cutoff:
      ++stats.leaves_cutoff;
      break;
    case LeafKind::Improving:
      ++stats.n_solutions;
      stats.incumbent.emplace(solution.begin(), solution.end());
      stats.incumbent_value = value;
      break;
  }
}

BranchingWeights branching_weights(const SearchStats& stats) {
  const double ratio = static_cast<double>(stats.leaves_infeasible) /
                       static_cast<double>(std::max<std::uint64_t>(1, stats.leaves_cutoff));
  return ratio > kLeafRatioThreshold ? kConflictHeavyWeights : kDefaultWeights;
}

double hybrid_branching_score(int var, double value, const SearchStats& stats) {
  const BranchingWeights w = branching_weights(stats);
  const double fd = value - std::floor(value);
  const double fu = std::ceil(value) - value;
  const double down = std::max(stats.pc_down[var].average() * fd, 1e-6);
  const double up = std::max(stats.pc_up[var].average() * fu, 1e-6);
  return w.pseudocost * down * up + w.inference * stats.inference.variable_score(var) +
         w.vsids * stats.vsids.activity(var);
}

int select_branching(std::span<const int> candidates, std::span<const double> x,
                     const SearchStats& stats) {
  int best = -1;
  double best_score = -kInf;
  for (int j : candidates) {
    const double s = hybrid_branching_score(j, x[j], stats);
    if (s > best_score || (s == best_score && j < best)) {
      best_score = s;
      best = j;
    }
  }
  return best;
}

}  // namespace rapidip
