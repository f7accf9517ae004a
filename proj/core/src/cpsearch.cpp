#include "rapidip/cpsearch.hpp"

#include <algorithm>
#include <cmath>

#include "rapidip/error.hpp"
#include "rapidip/propagation.hpp"

namespace rapidip {

std::string_view to_string(CpStatus status) {
  switch (status) {
    case CpStatus::NodeLimitReached: return "node_limit";
    case CpStatus::SolvedOptimal: return "solved_optimal";
    case CpStatus::SolvedInfeasible: return "solved_infeasible";
  }
  return "?";
}

void validate(const CpConfig& config) {
  if (config.node_limit == 0) throw Error(ErrorCode::InvalidConfig, "CP node limit must be >= 1");
  if (!(config.max_conflict_frac > 0.0 && config.max_conflict_frac <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "max conflict fraction must lie in (0, 1]");
}

std::uint64_t node_limit_from_iters(std::uint64_t iter_lp) {
  return std::min<std::uint64_t>(5000, std::max<std::uint64_t>(500, iter_lp));
}

std::size_t conflict_length_cap(std::size_t num_vars, double frac) {
  const auto cap = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(num_vars) - 1e-9));
  return std::max<std::size_t>(1, cap);
}

std::vector<double> pseudo_solution(const BoundBox& box, std::span<const double> objective) {
  std::vector<double> x(box.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = objective[j] < 0.0 ? box.upper(j) : box.lower(j);
  return x;
}

BranchChoice select_inference_branching(const Instance& instance, const BoundBox& box,
                                        const InferenceStats& stats,
                                        std::span<const double> pseudo, std::mt19937_64& rng) {
  std::vector<BranchChoice> best;
  double best_score = -1.0;
  for (std::size_t j = 0; j < box.size(); ++j) {
    if (!instance.is_integer(j) || box.is_fixed(j)) continue;
    const double lo = box.lower(j);
    const double hi = box.upper(j) - 1.0;
    const auto v = static_cast<long long>(std::clamp(std::round(pseudo[j]), lo, hi));
    const double score = stats.value_score(static_cast<int>(j), v);
    if (score > best_score) {
      best_score = score;
      best.clear();
    }
    if (score == best_score) best.push_back({static_cast<int>(j), v});
  }
  if (best.empty()) throw Error(ErrorCode::AllFixed, "no unfixed integer variable to branch on");
  if (best.size() == 1) return best.front();
  return best[rng() % best.size()];
}

namespace {

struct Decision {
  int var;
  Side side;
  double value;      // bound applied
  long long split;   // v of the x <= v / x >= v+1 pair
};

class CpSearch {
 public:
  CpSearch(const Instance& instance, const BoundBox& scope, const CpConfig& config)
      : inst_(instance), config_(config), base_(scope), propagator_(instance),
        graph_(instance.num_vars()), rng_(config.seed),
        cap_(conflict_length_cap(instance.num_vars(), config.max_conflict_frac)),
        cutoff_(config.incumbent_bound) {
    out_.inference_stats = InferenceStats(instance.num_vars());
    scoring_ = config.initial_stats ? *config.initial_stats : InferenceStats(instance.num_vars());
    scoring_.resize(instance.num_vars());
  }

  CpOutcome run();

 private:
  enum class NodeResult { Pruned, Branched, ScopeDone };

  bool rebuild_root();
  NodeResult process(const std::vector<Decision>& path);
  NodeResult handle_failure(const BoundBox& box);
  void record_cutoff_failure(const BoundBox& box);
  double pseudo_value(const BoundBox& box) const;
  std::vector<const LearnedConstraint*> learned_view() const;

  const Instance& inst_;
  const CpConfig& config_;
  BoundBox base_;
  BoundBox root_;
  bool root_dirty_ = true;
  Propagator propagator_;
  ConflictGraph graph_;
  std::mt19937_64 rng_;
  std::size_t cap_;
  double cutoff_;
  InferenceStats scoring_;
  std::vector<std::vector<Decision>> stack_;
  CpOutcome out_;
};

std::vector<const LearnedConstraint*> CpSearch::learned_view() const {
  std::vector<const LearnedConstraint*> v;
  v.reserve(out_.conflicts.size());
  for (const auto& c : out_.conflicts) v.push_back(&c);
  return v;
}

double CpSearch::pseudo_value(const BoundBox& box) const {
  double v = 0.0;
  const auto& c = inst_.objective();
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] != 0.0) v += c[j] * (c[j] < 0.0 ? box.upper(j) : box.lower(j));
  }
  return v;
}

// Level-0 box of the scope: base box plus everything propagation derives from
// it. Returns false when the scope itself is infeasible.
bool CpSearch::rebuild_root() {
  root_ = base_;
  graph_.reset();
  const auto learned = learned_view();
  const auto res = propagator_.run(root_, graph_, learned);
  root_dirty_ = false;
  if (res.outcome == PropagationOutcome::Infeasible) return false;
  return !(std::isfinite(cutoff_) && pseudo_value(root_) >= cutoff_ - 1e-6);
}

void CpSearch::record_cutoff_failure(const BoundBox& box) {
  // Antecedents: the bounds the pseudo-objective reads, minus those that can be
  // relaxed back to their level-0 value while the cutoff still holds.
  const auto& c = inst_.objective();
  const double threshold = cutoff_ - 1e-6;
  double value = pseudo_value(box);
  std::vector<BoundRef> reads;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] == 0.0) continue;
    const Side side = c[j] > 0.0 ? Side::Lower : Side::Upper;
    const double cur = c[j] * box.bound(j, side);
    const double base = c[j] * root_.bound(j, side);
    if (cur == base) continue;
    if (value - cur + base >= threshold) {
      value += base - cur;
      continue;
    }
    reads.push_back({static_cast<int>(j), side});
  }
  graph_.record_failure(Reason::cutoff(), std::span<const BoundRef>(reads));
}

CpSearch::NodeResult CpSearch::handle_failure(const BoundBox& box) {
  const ConflictAnalysis analysis = analyze_1uip(graph_, inst_);
  if (analysis.status == AnalysisStatus::ScopeInfeasible) return NodeResult::ScopeDone;
  if (analysis.status != AnalysisStatus::Conflict) return NodeResult::Pruned;
  ++out_.conflicts_found;
  const bool store = analysis.conflict.size() <= cap_;
  if (config_.record_traces) {
    out_.traces.push_back({analysis.conflict, analysis.literal_levels, analysis.failure_level, box,
                           cutoff_, store});
  }
  if (!store) {
    ++out_.conflicts_too_long;
    return NodeResult::Pruned;
  }
  if (analysis.conflict.size() == 1) {
    try {
      upgrade_singleton(analysis.conflict, base_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyBox) throw;
      return NodeResult::ScopeDone;
    }
  } else {
    LearnedConstraint lc;
    lc.disjunction = analysis.conflict;
    lc.linear = to_knapsack(lc.disjunction, base_);
    lc.scope = ConstraintScope::Local;
    lc.cutoff = cutoff_;
    out_.conflicts.push_back(std::move(lc));
  }
  root_dirty_ = true;
  return NodeResult::Pruned;
}

CpSearch::NodeResult CpSearch::process(const std::vector<Decision>& path) {
  if (root_dirty_ && !rebuild_root()) return NodeResult::ScopeDone;
  BoundBox box = root_;
  graph_.reset();
  const auto learned = learned_view();

  for (std::size_t k = 0; k < path.size(); ++k) {
    const Decision& d = path[k];
    graph_.push_level();
    const double other = box.bound(d.var, opposite(d.side));
    if (d.side == Side::Lower ? d.value > other : d.value < other) {
      // The decision contradicts bounds learned after the node was created.
      return NodeResult::Pruned;
    }
    if (box.tighten(d.var, d.side, d.value)) {
      graph_.record(d.var, d.side, d.value, Reason::branching(), std::span<const int>());
    }
    const std::size_t before = graph_.trail().size();
    const auto res = propagator_.run(box, graph_, learned);
    if (k + 1 == path.size()) {
      const std::uint64_t inferences = graph_.trail().size() - before;
      const BranchDir dir = d.side == Side::Upper ? BranchDir::Down : BranchDir::Up;
      out_.inference_stats.add(d.var, d.split, dir, inferences);
      scoring_.add(d.var, d.split, dir, inferences);
    }
    if (res.outcome == PropagationOutcome::Infeasible) return handle_failure(box);
  }

  const std::vector<double> xbar = pseudo_solution(box, inst_.objective());
  const double value = inst_.evaluate(xbar);
  if (std::isfinite(cutoff_) && value >= cutoff_ - 1e-6) {
    record_cutoff_failure(box);
    return handle_failure(box);
  }
  if (inst_.is_feasible(xbar)) {
    cutoff_ = value;
    out_.solution = xbar;
    out_.solution_value = value;
    return NodeResult::Pruned;
  }

  BranchChoice choice;
  try {
    choice = select_inference_branching(inst_, box, scoring_, xbar, rng_);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AllFixed) throw;
    return NodeResult::Pruned;
  }
  const double v = static_cast<double>(choice.value);
  Decision down{choice.var, Side::Upper, v, choice.value};
  Decision up{choice.var, Side::Lower, v + 1.0, choice.value};
  const bool down_first = xbar[choice.var] <= v;
  std::vector<Decision> first_path = path, second_path = path;
  first_path.push_back(down_first ? down : up);
  second_path.push_back(down_first ? up : down);
  stack_.push_back(std::move(second_path));
  stack_.push_back(std::move(first_path));
  return NodeResult::Branched;
}

CpOutcome CpSearch::run() {
  stack_.push_back({});
  while (!stack_.empty()) {
    if (out_.nodes >= config_.node_limit) break;
    std::vector<Decision> path = std::move(stack_.back());
    stack_.pop_back();
    ++out_.nodes;
    if (process(path) == NodeResult::ScopeDone) {
      stack_.clear();
      break;
    }
  }
  // A conflict learned on the last node may close the scope at level 0.
  if (!stack_.empty() && root_dirty_ && !rebuild_root()) stack_.clear();
  if (stack_.empty()) {
    out_.status = out_.solution ? CpStatus::SolvedOptimal : CpStatus::SolvedInfeasible;
    out_.box = base_;
  } else {
    out_.status = CpStatus::NodeLimitReached;
    out_.box = root_;
  }
  return std::move(out_);
}

}  // namespace

CpOutcome cp_search(const Instance& instance, const BoundBox& scope, const CpConfig& config) {
  validate(config);
  for (std::size_t j = 0; j < instance.num_vars(); ++j) {
    if (!instance.is_integer(j))
      throw Error(ErrorCode::NotPureInteger, "CP search needs a pure integer program");
  }
  if (scope.size() != instance.num_vars())
    throw Error(ErrorCode::InvalidModel, "scope box does not match the instance");
  CpSearch search(instance, scope, config);
  return search.run();
}

}  // namespace rapidip
