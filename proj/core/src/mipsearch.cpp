#include "rapidip/mipsearch.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <tuple>

#include <json.hpp>

#include "rapidip/error.hpp"
#include "rapidip/propagation.hpp"

namespace rapidip {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NodeLimit: return "node_limit";
    case SolveStatus::TimeLimit: return "time_limit";
  }
  return "?";
}

double reported_objective(const Instance& instance, double internal) {
  if (!std::isfinite(internal)) return instance.maximize() ? -internal : internal;
  const double v = internal + instance.objective_offset();
  return instance.maximize() ? -v : v;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Decision {
  int var;
  Side side;
  double value;
};

// Rapid Learning results of one node, inherited by its whole subtree.
struct LocalInfo {
  std::shared_ptr<const LocalInfo> parent;
  std::vector<std::tuple<int, Side, double>> bounds;
  std::vector<LearnedConstraint> constraints;
};

struct Node {
  int id = 0;
  int parent = -1;
  int depth = 0;
  std::vector<Decision> path;
  double lower_bound = -kInf;
  std::shared_ptr<const LocalInfo> local;
  std::shared_ptr<const Basis> warm;
  int branch_var = -1;
  BranchDir dir = BranchDir::Down;
  double frac = 0.0;
  double parent_obj = 0.0;
};

constexpr double kCutoffTol = 1e-6;

class MipSearch {
 public:
  MipSearch(const Instance& instance, const SolveConfig& config)
      : inst_(instance), cfg_(config), propagator_(instance), graph_(instance.num_vars()),
        scratch_(instance.num_vars()), global_base_(instance), stats_(instance.num_vars()) {
    pure_ip_ = instance.num_integer() == instance.num_vars();
  }

  SolveResult run();

 private:
  enum class BoxStatus { Ok, Infeasible, GlobalInfeasible };
  enum class Verdict { Leaf, Branch };

  bool rebuild_global();
  std::vector<const LearnedConstraint*> global_view() const;
  BoxStatus prepare_box(const Node& node, BoundBox& box, bool record_inference);
  void learn_global(const ConflictAnalysis& analysis, const BoundBox& box);
  Verdict assess(Node& node, const LpResult& lp, bool first, NodeEvent& ev,
                 double& bound);
  std::vector<Node> process(Node node);
  std::vector<Node> branch(const Node& node, const BoundBox& box, const LpResult& lp, double bound,
                           NodeEvent& ev);
  int strong_branching_choice(const std::vector<int>& fractional, const BoundBox& box,
                              const LpResult& lp);
  void run_rapid(Node& node, BoundBox& box, const LpResult& lp, double bound, NodeEvent& ev,
                 bool& pruned, bool& changed);
  double open_min() const {
    return open_.empty() ? kInf : open_.begin()->first.first;
  }
  double cutoff() const { return stats_.incumbent_value; }
  void leaf(LeafKind kind, NodeEvent& ev, const char* action) {
    record_leaf(stats_, kind);
    ev.action = action;
  }
  void emit(NodeEvent ev) {
    if (cfg_.collect_events) result_.events.push_back(std::move(ev));
  }
  bool time_up() const {
    return std::chrono::duration<double>(Clock::now() - start_).count() >= cfg_.time_limit;
  }

  const Instance& inst_;
  const SolveConfig& cfg_;
  Propagator propagator_;
  ConflictGraph graph_;
  ConflictGraph scratch_;
  bool pure_ip_ = true;

  BoundBox global_base_;
  BoundBox global_root_;
  bool global_dirty_ = true;
  bool global_infeasible_ = false;
  bool unbounded_ = false;
  std::vector<LearnedConstraint> global_;

  SearchStats stats_;
  std::map<std::pair<double, int>, Node> open_;
  int next_id_ = 1;
  Clock::time_point start_;
  SolveResult result_;
};

std::vector<const LearnedConstraint*> MipSearch::global_view() const {
  std::vector<const LearnedConstraint*> v;
  v.reserve(global_.size());
  for (const auto& c : global_) v.push_back(&c);
  return v;
}

bool MipSearch::rebuild_global() {
  global_root_ = global_base_;
  graph_.reset();
  const auto res = propagator_.run(global_root_, graph_, global_view());
  global_dirty_ = false;
  if (res.outcome == PropagationOutcome::Infeasible) {
    global_infeasible_ = true;
    return false;
  }
  return true;
}

void MipSearch::learn_global(const ConflictAnalysis& analysis, const BoundBox& box) {
  LearnedConstraint lc;
  lc.disjunction = analysis.conflict;
  lc.linear = to_knapsack(lc.disjunction, global_base_);
  lc.scope = ConstraintScope::Global;
  lc.cutoff = cutoff();
  stats_.vsids.bump(lc.disjunction);
  if (cfg_.audit) {
    result_.traces.push_back(
        {analysis.conflict, analysis.literal_levels, analysis.failure_level, box, cutoff(), true});
    result_.learned.push_back({lc, BoundBox(inst_), false});
  }
  if (lc.length() == 1) {
    try {
      upgrade_singleton(lc.disjunction, global_base_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyBox) throw;
      global_infeasible_ = true;
    }
  } else {
    global_.push_back(std::move(lc));
  }
  global_dirty_ = true;
}

MipSearch::BoxStatus MipSearch::prepare_box(const Node& node, BoundBox& box,
                                            bool record_inference) {
  const auto t0 = Clock::now();
  struct Timer {
    Clock::time_point t0;
    double& acc;
    ~Timer() { acc += std::chrono::duration<double>(Clock::now() - t0).count(); }
  } timer{t0, stats_.switching_seconds};

  if (global_infeasible_) return BoxStatus::GlobalInfeasible;
  if (global_dirty_ && !rebuild_global()) return BoxStatus::GlobalInfeasible;
  box = global_root_;
  graph_.reset();
  const auto view = global_view();

  // Path decisions with recorded implications: failures here give global
  // conflicts.
  for (std::size_t k = 0; k < node.path.size(); ++k) {
    const Decision& d = node.path[k];
    graph_.push_level();
    const double other = box.bound(d.var, opposite(d.side));
    if (d.side == Side::Lower ? d.value > other : d.value < other) return BoxStatus::Infeasible;
    if (box.tighten(d.var, d.side, d.value)) {
      graph_.record(d.var, d.side, d.value, Reason::branching(), std::span<const int>());
    }
    const std::size_t before = graph_.trail().size();
    const auto res = propagator_.run(box, graph_, view);
    if (record_inference && k + 1 == node.path.size()) {
      const auto split = static_cast<long long>(d.side == Side::Upper ? d.value : d.value - 1.0);
      stats_.inference.add(d.var, split, d.side == Side::Upper ? BranchDir::Down : BranchDir::Up,
                           graph_.trail().size() - before);
    }
    if (res.outcome == PropagationOutcome::Infeasible) {
      const ConflictAnalysis analysis = analyze_1uip(graph_, inst_);
      if (analysis.status == AnalysisStatus::ScopeInfeasible) {
        global_infeasible_ = true;
        return BoxStatus::GlobalInfeasible;
      }
      if (analysis.status == AnalysisStatus::Conflict) learn_global(analysis, box);
      return BoxStatus::Infeasible;
    }
  }

  // Subtree-local Rapid Learning information of the ancestors.
  std::vector<const LocalInfo*> chain;
  for (const LocalInfo* p = node.local.get(); p; p = p->parent.get()) chain.push_back(p);
  if (chain.empty()) return BoxStatus::Ok;
  std::reverse(chain.begin(), chain.end());
  auto all = view;
  for (const LocalInfo* info : chain) {
    for (const auto& [var, side, value] : info->bounds) {
      const double other = box.bound(var, opposite(side));
      if (side == Side::Lower ? value > other : value < other) return BoxStatus::Infeasible;
      box.tighten(var, side, value);
    }
    for (const auto& c : info->constraints) all.push_back(&c);
  }
  scratch_.reset();
  const auto res = propagator_.run(box, scratch_, all);
  return res.outcome == PropagationOutcome::Infeasible ? BoxStatus::Infeasible : BoxStatus::Ok;
}

MipSearch::Verdict MipSearch::assess(Node& node, const LpResult& lp,
                                     bool first, NodeEvent& ev, double& bound) {
  switch (lp.status) {
    case LpStatus::Infeasible:
      leaf(LeafKind::Infeasible, ev, "infeasible");
      return Verdict::Leaf;
    case LpStatus::Unbounded:
      unbounded_ = true;
      ev.action = "unbounded";
      return Verdict::Leaf;
    case LpStatus::IterationLimit:
      bound = node.lower_bound;
      ev.bound = bound;
      return Verdict::Branch;
    case LpStatus::Optimal:
      break;
  }
  if (first && node.branch_var >= 0) {
    stats_.update_pseudocost(node.branch_var, node.dir, lp.objective - node.parent_obj, node.frac);
  }
  bound = std::max(lp.objective, node.lower_bound);
  ev.bound = bound;
  if (node.id == 0 && first) stats_.root_dual_bound = bound;
  if (bound >= cutoff() - kCutoffTol) {
    leaf(LeafKind::Cutoff, ev, "cutoff");
    return Verdict::Leaf;
  }
  std::vector<double> x = lp.primal;
  bool integral = true;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!inst_.is_integer(j)) continue;
    if (!is_integral(x[j])) {
      integral = false;
      break;
    }
    x[j] = std::round(x[j]);
  }
  if (!integral) return Verdict::Branch;
  const double value = inst_.evaluate(x);
  if (inst_.is_feasible(x)) {
    if (value < cutoff() - kCutoffTol) {
      record_leaf(stats_, LeafKind::Improving, x, value);
      ev.action = "incumbent";
    } else {
      leaf(LeafKind::Cutoff, ev, "cutoff");
    }
    return Verdict::Leaf;
  }
  return Verdict::Branch;  // rounding broke feasibility: keep splitting
}

int MipSearch::strong_branching_choice(const std::vector<int>& fractional, const BoundBox& box,
                                       const LpResult& lp) {
  std::vector<std::pair<double, int>> ranked;
  for (int j : fractional) ranked.emplace_back(hybrid_branching_score(j, lp.primal[j], stats_), j);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (ranked.size() > cfg_.strong_branch_candidates) ranked.resize(cfg_.strong_branch_candidates);
  int best = -1;
  double best_score = -1.0;
  for (const auto& [score, j] : ranked) {
    (void)score;
    StrongBranchTally tally;
    const StrongBranchResult sb = strong_branch(inst_, box, j, lp, tally);
    stats_.sb_no_improvement += tally.no_improvement;
    stats_.sb_objective_changed += tally.objective_changed;
    stats_.iter_lp += sb.iterations;
    const double x = lp.primal[j];
    const double fd = x - std::floor(x);
    const double fu = std::ceil(x) - x;
    double gd = 1e6, gu = 1e6;  // infeasible child
    if (sb.down) {
      gd = std::max(0.0, *sb.down - lp.objective);
      stats_.update_pseudocost(j, BranchDir::Down, gd, fd);
    }
    if (sb.up) {
      gu = std::max(0.0, *sb.up - lp.objective);
      stats_.update_pseudocost(j, BranchDir::Up, gu, fu);
    }
    const double s = std::max(gd, 1e-6) * std::max(gu, 1e-6);
    if (s > best_score) {
      best_score = s;
      best = j;
    }
  }
  return best;
}

std::vector<Node> MipSearch::branch(const Node& node, const BoundBox& box, const LpResult& lp,
                                    double bound, NodeEvent& ev) {
  std::vector<int> fractional;
  if (lp.status == LpStatus::Optimal) {
    for (std::size_t j = 0; j < inst_.num_vars(); ++j) {
      if (inst_.is_integer(j) && !is_integral(lp.primal[j])) fractional.push_back(static_cast<int>(j));
    }
  }
  int var = -1;
  double value = 0.0;
  bool informative = true;
  if (fractional.empty()) {
    // No usable LP point: split the first unfixed integer domain in half.
    for (std::size_t j = 0; j < inst_.num_vars(); ++j) {
      if (inst_.is_integer(j) && !box.is_fixed(j)) {
        var = static_cast<int>(j);
        value = std::floor((box.lower(j) + box.upper(j)) / 2.0) + 0.5;
        break;
      }
    }
    informative = false;
    if (var < 0) {
      leaf(LeafKind::Infeasible, ev, "infeasible");
      return {};
    }
  } else {
    if (node.depth <= cfg_.strong_branch_max_depth && cfg_.strong_branch_candidates > 0) {
      var = strong_branching_choice(fractional, box, lp);
    } else {
      var = select_branching(fractional, lp.primal, stats_);
    }
    value = lp.primal[var];
  }

  ev.action = "branch";
  ev.branch = BranchRecord{var, value};
  const double fl = std::floor(value);
  auto warm = lp.status == LpStatus::Optimal ? std::make_shared<const Basis>(lp.basis) : nullptr;
  auto make_child = [&](Side side) {
    Node c;
    c.id = next_id_++;
    c.parent = node.id;
    c.depth = node.depth + 1;
    c.path = node.path;
    c.path.push_back({var, side, side == Side::Upper ? fl : fl + 1.0});
    c.lower_bound = bound;
    c.local = node.local;
    c.warm = warm;
    c.branch_var = informative ? var : -1;
    c.dir = side == Side::Upper ? BranchDir::Down : BranchDir::Up;
    c.frac = side == Side::Upper ? value - fl : fl + 1.0 - value;
    c.parent_obj = lp.objective;
    return c;
  };
  Node down = make_child(Side::Upper);
  Node up = make_child(Side::Lower);
  std::vector<Node> children;
  if (value - fl < 0.5) {
    children.push_back(std::move(down));
    children.push_back(std::move(up));
  } else {
    children.push_back(std::move(up));
    children.push_back(std::move(down));
  }
  return children;
}

void MipSearch::run_rapid(Node& node, BoundBox& box, const LpResult& lp, double bound,
                          NodeEvent& ev, bool& pruned, bool& changed) {
  pruned = changed = false;
  if (cfg_.rapid.mode == RapidMode::Off || !pure_ip_ || lp.status != LpStatus::Optimal) return;
  const DegeneracyInfo deg = measure_degeneracy(lp, inst_.num_rows());
  stats_.dual_bound = std::min(open_min(), bound);
  const RunDecision decision = decide_run(inst_, box, node.depth, stats_, deg, cfg_.rapid);
  if (decision.depth_ok && cfg_.rapid.mode == RapidMode::Local) {
    for (Criterion c : kAllCriteria) {
      const auto i = static_cast<std::size_t>(c);
      if (!cfg_.rapid.criteria[i] || !decision.report.fired[i]) continue;
      if (node.depth == 0 && !is_root_criterion(c)) continue;
      ++result_.criterion_counts[i];
      ev.criteria.emplace_back(to_string(c));
    }
  }
  if (!decision.run) return;

  ++result_.rl_calls;
  CpConfig cp = cp_config_for(node.id, stats_, cfg_.rapid);
  cp.record_traces = cfg_.audit;
  const CpOutcome outcome = cp_search(inst_, box, cp);
  if (cfg_.audit) {
    for (const ConflictTrace& t : outcome.traces) {
      result_.traces.push_back(t);
      LearnedConstraint lc;
      lc.disjunction = t.conflict;
      lc.scope = ConstraintScope::Local;
      lc.node = node.id;
      lc.cutoff = t.cutoff;
      result_.learned.push_back({lc, box, true});
    }
  }

  const bool at_root = node.id == 0;
  TransferSummary summary;
  std::vector<LearnedConstraint> local_sink;
  if (at_root) {
    const std::size_t before = global_.size();
    summary = transfer(outcome, inst_, node.id, true, global_base_, global_, stats_, cfg_.rapid);
    if (cfg_.audit) {
      for (std::size_t k = before; k < global_.size(); ++k)
        result_.learned.push_back({global_[k], BoundBox(inst_), false});
    }
    global_dirty_ = true;
  } else {
    BoundBox tightened = box;
    summary = transfer(outcome, inst_, node.id, false, tightened, local_sink, stats_, cfg_.rapid);
    auto info = std::make_shared<LocalInfo>();
    info->parent = node.local;
    for (std::size_t j = 0; j < box.size(); ++j) {
      const int v = static_cast<int>(j);
      if (tightened.lower(j) > box.lower(j)) info->bounds.emplace_back(v, Side::Lower, tightened.lower(j));
      if (tightened.upper(j) < box.upper(j)) info->bounds.emplace_back(v, Side::Upper, tightened.upper(j));
    }
    if (cfg_.audit) {
      for (const auto& c : local_sink) result_.learned.push_back({c, box, false});
    }
    info->constraints = std::move(local_sink);
    if (!info->bounds.empty() || !info->constraints.empty()) node.local = std::move(info);
  }
  ev.rl = summary;
  if (summary.node_pruned) {
    pruned = true;
    ev.action = "rl_pruned";
    return;
  }
  changed = summary.bounds_tightened > 0 || summary.conflicts_transferred > 0 ||
            summary.solution_installed;
}

std::vector<Node> MipSearch::process(Node node) {
  NodeEvent ev;
  ev.id = node.id;
  ev.parent = node.parent;
  ev.depth = node.depth;
  ev.bound = node.lower_bound;

  // global state after this node: open nodes plus the new children
  auto finish = [&](std::vector<Node> children) {
    double db = open_min();
    for (const Node& c : children) db = std::min(db, c.lower_bound);
    if (open_.empty() && children.empty()) db = cutoff();
    ev.dual_bound = std::min(db, cutoff());
    ev.incumbent = cutoff();
    emit(std::move(ev));
    return children;
  };

  if (node.lower_bound >= cutoff() - kCutoffTol) {
    leaf(LeafKind::Cutoff, ev, "cutoff");
    return finish({});
  }
  BoundBox box;
  BoxStatus st = prepare_box(node, box, true);
  if (st != BoxStatus::Ok) {
    leaf(LeafKind::Infeasible, ev, "infeasible");
    return finish({});
  }
  LpResult lp = solve_lp(inst_, box, node.warm.get());
  stats_.iter_lp += lp.iterations;
  double bound = node.lower_bound;
  if (assess(node, lp, true, ev, bound) == Verdict::Leaf) return finish({});

  bool pruned = false, changed = false;
  run_rapid(node, box, lp, bound, ev, pruned, changed);
  if (pruned) return finish({});
  if (changed) {
    if (bound >= cutoff() - kCutoffTol) {
      leaf(LeafKind::Cutoff, ev, "cutoff");
      return finish({});
    }
    st = prepare_box(node, box, false);
    if (st != BoxStatus::Ok) {
      leaf(LeafKind::Infeasible, ev, "infeasible");
      return finish({});
    }
    const Basis previous = lp.basis;
    lp = solve_lp(inst_, box, &previous);
    stats_.iter_lp += lp.iterations;
    if (assess(node, lp, false, ev, bound) == Verdict::Leaf) return finish({});
  }
  return finish(branch(node, box, lp, bound, ev));
}

SolveResult MipSearch::run() {
  start_ = Clock::now();
  validate(cfg_.rapid);
  SolveStatus limit_status = SolveStatus::Optimal;
  bool limit_hit = false;

  if (!rebuild_global()) {
    result_.status = SolveStatus::Infeasible;
    result_.dual_bound = kInf;
    result_.stats = stats_;
    return result_;
  }

  Node root;
  if (cfg_.node_limit == 0) {
    BoundBox box;
    if (prepare_box(root, box, false) == BoxStatus::Ok) {
      const LpResult lp = solve_lp(inst_, box);
      stats_.iter_lp += lp.iterations;
      if (lp.status == LpStatus::Optimal) {
        stats_.root_dual_bound = stats_.dual_bound = lp.objective;
        result_.status = SolveStatus::NodeLimit;
        result_.dual_bound = lp.objective;
      } else if (lp.status == LpStatus::Unbounded) {
        result_.status = SolveStatus::Unbounded;
      } else if (lp.status == LpStatus::IterationLimit) {
        result_.status = SolveStatus::NodeLimit;
      } else {
        result_.status = SolveStatus::Infeasible;
        result_.dual_bound = kInf;
      }
    } else {
      result_.status = SolveStatus::Infeasible;
      result_.dual_bound = kInf;
    }
    result_.stats = stats_;
    return result_;
  }

  std::optional<Node> next = std::move(root);
  int plunge = 0;
  while (true) {
    if (global_infeasible_ || unbounded_) {
      open_.clear();
      next.reset();
      break;
    }
    if (!next) {
      if (open_.empty()) break;
      auto it = open_.begin();
      next = std::move(it->second);
      open_.erase(it);
      plunge = 0;
    }
    if (result_.nodes >= cfg_.node_limit || time_up()) {
      limit_hit = true;
      limit_status = result_.nodes >= cfg_.node_limit ? SolveStatus::NodeLimit : SolveStatus::TimeLimit;
      break;
    }
    Node node = std::move(*next);
    next.reset();
    ++result_.nodes;
    std::vector<Node> children = process(std::move(node));
    if (children.empty()) continue;
    if (plunge < cfg_.plunge_limit) {
      ++plunge;
      Node second = std::move(children[1]);
      open_.emplace(std::make_pair(second.lower_bound, second.id), std::move(second));
      next = std::move(children[0]);
    } else {
      for (Node& c : children) open_.emplace(std::make_pair(c.lower_bound, c.id), std::move(c));
    }
  }

  if (stats_.incumbent) {
    result_.solution = stats_.incumbent;
    result_.objective = stats_.incumbent_value;
  }
  if (unbounded_) {
    result_.status = SolveStatus::Unbounded;
    result_.dual_bound = -kInf;
  } else if (limit_hit) {
    result_.status = limit_status;
    double db = open_min();
    if (next) db = std::min(db, next->lower_bound);
    result_.dual_bound = std::min(db, cutoff());
  } else {
    result_.status = stats_.incumbent ? SolveStatus::Optimal : SolveStatus::Infeasible;
    result_.dual_bound = stats_.incumbent ? stats_.incumbent_value : kInf;
  }
  stats_.dual_bound = result_.dual_bound;
  result_.stats = stats_;
  result_.wall_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
  return result_;
}

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

SolveResult solve(const Instance& instance, const SolveConfig& config) {
  MipSearch search(instance, config);
  return search.run();
}

std::string events_to_jsonl(const std::vector<NodeEvent>& events) {
  std::string out;
  for (const NodeEvent& e : events) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["parent"] = e.parent;
    j["depth"] = e.depth;
    j["action"] = e.action;
    j["bound"] = number_or_null(e.bound);
    j["dual_bound"] = number_or_null(e.dual_bound);
    j["incumbent"] = number_or_null(e.incumbent);
    if (e.branch) {
      j["branch"] = {{"var", e.branch->var}, {"value", e.branch->value}};
    } else {
      j["branch"] = nullptr;
    }
    j["criteria"] = e.criteria;
    if (e.rl) {
      const TransferSummary& s = *e.rl;
      j["rl"] = {{"status", std::string(to_string(s.status))},
                 {"cp_nodes", s.cp_nodes},
                 {"conflicts_found", s.conflicts_found},
                 {"conflicts_transferred", s.conflicts_transferred},
                 {"bounds_tightened", s.bounds_tightened},
                 {"solution_installed", s.solution_installed},
                 {"solution_rejected", s.solution_rejected},
                 {"node_pruned", s.node_pruned}};
    } else {
      j["rl"] = nullptr;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::uint64_t branch_hash(const std::vector<NodeEvent>& events) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const NodeEvent& e : events) {
    if (!e.branch) continue;
    mix(static_cast<std::uint64_t>(e.branch->var));
    mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(e.branch->value))));
  }
  return h;
}

}  // namespace rapidip
