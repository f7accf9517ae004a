#include "rapidip/rapid.hpp"

#include <algorithm>
#include <cmath>

#include "rapidip/error.hpp"

namespace rapidip {

namespace {

constexpr std::array<std::string_view, 6> kCriterionNames{"dualbound", "leaves", "degeneracy",
                                                           "obj",       "nsols",  "sblps"};

std::size_t idx(Criterion c) { return static_cast<std::size_t>(c); }

}  // namespace

std::string_view to_string(Criterion c) { return kCriterionNames[idx(c)]; }

std::optional<Criterion> criterion_from_string(std::string_view name) {
  for (Criterion c : kAllCriteria) {
    if (kCriterionNames[idx(c)] == name) return c;
  }
  return std::nullopt;
}

bool is_root_criterion(Criterion c) {
  return c == Criterion::Degeneracy || c == Criterion::Obj || c == Criterion::NSols;
}

CriterionSet parse_criteria(std::string_view list) {
  CriterionSet set{};
  if (list.empty() || list == "none") return set;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    std::size_t end = list.find(',', pos);
    if (end == std::string_view::npos) end = list.size();
    const std::string_view name = list.substr(pos, end - pos);
    const auto c = criterion_from_string(name);
    if (!c) throw Error(ErrorCode::InvalidConfig, "unknown criterion '" + std::string(name) + "'");
    set[idx(*c)] = true;
    pos = end + 1;
  }
  return set;
}

std::string format_criteria(const CriterionSet& set) {
  std::string out;
  for (Criterion c : kAllCriteria) {
    if (!set[idx(c)]) continue;
    if (!out.empty()) out += ',';
    out += to_string(c);
  }
  return out.empty() ? "none" : out;
}

std::string_view to_string(RapidMode mode) {
  switch (mode) {
    case RapidMode::Off: return "off";
    case RapidMode::Root: return "root";
    case RapidMode::Local: return "local";
  }
  return "?";
}

std::optional<RapidMode> rapid_mode_from_string(std::string_view name) {
  if (name == "off") return RapidMode::Off;
  if (name == "root") return RapidMode::Root;
  if (name == "local") return RapidMode::Local;
  return std::nullopt;
}

void validate(const RapidConfig& config) {
  if (config.f < 1) throw Error(ErrorCode::InvalidConfig, "frequency f must be >= 1");
  if (!(config.beta > 1.0) || !std::isfinite(config.beta))
    throw Error(ErrorCode::InvalidConfig, "frequency base beta must be > 1");
  if (!(config.ratio_threshold > 0.0) || !(config.degeneracy_share_threshold > 0.0) ||
      !(config.face_ratio_threshold > 0.0))
    throw Error(ErrorCode::InvalidConfig, "criterion thresholds must be positive");
  if (!(config.max_conflict_frac > 0.0 && config.max_conflict_frac <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "max conflict fraction must lie in (0, 1]");
}

bool is_rl_depth(long long depth, long long f, double beta) {
  if (depth == 0) return true;
  if (depth < 0 || f < 1 || !(beta > 1.0)) return false;
  const auto d = static_cast<double>(depth);
  for (double t = static_cast<double>(f); t <= d; t *= beta) {
    if (t == d) return true;
  }
  return false;
}

double guarded_ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return num == 0 ? 0.0 : kInf;
  return static_cast<double>(num) / static_cast<double>(den);
}

CriterionReport evaluate_criteria(const Instance& instance, const BoundBox& node_box,
                                  const SearchStats& stats, const DegeneracyInfo& degeneracy,
                                  const RapidConfig& config) {
  CriterionReport r;
  r.dual_bound_delta = std::isfinite(stats.dual_bound) && std::isfinite(stats.root_dual_bound)
                           ? std::abs(stats.dual_bound - stats.root_dual_bound)
                           : (stats.dual_bound == stats.root_dual_bound ? 0.0 : kInf);
  r.fired[idx(Criterion::DualBound)] = r.dual_bound_delta <= 1e-9;

  r.leaf_ratio = guarded_ratio(stats.leaves_infeasible, stats.leaves_cutoff);
  r.fired[idx(Criterion::Leaves)] = r.leaf_ratio > config.ratio_threshold;

  r.degeneracy_share = degeneracy.degenerate_share;
  r.face_ratio = degeneracy.face_var_constraint_ratio;
  r.fired[idx(Criterion::Degeneracy)] = r.degeneracy_share > config.degeneracy_share_threshold ||
                                         r.face_ratio > config.face_ratio_threshold;

  for (std::size_t j = 0; j < instance.num_vars(); ++j) {
    if (instance.objective()[j] != 0.0 && !node_box.is_fixed(j)) ++r.objective_support;
  }
  r.fired[idx(Criterion::Obj)] = r.objective_support <= config.obj_support_extra;

  r.n_solutions = stats.n_solutions;
  r.fired[idx(Criterion::NSols)] = stats.n_solutions == 0;

  r.sb_ratio = guarded_ratio(stats.sb_no_improvement, stats.sb_objective_changed);
  r.fired[idx(Criterion::SbLps)] = stats.sb_no_improvement + stats.sb_objective_changed > 0 &&
                                    r.sb_ratio > config.ratio_threshold;
  return r;
}

RunDecision decide_run(const Instance& instance, const BoundBox& node_box, int depth,
                       const SearchStats& stats, const DegeneracyInfo& degeneracy,
                       const RapidConfig& config) {
  RunDecision out;
  out.report = evaluate_criteria(instance, node_box, stats, degeneracy, config);
  switch (config.mode) {
    case RapidMode::Off:
      return out;
    case RapidMode::Root:
      out.depth_ok = depth == 0;
      out.run = out.depth_ok;
      return out;
    case RapidMode::Local:
      break;
  }
  out.depth_ok = is_rl_depth(depth, config.f, config.beta);
  if (!out.depth_ok) return out;
  for (Criterion c : kAllCriteria) {
    if (!config.criteria[idx(c)]) continue;
    if (depth == 0 && !is_root_criterion(c)) continue;
    if (out.report.fired_on(c)) out.run = true;
  }
  return out;
}

CpConfig cp_config_for(int node_id, const SearchStats& stats, const RapidConfig& config) {
  CpConfig cp;
  cp.node_limit = node_limit_from_iters(stats.iter_lp);
  cp.max_conflict_frac = config.max_conflict_frac;
  cp.seed = config.base_seed ^ static_cast<std::uint64_t>(node_id);
  cp.incumbent_bound = stats.incumbent_value;
  cp.initial_stats = &stats.inference;
  return cp;
}

TransferSummary transfer(const CpOutcome& outcome, const Instance& instance, int node_id,
                         bool at_root, BoundBox& node_box, std::vector<LearnedConstraint>& sink,
                         SearchStats& stats, const RapidConfig& config) {
  TransferSummary s;
  s.node_id = node_id;
  s.status = outcome.status;
  s.cp_nodes = outcome.nodes;
  s.conflicts_found = outcome.conflicts_found;

  std::vector<const LearnedConstraint*> ranked;
  for (const auto& c : outcome.conflicts) ranked.push_back(&c);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto* a, const auto* b) {
    if (a->is_linear() != b->is_linear()) return a->is_linear();
    return a->length() < b->length();
  });
  if (ranked.size() > config.max_transferred_conflicts) ranked.resize(config.max_transferred_conflicts);
  for (const auto* c : ranked) {
    LearnedConstraint lc = *c;
    lc.scope = at_root ? ConstraintScope::Global : ConstraintScope::Local;
    lc.node = node_id;
    stats.vsids.bump(lc.disjunction);
    sink.push_back(std::move(lc));
  }
  s.conflicts_transferred = ranked.size();

  if (outcome.status == CpStatus::NodeLimitReached && outcome.box.size() == node_box.size()) {
    for (std::size_t j = 0; j < node_box.size(); ++j) {
      if (node_box.tighten(j, Side::Lower, outcome.box.lower(j))) ++s.bounds_tightened;
      if (node_box.tighten(j, Side::Upper, outcome.box.upper(j))) ++s.bounds_tightened;
    }
  }

  if (outcome.solution && outcome.solution_value < stats.incumbent_value - 1e-6) {
    if (instance.is_feasible(*outcome.solution)) {
      record_leaf(stats, LeafKind::Improving, *outcome.solution, outcome.solution_value);
      s.solution_installed = true;
    } else {
      s.solution_rejected = true;
    }
  }

  stats.inference.merge(outcome.inference_stats);

  // A rejected solution means the CP scope disagrees with the instance, so its
  // optimality claim is not trusted either.
  if (outcome.status != CpStatus::NodeLimitReached && !s.solution_rejected) {
    s.node_pruned = true;
    if (outcome.status == CpStatus::SolvedInfeasible) ++stats.leaves_infeasible;
  }
  return s;
}

}  // namespace rapidip
