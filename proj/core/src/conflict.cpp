#include "rapidip/conflict.hpp"

#include <algorithm>
#include <sstream>

#include "rapidip/error.hpp"

namespace rapidip {

ConflictGraph::ConflictGraph(std::size_t num_vars)
    : latest_lower_(num_vars, -1), latest_upper_(num_vars, -1) {
  ante_begin_.push_back(0);
}

void ConflictGraph::reset() {
  trail_.clear();
  ante_begin_.assign(1, 0);
  ante_flat_.clear();
  std::fill(latest_lower_.begin(), latest_lower_.end(), -1);
  std::fill(latest_upper_.begin(), latest_upper_.end(), -1);
  false_antecedents_.clear();
  failure_reason_ = Reason{};
  has_failure_ = false;
  level_ = 0;
}

void ConflictGraph::resolve(std::span<const BoundRef> reads, std::vector<int>& out) const {
  for (const BoundRef& ref : reads) {
    const int p = latest(ref.var, ref.side);
    if (p >= 0 && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
}

int ConflictGraph::record(int var, Side side, double value, Reason reason,
                          std::span<const int> antecedents) {
  const int pos = static_cast<int>(trail_.size());
  trail_.push_back({var, side, value, level_, reason, pos});
  for (int a : antecedents) {
    if (a >= 0 && a < pos) ante_flat_.push_back(a);
  }
  ante_begin_.push_back(static_cast<int>(ante_flat_.size()));
  (side == Side::Lower ? latest_lower_ : latest_upper_)[var] = pos;
  return pos;
}

int ConflictGraph::record(int var, Side side, double value, Reason reason,
                          std::span<const BoundRef> reads) {
  std::vector<int> ante;
  resolve(reads, ante);
  return record(var, side, value, reason, std::span<const int>(ante));
}

void ConflictGraph::record_failure(Reason reason, std::span<const int> antecedents) {
  has_failure_ = true;
  failure_reason_ = reason;
  false_antecedents_.assign(antecedents.begin(), antecedents.end());
}

void ConflictGraph::record_failure(Reason reason, std::span<const BoundRef> reads) {
  std::vector<int> ante;
  resolve(reads, ante);
  record_failure(reason, std::span<const int>(ante));
}

std::span<const int> ConflictGraph::antecedents(int position) const {
  const int b = ante_begin_[position];
  const int e = ante_begin_[position + 1];
  return std::span<const int>(ante_flat_.data() + b, static_cast<std::size_t>(e - b));
}

std::size_t ConflictGraph::changes_at_level(int level) const {
  return static_cast<std::size_t>(std::count_if(
      trail_.begin(), trail_.end(), [level](const BoundChange& c) { return c.level == level; }));
}

LiteralState literal_state(const Literal& lit, const BoundBox& box) {
  if (lit.side == Side::Lower) {
    if (box.lower(lit.var) >= lit.bound) return LiteralState::True;
    if (box.upper(lit.var) < lit.bound) return LiteralState::False;
  } else {
    if (box.upper(lit.var) <= lit.bound) return LiteralState::True;
    if (box.lower(lit.var) > lit.bound) return LiteralState::False;
  }
  return LiteralState::Open;
}

bool BoundDisjunction::normalize() {
  std::sort(literals_.begin(), literals_.end(), [](const Literal& a, const Literal& b) {
    if (a.var != b.var) return a.var < b.var;
    return a.side < b.side;
  });
  std::vector<Literal> merged;
  for (const Literal& lit : literals_) {
    if (!merged.empty() && merged.back().var == lit.var && merged.back().side == lit.side) {
      Literal& keep = merged.back();
      keep.bound = lit.side == Side::Lower ? std::min(keep.bound, lit.bound)
                                           : std::max(keep.bound, lit.bound);
    } else {
      merged.push_back(lit);
    }
  }
  literals_ = std::move(merged);
  for (std::size_t k = 1; k < literals_.size(); ++k) {
    if (literals_[k].var == literals_[k - 1].var) return false;
  }
  return true;
}

std::string BoundDisjunction::to_string() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < literals_.size(); ++k) {
    if (k) os << " | ";
    const Literal& l = literals_[k];
    os << "x" << l.var << (l.side == Side::Lower ? " >= " : " <= ") << l.bound;
  }
  return os.str();
}

bool check_disjunction(const BoundDisjunction& d, std::span<const double> point) {
  return std::any_of(d.literals().begin(), d.literals().end(),
                     [&](const Literal& l) { return l.holds(point[l.var]); });
}

bool disjunction_violated(const BoundDisjunction& d, const BoundBox& box) {
  return std::all_of(d.literals().begin(), d.literals().end(), [&](const Literal& l) {
    return literal_state(l, box) == LiteralState::False;
  });
}

ConflictAnalysis analyze_1uip(const ConflictGraph& graph, const Instance& instance) {
  ConflictAnalysis result;
  const auto& trail = graph.trail();
  int deepest = 0;
  for (int p : graph.false_antecedents()) deepest = std::max(deepest, trail[p].level);
  result.failure_level = deepest;
  if (deepest == 0) {
    result.status = AnalysisStatus::ScopeInfeasible;
    return result;
  }

  std::vector<char> marked(trail.size(), 0);
  std::vector<int> cut;
  int open_at_deepest = 0;
  auto mark = [&](int p) {
    if (marked[p]) return;
    marked[p] = 1;
    const int lvl = trail[p].level;
    if (lvl == 0) return;
    if (lvl == deepest) {
      ++open_at_deepest;
    } else {
      cut.push_back(p);
    }
  };
  for (int p : graph.false_antecedents()) mark(p);

  for (int p = static_cast<int>(trail.size()) - 1; p >= 0 && open_at_deepest > 0; --p) {
    if (!marked[p] || trail[p].level != deepest) continue;
    const auto ante = graph.antecedents(p);
    const bool expandable = trail[p].reason.kind != ReasonKind::Branching && !ante.empty();
    if (open_at_deepest == 1 || !expandable) {
      cut.push_back(p);
      --open_at_deepest;
      continue;
    }
    --open_at_deepest;
    for (int a : ante) mark(a);
  }

  std::vector<Literal> literals;
  std::vector<std::pair<Literal, int>> origin;
  for (int p : cut) {
    const BoundChange& change = trail[p];
    if (!instance.is_integer(change.var)) {
      result.status = AnalysisStatus::AbortContinuous;
      return result;
    }
    const Literal lit = change.side == Side::Lower
                            ? Literal{change.var, Side::Upper, change.value - 1.0}
                            : Literal{change.var, Side::Lower, change.value + 1.0};
    literals.push_back(lit);
    origin.emplace_back(lit, change.level);
  }

  BoundDisjunction conflict(std::move(literals));
  if (!conflict.normalize()) {
    result.status = AnalysisStatus::Discarded;
    return result;
  }
  for (const Literal& lit : conflict.literals()) {
    int level = 0;
    for (const auto& [l, lvl] : origin) {
      if (l == lit) level = std::max(level, lvl);
    }
    result.literal_levels.push_back(level);
  }
  result.conflict = std::move(conflict);
  result.status = AnalysisStatus::Conflict;
  return result;
}

std::optional<Row> to_knapsack(const BoundDisjunction& d, const BoundBox& reference) {
  if (d.empty()) return std::nullopt;
  Row row;
  double rhs = -1.0;
  bool all_lower = true;
  bool all_upper = true;
  bool all_binary = true;
  for (const Literal& lit : d.literals()) {
    const double l = reference.lower(lit.var);
    const double u = reference.upper(lit.var);
    if (!std::isfinite(l) || !std::isfinite(u)) return std::nullopt;
    if (l != 0.0 || u != 1.0) all_binary = false;
    if (lit.side == Side::Upper) {
      if (lit.bound != u - 1.0) return std::nullopt;
      row.index.push_back(lit.var);
      row.coef.push_back(1.0);
      rhs += u;
      all_lower = false;
    } else {
      if (lit.bound != l + 1.0) return std::nullopt;
      row.index.push_back(lit.var);
      row.coef.push_back(-1.0);
      rhs -= l;
      all_upper = false;
    }
  }
  for (std::size_t k = 1; k < row.index.size(); ++k) {
    if (row.index[k] == row.index[k - 1]) return std::nullopt;
  }
  row.rhs = rhs;
  row.name = "conflict";
  if (all_binary && all_lower) {
    row.kind = RowKind::SetCover;
  } else if (all_binary && all_upper) {
    row.kind = RowKind::Knapsack;
    row.weight_order.resize(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) row.weight_order[k] = static_cast<int>(k);
  }
  return row;
}

bool upgrade_singleton(const BoundDisjunction& d, BoundBox& box) {
  if (d.size() != 1)
    throw Error(ErrorCode::InvalidModel, "singleton upgrade needs exactly one literal");
  const Literal& lit = d.literals().front();
  return box.tighten(static_cast<std::size_t>(lit.var), lit.side, lit.bound);
}

}  // namespace rapidip
