#include "rapidip/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "rapidip/error.hpp"

namespace rapidip {

namespace {

double row_tolerance(double rhs) { return kFeasTol * std::max(1.0, std::abs(rhs)); }

// Bound that a coefficient reads for the minimum activity.
Side read_side(double a) { return a > 0.0 ? Side::Lower : Side::Upper; }

// Continuous bounds only move when the gain is worth a propagation round.
bool significant(double old_bound, double new_bound) {
  if (!std::isfinite(old_bound)) return true;
  return std::abs(new_bound - old_bound) > 1e-3 * std::max(1.0, std::abs(old_bound));
}

}  // namespace

RowPropagation propagate_linear_row(const Row& row, const BoundBox& box,
                                    std::span<const char> integer) {
  RowPropagation out;
  const std::size_t k = row.size();
  double finite_min = 0.0;
  int infinite_terms = 0;
  std::vector<double> contrib(k);
  for (std::size_t t = 0; t < k; ++t) {
    const double a = row.coef[t];
    const double b = a > 0.0 ? box.lower(row.index[t]) : box.upper(row.index[t]);
    if (!std::isfinite(b)) {
      contrib[t] = -kInf;
      ++infinite_terms;
    } else {
      contrib[t] = a * b;
      finite_min += contrib[t];
    }
  }

  if (infinite_terms == 0 && finite_min > row.rhs + row_tolerance(row.rhs)) {
    out.infeasible = true;
    for (std::size_t t = 0; t < k; ++t) out.failure.push_back({row.index[t], read_side(row.coef[t])});
    return out;
  }
  if (infinite_terms > 1) return out;

  for (std::size_t j = 0; j < k; ++j) {
    double residual;
    if (infinite_terms == 0) {
      residual = finite_min - contrib[j];
    } else if (contrib[j] == -kInf) {
      residual = finite_min;
    } else {
      continue;
    }
    const int var = row.index[j];
    const double a = row.coef[j];
    const double limit = (row.rhs - residual) / a;
    const bool is_int = integer[var] != 0;
    Deduction d{var, a > 0.0 ? Side::Upper : Side::Lower, 0.0, {}};
    if (a > 0.0) {
      double ub = is_int ? std::floor(limit + kIntTol) : limit;
      const double cur = box.upper(var);
      if (is_int ? ub >= cur : (ub >= cur || !significant(cur, ub))) continue;
      if (!is_int && ub < box.lower(var) && ub >= box.lower(var) - kFeasTol) ub = box.lower(var);
      d.value = ub;
    } else {
      double lb = is_int ? std::ceil(limit - kIntTol) : limit;
      const double cur = box.lower(var);
      if (is_int ? lb <= cur : (lb <= cur || !significant(cur, lb))) continue;
      if (!is_int && lb > box.upper(var) && lb <= box.upper(var) + kFeasTol) lb = box.upper(var);
      d.value = lb;
    }
    d.reason.reserve(k - 1);
    for (std::size_t t = 0; t < k; ++t) {
      if (t != j) d.reason.push_back({row.index[t], read_side(row.coef[t])});
    }
    out.deductions.push_back(std::move(d));
  }
  return out;
}

RowPropagation propagate_knapsack(const Row& row, const BoundBox& box) {
  RowPropagation out;
  const auto capacity = static_cast<long long>(std::floor(row.rhs + kFeasTol));
  long long used = 0;
  std::vector<BoundRef> at_one;
  for (std::size_t t = 0; t < row.size(); ++t) {
    const int var = row.index[t];
    if (box.lower(var) >= 1.0) {
      used += static_cast<long long>(row.coef[t]);
      at_one.push_back({var, Side::Lower});
    }
  }
  if (used > capacity) {
    out.infeasible = true;
    out.failure = std::move(at_one);
    return out;
  }
  for (int pos : row.weight_order) {
    const int var = row.index[pos];
    if (box.is_fixed(var)) continue;
    const auto weight = static_cast<long long>(row.coef[pos]);
    if (used + weight <= capacity) break;
    out.deductions.push_back({var, Side::Upper, 0.0, at_one});
  }
  return out;
}

namespace {

// Clause-like propagation shared by set-covering rows and bound disjunctions.
// `state(p)` classifies literal p, `falsifier(p)` names the bound that makes it
// false, `enforce(p)` is the deduction making it true.
template <class State, class Falsifier, class Enforce>
RowPropagation propagate_clause(int size, WatchState& w, State state, Falsifier falsifier,
                                Enforce enforce) {
  RowPropagation out;
  if (size == 0) {
    out.infeasible = true;
    return out;
  }
  if (w.first < 0 || w.first >= size) w.first = 0;
  if (size == 1) {
    w.second = -1;
  } else if (w.second < 0 || w.second >= size || w.second == w.first) {
    w.second = w.first == 0 ? 1 : 0;
  }

  auto replace = [&](int& watch, int other) {
    for (int p = 0; p < size; ++p) {
      if (p == other || p == watch) continue;
      if (state(p) != LiteralState::False) {
        watch = p;
        return;
      }
    }
  };

  if (state(w.first) == LiteralState::True) return out;
  if (w.second >= 0 && state(w.second) == LiteralState::True) return out;
  if (state(w.first) == LiteralState::False) replace(w.first, w.second);
  if (w.second >= 0 && state(w.second) == LiteralState::False) replace(w.second, w.first);

  const LiteralState s1 = state(w.first);
  const LiteralState s2 = w.second >= 0 ? state(w.second) : LiteralState::False;
  if (s1 == LiteralState::True || s2 == LiteralState::True) return out;
  if (s1 != LiteralState::False && s2 != LiteralState::False) return out;

  if (s1 == LiteralState::False && s2 == LiteralState::False) {
    out.infeasible = true;
    for (int p = 0; p < size; ++p) out.failure.push_back(falsifier(p));
    return out;
  }
  const int unit = s1 == LiteralState::False ? w.second : w.first;
  Deduction d = enforce(unit);
  for (int p = 0; p < size; ++p) {
    if (p != unit) d.reason.push_back(falsifier(p));
  }
  out.deductions.push_back(std::move(d));
  return out;
}

}  // namespace

RowPropagation propagate_setcover(const Row& row, const BoundBox& box, WatchState& watch) {
  const int size = static_cast<int>(row.size());
  auto state = [&](int p) {
    const int var = row.index[p];
    if (box.lower(var) >= 1.0) return LiteralState::True;
    if (box.upper(var) <= 0.0) return LiteralState::False;
    return LiteralState::Open;
  };
  auto falsifier = [&](int p) { return BoundRef{row.index[p], Side::Upper}; };
  auto enforce = [&](int p) { return Deduction{row.index[p], Side::Lower, 1.0, {}}; };
  return propagate_clause(size, watch, state, falsifier, enforce);
}

RowPropagation propagate_disjunction(const BoundDisjunction& d, const BoundBox& box,
                                     WatchState& watch) {
  const auto& lits = d.literals();
  const int size = static_cast<int>(lits.size());
  auto state = [&](int p) { return literal_state(lits[p], box); };
  auto falsifier = [&](int p) { return BoundRef{lits[p].var, opposite(lits[p].side)}; };
  auto enforce = [&](int p) { return Deduction{lits[p].var, lits[p].side, lits[p].bound, {}}; };
  return propagate_clause(size, watch, state, falsifier, enforce);
}

Propagator::Propagator(const Instance& instance)
    : instance_(&instance), row_watch_(instance.num_rows()) {}

RowPropagation Propagator::evaluate_row(const Row& row, const BoundBox& box,
                                        WatchState& watch) const {
  switch (row.kind) {
    case RowKind::Knapsack: return propagate_knapsack(row, box);
    case RowKind::SetCover: return propagate_setcover(row, box, watch);
    case RowKind::Linear: break;
  }
  return propagate_linear_row(row, box, instance_->integer_flags());
}

Propagator::Step Propagator::apply(const RowPropagation& rp, Reason reason, BoundBox& box,
                                   ConflictGraph& recorder, PropagationResult& result) {
  if (rp.infeasible) {
    recorder.record_failure(reason, std::span<const BoundRef>(rp.failure));
    return Step::Failed;
  }
  Step step = Step::Nothing;
  for (const Deduction& d : rp.deductions) {
    const double cur = box.bound(d.var, d.side);
    const bool tighter = d.side == Side::Lower ? d.value > cur : d.value < cur;
    if (!tighter) continue;
    const double other = box.bound(d.var, opposite(d.side));
    const bool crosses = d.side == Side::Lower ? d.value > other : d.value < other;
    if (crosses) {
      std::vector<BoundRef> reads = d.reason;
      reads.push_back({d.var, opposite(d.side)});
      recorder.record_failure(reason, std::span<const BoundRef>(reads));
      return Step::Failed;
    }
    box.tighten(static_cast<std::size_t>(d.var), d.side, d.value);
    const int pos =
        recorder.record(d.var, d.side, d.value, reason, std::span<const BoundRef>(d.reason));
    result.deductions.push_back(recorder.at(pos));
    step = Step::Changed;
  }
  return step;
}

PropagationResult Propagator::run(BoundBox& box, ConflictGraph& recorder,
                                  std::span<const LearnedConstraint* const> learned) {
  PropagationResult result;
  const auto& rows = instance_->rows();
  if (learned_watch_.size() < learned.size()) learned_watch_.resize(learned.size());
  const std::uint64_t total = rows.size() + learned.size();
  const std::uint64_t guard = 1000 * std::max<std::uint64_t>(1, total);
  std::uint64_t local_evals = 0;

  auto fail = [&](Reason reason) {
    result.outcome = PropagationOutcome::Infeasible;
    result.failure = reason;
    if (reason.kind == ReasonKind::Row) result.infeasible_row = reason.index;
    return result;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (++local_evals > guard)
        throw Error(ErrorCode::IterationGuard, "propagation did not reach a fixpoint");
      ++evaluations_;
      const RowPropagation rp = evaluate_row(rows[r], box, row_watch_[r]);
      const Reason reason = Reason::row(static_cast<int>(r));
      const Step step = apply(rp, reason, box, recorder, result);
      if (step == Step::Failed) return fail(reason);
      if (step == Step::Changed) changed = true;
    }
    for (std::size_t c = 0; c < learned.size(); ++c) {
      if (++local_evals > guard)
        throw Error(ErrorCode::IterationGuard, "propagation did not reach a fixpoint");
      ++evaluations_;
      const LearnedConstraint& lc = *learned[c];
      const RowPropagation rp =
          lc.linear ? evaluate_row(*lc.linear, box, learned_watch_[c])
                    : propagate_disjunction(lc.disjunction, box, learned_watch_[c]);
      const Reason reason = Reason::learned(static_cast<int>(c));
      const Step step = apply(rp, reason, box, recorder, result);
      if (step == Step::Failed) return fail(reason);
      if (step == Step::Changed) changed = true;
    }
  }
  result.outcome =
      result.deductions.empty() ? PropagationOutcome::Fixpoint : PropagationOutcome::Reduced;
  return result;
}

PropagationResult propagate_to_fixpoint(const Instance& instance, BoundBox& box,
                                        ConflictGraph& recorder,
                                        std::span<const LearnedConstraint* const> learned) {
  Propagator propagator(instance);
  return propagator.run(box, recorder, learned);
}

}  // namespace rapidip
