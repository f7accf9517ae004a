#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rapidip/model.hpp"

namespace rapidip {

enum class ReasonKind : std::uint8_t {
  Branching,
  Row,        // instance row, index = row number
  Learned,    // learned constraint, index = position in the active constraint list
  Initial,    // scope fact applied after level 0 (e.g. a node-local bound)
  Cutoff,     // pseudo-objective reached the incumbent bound (failure only)
};

struct Reason {
  ReasonKind kind = ReasonKind::Initial;
  int index = -1;

  static Reason branching() { return {ReasonKind::Branching, -1}; }
  static Reason row(int r) { return {ReasonKind::Row, r}; }
  static Reason learned(int id) { return {ReasonKind::Learned, id}; }
  static Reason initial() { return {ReasonKind::Initial, -1}; }
  static Reason cutoff() { return {ReasonKind::Cutoff, -1}; }

  friend bool operator==(const Reason&, const Reason&) = default;
};

/// A vertex of the conflict graph: one bound change `x_var >= value` (lower) or
/// `x_var <= value` (upper).
struct BoundChange {
  int var = -1;
  Side side = Side::Lower;
  double value = 0.0;
  int level = 0;
  Reason reason;
  int position = -1;
};

/// Reference to "the current lower/upper bound of var", used by propagators
/// to report which bounds an inference read.
struct BoundRef {
  int var;
  Side side;
  friend bool operator==(const BoundRef&, const BoundRef&) = default;
};

/// Implication trail of one search node. Positions are trail indices, so every
/// antecedent position is smaller than the position it explains.
class ConflictGraph {
 public:
  ConflictGraph() = default;
  explicit ConflictGraph(std::size_t num_vars);

  void reset();
  int level() const { return level_; }
  void push_level() { ++level_; }

  /// Appends a bound change at the current level and returns its position.
  int record(int var, Side side, double value, Reason reason, std::span<const int> antecedents);
  /// Same, with antecedents given as bound references resolved to the
  /// positions of the changes that currently define those bounds.
  int record(int var, Side side, double value, Reason reason, std::span<const BoundRef> reads);

  /// Position of the change that set the current bound, or -1 for a bound
  /// that is part of the initial box.
  int latest(int var, Side side) const {
    return side == Side::Lower ? latest_lower_[var] : latest_upper_[var];
  }

  void record_failure(Reason reason, std::span<const int> antecedents);
  void record_failure(Reason reason, std::span<const BoundRef> reads);
  bool has_failure() const { return has_failure_; }
  Reason failure_reason() const { return failure_reason_; }
  std::span<const int> false_antecedents() const { return false_antecedents_; }

  const std::vector<BoundChange>& trail() const { return trail_; }
  const BoundChange& at(int position) const { return trail_[position]; }
  std::span<const int> antecedents(int position) const;
  std::size_t num_vars() const { return latest_lower_.size(); }

  /// Number of changes recorded at `level`.
  std::size_t changes_at_level(int level) const;

 private:
  void resolve(std::span<const BoundRef> reads, std::vector<int>& out) const;

  std::vector<BoundChange> trail_;
  std::vector<int> ante_begin_;
  std::vector<int> ante_flat_;
  std::vector<int> latest_lower_;
  std::vector<int> latest_upper_;
  std::vector<int> false_antecedents_;
  Reason failure_reason_;
  bool has_failure_ = false;
  int level_ = 0;
};

/// One bound predicate of a disjunction: `x_var >= bound` for Side::Lower,
/// `x_var <= bound` for Side::Upper.
struct Literal {
  int var;
  Side side;
  double bound;

  bool holds(double value) const {
    return side == Side::Lower ? value >= bound : value <= bound;
  }
  friend bool operator==(const Literal&, const Literal&) = default;
};

enum class LiteralState : std::uint8_t { True, False, Open };

LiteralState literal_state(const Literal& lit, const BoundBox& box);

/// Bound disjunction constraint over integer variables.
class BoundDisjunction {
 public:
  BoundDisjunction() = default;
  explicit BoundDisjunction(std::vector<Literal> literals) : literals_(std::move(literals)) {}

  const std::vector<Literal>& literals() const { return literals_; }
  std::size_t size() const { return literals_.size(); }
  bool empty() const { return literals_.empty(); }

  void add(Literal lit) { literals_.push_back(lit); }

  /// Merges literals on the same variable and side, keeping the weakest
  /// requirement, and orders literals by (var, side). Returns false when the
  /// same variable appears with both sides; such a disjunction has no bound
  /// disjunction form with disjoint index sets.
  bool normalize();

  std::string to_string() const;

 private:
  std::vector<Literal> literals_;
};

bool check_disjunction(const BoundDisjunction& d, std::span<const double> point);

/// Violated by every point of the box.
bool disjunction_violated(const BoundDisjunction& d, const BoundBox& box);

enum class ConstraintScope : std::uint8_t { Global, Local };

struct LearnedConstraint {
  BoundDisjunction disjunction;
  /// Knapsack-style row equivalent to the disjunction over its reference box.
  std::optional<Row> linear;
  ConstraintScope scope = ConstraintScope::Global;
  int node = -1;
  /// Valid for every feasible point with objective below this value.
  double cutoff = kInf;

  std::size_t length() const { return disjunction.size(); }
  bool is_linear() const { return linear.has_value(); }
};

enum class AnalysisStatus : std::uint8_t {
  Conflict,         // a nonempty disjunction was derived
  ScopeInfeasible,  // the failure only depends on scope facts
  AbortContinuous,  // the cut contains a bound of a continuous variable
  Discarded,        // the cut bounds one variable on both sides
};

struct ConflictAnalysis {
  AnalysisStatus status = AnalysisStatus::ScopeInfeasible;
  BoundDisjunction conflict;
  /// Decision level each literal's cut vertex was recorded at.
  std::vector<int> literal_levels;
  /// Deepest level among the failure's antecedents.
  int failure_level = 0;
};

/// First-UIP resolution on the recorded failure. Level-0 vertices hold in the
/// whole scope and never enter the cut.
ConflictAnalysis analyze_1uip(const ConflictGraph& graph, const Instance& instance);

/// Linear form for a disjunction whose literals are one step inside the
/// reference box (`x <= u-1`, `x >= l+1`); otherwise nullopt.
std::optional<Row> to_knapsack(const BoundDisjunction& d, const BoundBox& reference);

/// Applies a single-literal disjunction to the box. Throws Error(EmptyBox) when
/// the literal contradicts the box.
bool upgrade_singleton(const BoundDisjunction& d, BoundBox& box);

}  // namespace rapidip
