#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rapidip {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kFeasTol = 1e-6;
inline constexpr double kIntTol = 1e-6;

enum class Side : std::uint8_t { Lower, Upper };

inline constexpr Side opposite(Side side) {
  return side == Side::Lower ? Side::Upper : Side::Lower;
}

enum class RowKind : std::uint8_t { Linear, Knapsack, SetCover };

enum class ProblemClass : std::uint8_t { IP, BP, LP, MIP };

std::string_view to_string(ProblemClass cls);
std::string_view to_string(RowKind kind);

/// A sparse row `coefs . x <= rhs`. Indices are unique within a row.
struct Row {
  std::vector<int> index;
  std::vector<double> coef;
  double rhs = 0.0;
  RowKind kind = RowKind::Linear;
  std::string name;
  /// Knapsack rows only: positions into index/coef ordered by decreasing weight.
  std::vector<int> weight_order;

  std::size_t size() const { return index.size(); }
  double activity(std::span<const double> x) const;
};

enum class Sense : std::uint8_t { LessEqual, GreaterEqual, Equal };

/// Immutable integer/mixed-integer program in minimization form with all rows
/// normalized to `<=`. Build through InstanceBuilder.
class Instance {
 public:
  Instance() = default;

  std::size_t num_vars() const { return objective_.size(); }
  std::size_t num_rows() const { return rows_.size(); }

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  bool is_integer(std::size_t j) const { return integer_[j] != 0; }
  const std::vector<char>& integer_flags() const { return integer_; }
  std::size_t num_integer() const;
  bool is_binary(std::size_t j) const {
    return is_integer(j) && lower_[j] == 0.0 && upper_[j] == 1.0;
  }

  const std::string& name() const { return name_; }
  const std::string& var_name(std::size_t j) const { return var_names_[j]; }
  const std::vector<std::string>& var_names() const { return var_names_; }

  /// Constant added to c^T x when reporting objective values.
  double objective_offset() const { return offset_; }
  /// True when the source model maximized; objective() is already negated.
  bool maximize() const { return maximize_; }

  double evaluate(std::span<const double> x) const;
  /// Rows, bounds and integrality within tolerance.
  bool is_feasible(std::span<const double> x, double tol = kFeasTol) const;

 private:
  friend class InstanceBuilder;

  std::string name_;
  std::vector<double> objective_;
  std::vector<Row> rows_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<char> integer_;
  std::vector<std::string> var_names_;
  double offset_ = 0.0;
  bool maximize_ = false;
};

/// Collects variables and constraints, then validates and normalizes them into
/// an Instance. Integer bounds are rounded inward; integer variables with an
/// infinite bound are rejected.
class InstanceBuilder {
 public:
  InstanceBuilder& set_name(std::string name);
  int add_variable(double objective, double lower, double upper, bool integer,
                   std::string name = {});
  /// Adds `lhs_terms sense rhs`. Equalities become two `<=` rows and
  /// duplicate indices are summed.
  InstanceBuilder& add_row(std::vector<std::pair<int, double>> terms, Sense sense,
                           double rhs, std::string name = {});
  /// Adds `lo <= terms <= hi`; infinite sides are skipped.
  InstanceBuilder& add_ranged_row(std::vector<std::pair<int, double>> terms,
                                  double lo, double hi, std::string name = {});
  InstanceBuilder& set_objective_offset(double offset);
  InstanceBuilder& set_maximize(bool maximize);

  Instance build() const;

 private:
  struct PendingRow {
    std::vector<std::pair<int, double>> terms;
    double rhs;
    std::string name;
  };

  std::string name_;
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<char> integer_;
  std::vector<std::string> names_;
  std::vector<PendingRow> rows_;
  double offset_ = 0.0;
  bool maximize_ = false;
};

ProblemClass classify(const Instance& instance);

/// Row classification used by the propagators.
RowKind classify_row(const Row& row, const Instance& instance);

/// Mutable bound box, always contained in the instance's global box while a
/// search owns it.
class BoundBox {
 public:
  BoundBox() = default;
  explicit BoundBox(const Instance& instance);
  BoundBox(std::vector<double> lower, std::vector<double> upper);

  std::size_t size() const { return lower_.size(); }
  double lower(std::size_t j) const { return lower_[j]; }
  double upper(std::size_t j) const { return upper_[j]; }
  double bound(std::size_t j, Side side) const {
    return side == Side::Lower ? lower_[j] : upper_[j];
  }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  bool is_fixed(std::size_t j) const { return lower_[j] == upper_[j]; }
  std::uint64_t generation() const { return generation_; }

  bool empty() const;
  bool contains(std::span<const double> x, double tol = 0.0) const;

  /// Applies `x_var >= value` or `x_var <= value` when strictly tighter.
  /// Returns whether the box changed. Throws Error(EmptyBox) and leaves the box
  /// untouched when the new bound crosses the opposite one.
  bool tighten(std::size_t var, Side side, double value);

  friend bool operator==(const BoundBox& a, const BoundBox& b) {
    return a.lower_ == b.lower_ && a.upper_ == b.upper_;
  }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::uint64_t generation_ = 0;
};

inline bool is_integral(double v, double tol = kIntTol) {
  return std::abs(v - std::round(v)) <= tol;
}

}  // namespace rapidip
