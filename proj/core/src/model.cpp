#include "rapidip/model.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "rapidip/error.hpp"

namespace rapidip {

std::string_view to_string(ProblemClass cls) {
  switch (cls) {
    case ProblemClass::IP: return "IP";
    case ProblemClass::BP: return "BP";
    case ProblemClass::LP: return "LP";
    case ProblemClass::MIP: return "MIP";
  }
  return "?";
}

std::string_view to_string(RowKind kind) {
  switch (kind) {
    case RowKind::Linear: return "linear";
    case RowKind::Knapsack: return "knapsack";
    case RowKind::SetCover: return "set-covering";
  }
  return "?";
}

double Row::activity(std::span<const double> x) const {
  double act = 0.0;
  for (std::size_t k = 0; k < index.size(); ++k) act += coef[k] * x[index[k]];
  return act;
}

std::size_t Instance::num_integer() const {
  return static_cast<std::size_t>(std::count(integer_.begin(), integer_.end(), 1));
}

double Instance::evaluate(std::span<const double> x) const {
  double v = 0.0;
  for (std::size_t j = 0; j < objective_.size(); ++j) v += objective_[j] * x[j];
  return v;
}

bool Instance::is_feasible(std::span<const double> x, double tol) const {
  if (x.size() != num_vars()) return false;
  for (std::size_t j = 0; j < num_vars(); ++j) {
    if (x[j] < lower_[j] - tol || x[j] > upper_[j] + tol) return false;
    if (is_integer(j) && !is_integral(x[j], tol)) return false;
  }
  for (const Row& row : rows_) {
    if (row.activity(x) > row.rhs + tol * std::max(1.0, std::abs(row.rhs))) return false;
  }
  return true;
}

InstanceBuilder& InstanceBuilder::set_name(std::string name) {
  name_ = std::move(name);
  return *this;
}

int InstanceBuilder::add_variable(double objective, double lower, double upper,
                                  bool integer, std::string name) {
  const int j = static_cast<int>(objective_.size());
  objective_.push_back(objective);
  lower_.push_back(lower);
  upper_.push_back(upper);
  integer_.push_back(integer ? 1 : 0);
  if (name.empty()) name = "x" + std::to_string(j);
  names_.push_back(std::move(name));
  return j;
}

InstanceBuilder& InstanceBuilder::add_row(std::vector<std::pair<int, double>> terms,
                                          Sense sense, double rhs, std::string name) {
  if (name.empty()) name = "r" + std::to_string(rows_.size());
  switch (sense) {
    case Sense::LessEqual:
      rows_.push_back({std::move(terms), rhs, std::move(name)});
      break;
    case Sense::GreaterEqual:
      for (auto& t : terms) t.second = -t.second;
      rows_.push_back({std::move(terms), -rhs, std::move(name)});
      break;
    case Sense::Equal: {
      auto negated = terms;
      for (auto& t : negated) t.second = -t.second;
      rows_.push_back({std::move(terms), rhs, name + "_le"});
      rows_.push_back({std::move(negated), -rhs, name + "_ge"});
      break;
    }
  }
  return *this;
}

InstanceBuilder& InstanceBuilder::add_ranged_row(std::vector<std::pair<int, double>> terms,
                                                 double lo, double hi, std::string name) {
  if (name.empty()) name = "r" + std::to_string(rows_.size());
  if (lo == hi) return add_row(std::move(terms), Sense::Equal, lo, std::move(name));
  if (lo > -kInf && hi < kInf) {
    add_row(terms, Sense::GreaterEqual, lo, name + "_lo");
    return add_row(std::move(terms), Sense::LessEqual, hi, name + "_hi");
  }
  if (lo > -kInf) return add_row(std::move(terms), Sense::GreaterEqual, lo, std::move(name));
  if (hi < kInf) return add_row(std::move(terms), Sense::LessEqual, hi, std::move(name));
  return *this;
}

InstanceBuilder& InstanceBuilder::set_objective_offset(double offset) {
  offset_ = offset;
  return *this;
}

InstanceBuilder& InstanceBuilder::set_maximize(bool maximize) {
  maximize_ = maximize;
  return *this;
}

namespace {

bool coefficient_is_integer(double a) {
  return a == std::floor(a) && std::abs(a) < 9.0e15;
}

}  // namespace

RowKind classify_row(const Row& row, const Instance& instance) {
  if (row.index.empty()) return RowKind::Linear;
  const bool all_binary = std::all_of(row.index.begin(), row.index.end(),
                                      [&](int j) { return instance.is_binary(j); });
  if (!all_binary) return RowKind::Linear;
  const bool all_minus_one =
      std::all_of(row.coef.begin(), row.coef.end(), [](double a) { return a == -1.0; });
  if (all_minus_one && row.rhs == -1.0) return RowKind::SetCover;
  const bool positive_integer = std::all_of(row.coef.begin(), row.coef.end(), [](double a) {
    return a > 0.0 && coefficient_is_integer(a);
  });
  if (positive_integer && std::abs(row.rhs) < 9.0e15) return RowKind::Knapsack;
  return RowKind::Linear;
}

Instance InstanceBuilder::build() const {
  Instance inst;
  inst.name_ = name_;
  inst.objective_ = objective_;
  inst.lower_ = lower_;
  inst.upper_ = upper_;
  inst.integer_ = integer_;
  inst.var_names_ = names_;
  inst.offset_ = offset_;
  inst.maximize_ = maximize_;

  const std::size_t n = objective_.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(objective_[j]) || std::isnan(lower_[j]) || std::isnan(upper_[j]))
      throw Error(ErrorCode::InvalidModel, "NaN data for variable " + names_[j]);
    if (!std::isfinite(objective_[j]))
      throw Error(ErrorCode::InvalidModel, "infinite objective for variable " + names_[j]);
    if (inst.integer_[j]) {
      if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j]))
        throw Error(ErrorCode::InvalidModel,
                    "integer variable " + names_[j] + " needs finite bounds");
      inst.lower_[j] = std::ceil(lower_[j] - kIntTol);
      inst.upper_[j] = std::floor(upper_[j] + kIntTol);
    }
    if (inst.lower_[j] == kInf || inst.upper_[j] == -kInf)
      throw Error(ErrorCode::InvalidModel, "unbounded fixing for variable " + names_[j]);
    if (inst.lower_[j] > inst.upper_[j])
      throw Error(ErrorCode::InvalidModel,
                  "lower bound exceeds upper bound for variable " + names_[j]);
  }

  for (const PendingRow& pending : rows_) {
    if (std::isnan(pending.rhs))
      throw Error(ErrorCode::InvalidModel, "NaN right-hand side in row " + pending.name);
    std::map<int, double> merged;
    for (const auto& [j, a] : pending.terms) {
      if (j < 0 || static_cast<std::size_t>(j) >= n)
        throw Error(ErrorCode::InvalidModel, "row " + pending.name + " references variable " +
                                                 std::to_string(j) + " out of range");
      if (!std::isfinite(a))
        throw Error(ErrorCode::InvalidModel, "non-finite coefficient in row " + pending.name);
      merged[j] += a;
    }
    // +inf right-hand sides make the row redundant.
    if (pending.rhs == kInf) continue;
    Row row;
    row.name = pending.name;
    row.rhs = pending.rhs;
    for (const auto& [j, a] : merged) {
      if (a == 0.0) continue;
      row.index.push_back(j);
      row.coef.push_back(a);
    }
    inst.rows_.push_back(std::move(row));
  }

  for (Row& row : inst.rows_) {
    row.kind = classify_row(row, inst);
    if (row.kind == RowKind::Knapsack) {
      row.weight_order.resize(row.size());
      std::iota(row.weight_order.begin(), row.weight_order.end(), 0);
      std::stable_sort(row.weight_order.begin(), row.weight_order.end(),
                       [&](int a, int b) { return row.coef[a] > row.coef[b]; });
    }
  }
  return inst;
}

ProblemClass classify(const Instance& instance) {
  const std::size_t n = instance.num_vars();
  const std::size_t ints = instance.num_integer();
  if (ints == n) {
    for (std::size_t j = 0; j < n; ++j) {
      if (instance.lower()[j] != 0.0 || instance.upper()[j] != 1.0) return ProblemClass::IP;
    }
    return ProblemClass::BP;
  }
  if (ints == 0) return ProblemClass::LP;
  return ProblemClass::MIP;
}

BoundBox::BoundBox(const Instance& instance)
    : lower_(instance.lower()), upper_(instance.upper()) {}

BoundBox::BoundBox(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size())
    throw Error(ErrorCode::InvalidModel, "bound vectors differ in length");
}

bool BoundBox::empty() const {
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (lower_[j] > upper_[j]) return true;
  }
  return false;
}

bool BoundBox::contains(std::span<const double> x, double tol) const {
  if (x.size() != lower_.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lower_[j] - tol || x[j] > upper_[j] + tol) return false;
  }
  return true;
}

bool BoundBox::tighten(std::size_t var, Side side, double value) {
  if (side == Side::Lower) {
    if (value <= lower_[var]) return false;
    if (value > upper_[var])
      throw Error(ErrorCode::EmptyBox, "lower bound " + std::to_string(value) +
                                           " crosses upper bound of variable " +
                                           std::to_string(var));
    lower_[var] = value;
  } else {
    if (value >= upper_[var]) return false;
    if (value < lower_[var])
      throw Error(ErrorCode::EmptyBox, "upper bound " + std::to_string(value) +
                                           " crosses lower bound of variable " +
                                           std::to_string(var));
    upper_[var] = value;
  }
  ++generation_;
  return true;
}

}  // namespace rapidip
