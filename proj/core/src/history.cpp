#include "rapidip/history.hpp"

#include <algorithm>

namespace rapidip {

void InferenceStats::resize(std::size_t num_vars) {
  if (num_vars > down_.size()) {
    down_.resize(num_vars);
    up_.resize(num_vars);
  }
}

void InferenceStats::add(int var, long long value, BranchDir dir, std::uint64_t inferences) {
  resize(static_cast<std::size_t>(var) + 1);
  Entry& e = by_value_[{var, value, dir}];
  ++e.branches;
  e.inferences += inferences;
  Entry& agg = dir == BranchDir::Down ? down_[var] : up_[var];
  ++agg.branches;
  agg.inferences += inferences;
}

InferenceStats::Entry InferenceStats::value_entry(int var, long long value, BranchDir dir) const {
  auto it = by_value_.find({var, value, dir});
  return it == by_value_.end() ? Entry{} : it->second;
}

double InferenceStats::value_score(int var, long long value) const {
  const Entry d = value_entry(var, value, BranchDir::Down);
  const Entry u = value_entry(var, value, BranchDir::Up);
  if (d.branches == 0 && u.branches == 0) return variable_score(var);
  return d.average() + u.average();
}

double InferenceStats::variable_score(int var) const {
  if (static_cast<std::size_t>(var) >= down_.size()) return 0.0;
  return down_[var].average() + up_[var].average();
}

void InferenceStats::merge(const InferenceStats& other) {
  resize(other.num_vars());
  for (const auto& [key, e] : other.by_value_) {
    Entry& mine = by_value_[key];
    mine.branches += e.branches;
    mine.inferences += e.inferences;
  }
  for (std::size_t j = 0; j < other.down_.size(); ++j) {
    down_[j].branches += other.down_[j].branches;
    down_[j].inferences += other.down_[j].inferences;
    up_[j].branches += other.up_[j].branches;
    up_[j].inferences += other.up_[j].inferences;
  }
}

}  // namespace rapidip
