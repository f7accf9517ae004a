#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

namespace rapidip {

enum class BranchDir : std::uint8_t { Down, Up };

/// Value-based inference history: how many deductions followed each branching
/// `x <= v` (down) or `x >= v+1` (up), keyed by the split value v, plus a
/// per-variable aggregate over all values.
class InferenceStats {
 public:
  struct Entry {
    std::uint64_t branches = 0;
    std::uint64_t inferences = 0;
    double average() const {
      return branches == 0 ? 0.0 : static_cast<double>(inferences) / static_cast<double>(branches);
    }
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  InferenceStats() = default;
  explicit InferenceStats(std::size_t num_vars) : down_(num_vars), up_(num_vars) {}

  std::size_t num_vars() const { return down_.size(); }
  void resize(std::size_t num_vars);

  void add(int var, long long value, BranchDir dir, std::uint64_t inferences);

  const Entry& aggregate(int var, BranchDir dir) const {
    return dir == BranchDir::Down ? down_[var] : up_[var];
  }
  Entry value_entry(int var, long long value, BranchDir dir) const;

  /// Average inferences of both branch directions at split value v; falls back
  /// to the per-variable aggregate when v has never been branched on.
  double value_score(int var, long long value) const;
  /// Aggregate average over both directions.
  double variable_score(int var) const;

  void merge(const InferenceStats& other);
  bool empty() const { return by_value_.empty(); }

  friend bool operator==(const InferenceStats&, const InferenceStats&) = default;

 private:
  using Key = std::tuple<int, long long, BranchDir>;
  std::map<Key, Entry> by_value_;
  std::vector<Entry> down_;
  std::vector<Entry> up_;
};

}  // namespace rapidip
