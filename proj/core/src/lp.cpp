#include "rapidip/lp.hpp"

#include <algorithm>
#include <cmath>

namespace rapidip {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
  }
  return "?";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kPricingTol = 1e-9;
constexpr double kTieTol = 1e-12;
constexpr double kDegeneracyTol = 1e-6;

// Dense tableau over [structurals | slacks | artificials]; artificial i has
// original column -e_i and is only allowed to be nonzero in phase one.
class Simplex {
 public:
  enum class Outcome { Optimal, Unbounded, Limit };

  Simplex(const Instance& instance, const BoundBox& box, std::uint64_t limit)
      : inst_(instance), n_(static_cast<int>(instance.num_vars())),
        m_(static_cast<int>(instance.num_rows())), cols_(n_ + 2 * m_), limit_(limit) {
    lb_.assign(cols_, 0.0);
    ub_.assign(cols_, kInf);
    for (int j = 0; j < n_; ++j) {
      lb_[j] = box.lower(j);
      ub_[j] = box.upper(j);
    }
    for (int i = 0; i < m_; ++i) ub_[n_ + m_ + i] = 0.0;
    cost_.assign(cols_, 0.0);
  }

  bool warm_start(const Basis& warm);
  void cold_start();

  bool needs_phase_one() const { return phase_one_; }
  Outcome phase_one();
  bool phase_one_feasible() const;
  void end_phase_one();
  Outcome phase_two();

  LpResult extract(LpStatus status) const;
  std::uint64_t iterations() const { return iterations_; }

 private:
  double& at(int i, int j) { return T_[static_cast<std::size_t>(i) * cols_ + j]; }
  double at(int i, int j) const { return T_[static_cast<std::size_t>(i) * cols_ + j]; }

  double original(int i, int j) const;
  void load_tableau();
  void pivot(int r, int j);
  void recompute_beta();
  void reduced_costs(std::vector<double>& d) const;
  Outcome iterate();
  double nonbasic_start(int j) const;
  void set_nonbasic(int j, double value);

  const Instance& inst_;
  int n_, m_, cols_;
  std::uint64_t limit_;
  std::uint64_t iterations_ = 0;
  bool phase_one_ = false;

  std::vector<double> T_;
  std::vector<double> beta_;
  std::vector<double> lb_, ub_, cost_, value_;
  std::vector<int> basis_, where_;
  std::vector<BasisStatus> status_;
};

double Simplex::original(int i, int j) const {
  if (j < n_) {
    const Row& row = inst_.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row.index[k] == j) return row.coef[k];
    }
    return 0.0;
  }
  if (j < n_ + m_) return j - n_ == i ? 1.0 : 0.0;
  return j - n_ - m_ == i ? -1.0 : 0.0;
}

void Simplex::load_tableau() {
  T_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
  for (int i = 0; i < m_; ++i) {
    const Row& row = inst_.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) at(i, row.index[k]) = row.coef[k];
    at(i, n_ + i) = 1.0;
    at(i, n_ + m_ + i) = -1.0;
  }
  basis_.assign(m_, -1);
  where_.assign(cols_, -1);
  beta_.assign(m_, 0.0);
  value_.assign(cols_, 0.0);
  status_.assign(cols_, BasisStatus::AtLower);
  for (int i = 0; i < m_; ++i) {
    basis_[i] = n_ + i;
    where_[n_ + i] = i;
    status_[n_ + i] = BasisStatus::Basic;
  }
}

double Simplex::nonbasic_start(int j) const {
  if (std::isfinite(lb_[j])) return lb_[j];
  if (std::isfinite(ub_[j])) return ub_[j];
  return 0.0;
}

void Simplex::set_nonbasic(int j, double value) {
  value_[j] = value;
  if (lb_[j] == ub_[j]) {
    status_[j] = BasisStatus::Fixed;
  } else if (value == lb_[j]) {
    status_[j] = BasisStatus::AtLower;
  } else if (value == ub_[j]) {
    status_[j] = BasisStatus::AtUpper;
  } else {
    status_[j] = BasisStatus::Zero;
  }
}

void Simplex::cold_start() {
  load_tableau();
  for (int j = 0; j < n_; ++j) set_nonbasic(j, nonbasic_start(j));
  phase_one_ = false;
  for (int i = 0; i < m_; ++i) {
    const Row& row = inst_.row(i);
    double residual = row.rhs;
    for (std::size_t k = 0; k < row.size(); ++k) residual -= row.coef[k] * value_[row.index[k]];
    const int art = n_ + m_ + i;
    if (residual >= 0.0) {
      beta_[i] = residual;
      set_nonbasic(art, 0.0);
    } else {
      // Swap the slack out for the artificial and flip the row sign.
      for (int j = 0; j < cols_; ++j) at(i, j) = -at(i, j);
      where_[n_ + i] = -1;
      set_nonbasic(n_ + i, 0.0);
      basis_[i] = art;
      where_[art] = i;
      ub_[art] = kInf;
      status_[art] = BasisStatus::Basic;
      beta_[i] = -residual;
      phase_one_ = true;
    }
  }
  for (int i = 0; i < m_; ++i) {
    if (status_[n_ + i] != BasisStatus::Basic && where_[n_ + i] < 0) set_nonbasic(n_ + i, 0.0);
  }
}

bool Simplex::warm_start(const Basis& warm) {
  if (warm.size() != static_cast<std::size_t>(n_ + m_)) return false;
  load_tableau();
  for (int i = 0; i < m_; ++i) set_nonbasic(n_ + m_ + i, 0.0);
  std::vector<char> wanted(n_ + m_, 0);
  int count = 0;
  for (int j = 0; j < n_ + m_; ++j) {
    if (warm[j] == BasisStatus::Basic) {
      wanted[j] = 1;
      ++count;
    }
  }
  if (count > m_) return false;
  for (int j = 0; j < n_; ++j) {
    if (!wanted[j]) continue;
    int best = -1;
    double best_abs = 1e-7;
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[i];
      if (b < n_ || wanted[b]) continue;
      if (std::abs(at(i, j)) > best_abs) {
        best_abs = std::abs(at(i, j));
        best = i;
      }
    }
    if (best < 0) return false;
    const int leaving = basis_[best];
    pivot(best, j);
    status_[leaving] = BasisStatus::AtLower;
  }
  for (int j = 0; j < n_ + m_; ++j) {
    if (where_[j] >= 0) continue;
    double v = nonbasic_start(j);
    if (warm[j] == BasisStatus::AtUpper && std::isfinite(ub_[j])) v = ub_[j];
    if (warm[j] == BasisStatus::AtLower && std::isfinite(lb_[j])) v = lb_[j];
    set_nonbasic(j, v);
  }
  recompute_beta();
  for (int i = 0; i < m_; ++i) {
    const int b = basis_[i];
    if (beta_[i] < lb_[b] - 1e-9 || beta_[i] > ub_[b] + 1e-9) return false;
  }
  phase_one_ = false;
  return true;
}

void Simplex::pivot(int r, int j) {
  const double piv = at(r, j);
  double* prow = &T_[static_cast<std::size_t>(r) * cols_];
  for (int k = 0; k < cols_; ++k) prow[k] /= piv;
  prow[j] = 1.0;
  for (int i = 0; i < m_; ++i) {
    if (i == r) continue;
    const double f = at(i, j);
    if (f == 0.0) continue;
    double* row = &T_[static_cast<std::size_t>(i) * cols_];
    for (int k = 0; k < cols_; ++k) row[k] -= f * prow[k];
    row[j] = 0.0;
  }
  const int leaving = basis_[r];
  where_[leaving] = -1;
  basis_[r] = j;
  where_[j] = r;
  status_[j] = BasisStatus::Basic;
}

void Simplex::recompute_beta() {
  std::vector<double> rhs(m_);
  for (int i = 0; i < m_; ++i) rhs[i] = inst_.row(i).rhs;
  for (int j = 0; j < cols_; ++j) {
    if (where_[j] >= 0 || value_[j] == 0.0) continue;
    if (j < n_) {
      for (int i = 0; i < m_; ++i) rhs[i] -= original(i, j) * value_[j];
    } else if (j < n_ + m_) {
      rhs[j - n_] -= value_[j];
    } else {
      rhs[j - n_ - m_] += value_[j];
    }
  }
  // B^-1 sits in the slack block of the tableau.
  for (int i = 0; i < m_; ++i) {
    double v = 0.0;
    for (int k = 0; k < m_; ++k) v += at(i, n_ + k) * rhs[k];
    beta_[i] = v;
  }
}

void Simplex::reduced_costs(std::vector<double>& d) const {
  d.assign(cols_, 0.0);
  for (int j = 0; j < cols_; ++j) {
    if (where_[j] >= 0) continue;
    double v = cost_[j];
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb != 0.0) v -= cb * at(i, j);
    }
    d[j] = v;
  }
}

Simplex::Outcome Simplex::iterate() {
  std::vector<double> d;
  std::uint64_t stalled = 0;
  const std::uint64_t bland_after = 3 * static_cast<std::uint64_t>(n_ + m_);
  bool bland = false;
  for (;;) {
    reduced_costs(d);
    int enter = -1;
    double enter_dir = 0.0;
    double best = 0.0;
    for (int j = 0; j < cols_; ++j) {
      if (where_[j] >= 0) continue;
      double dir = 0.0;
      switch (status_[j]) {
        case BasisStatus::AtLower:
          if (d[j] < -kPricingTol) dir = 1.0;
          break;
        case BasisStatus::AtUpper:
          if (d[j] > kPricingTol) dir = -1.0;
          break;
        case BasisStatus::Zero:
          if (std::abs(d[j]) > kPricingTol) dir = d[j] < 0.0 ? 1.0 : -1.0;
          break;
        case BasisStatus::Fixed:
        case BasisStatus::Basic:
          break;
      }
      if (dir == 0.0) continue;
      if (bland) {
        enter = j;
        enter_dir = dir;
        break;
      }
      if (std::abs(d[j]) > best) {
        best = std::abs(d[j]);
        enter = j;
        enter_dir = dir;
      }
    }
    if (enter < 0) return Outcome::Optimal;
    if (iterations_ >= limit_) return Outcome::Limit;
    ++iterations_;

    double step = kInf;
    int leave_row = -1;
    double leave_alpha = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double alpha = at(i, enter);
      if (std::abs(alpha) < kPivotTol) continue;
      const double rate = -enter_dir * alpha;
      const int b = basis_[i];
      double lim;
      if (rate < 0.0) {
        if (!std::isfinite(lb_[b])) continue;
        lim = (beta_[i] - lb_[b]) / -rate;
      } else {
        if (!std::isfinite(ub_[b])) continue;
        lim = (ub_[b] - beta_[i]) / rate;
      }
      lim = std::max(lim, 0.0);
      bool take = false;
      if (lim < step - kTieTol) {
        take = true;
      } else if (lim <= step + kTieTol && leave_row >= 0) {
        take = bland ? b < basis_[leave_row] : std::abs(alpha) > std::abs(leave_alpha);
      }
      if (take) {
        step = lim;
        leave_row = i;
        leave_alpha = alpha;
      }
    }
    const double flip = ub_[enter] - lb_[enter];
    const bool can_flip = std::isfinite(flip) && status_[enter] != BasisStatus::Zero;
    if (leave_row < 0 && !can_flip) return Outcome::Unbounded;

    const bool do_flip = can_flip && (leave_row < 0 || flip <= step);
    if (do_flip) step = flip;

    for (int i = 0; i < m_; ++i) beta_[i] += -enter_dir * at(i, enter) * step;
    const double entered = value_[enter] + enter_dir * step;

    if (step > kTieTol) {
      stalled = 0;
      bland = false;
    } else if (++stalled >= bland_after) {
      bland = true;
    }

    if (do_flip) {
      set_nonbasic(enter, enter_dir > 0.0 ? ub_[enter] : lb_[enter]);
      continue;
    }
    const int leaving = basis_[leave_row];
    const double rate = -enter_dir * leave_alpha;
    const double leave_value = rate < 0.0 ? lb_[leaving] : ub_[leaving];
    pivot(leave_row, enter);
    beta_[leave_row] = entered;
    value_[enter] = 0.0;
    set_nonbasic(leaving, leave_value);
  }
}

Simplex::Outcome Simplex::phase_one() {
  std::fill(cost_.begin(), cost_.end(), 0.0);
  for (int i = 0; i < m_; ++i) cost_[n_ + m_ + i] = 1.0;
  const Outcome out = iterate();
  recompute_beta();
  return out;
}

bool Simplex::phase_one_feasible() const {
  double scale = 1.0;
  for (int i = 0; i < m_; ++i) scale = std::max(scale, std::abs(inst_.row(i).rhs));
  double infeasibility = 0.0;
  for (int i = 0; i < m_; ++i) {
    if (basis_[i] >= n_ + m_) infeasibility += std::max(0.0, beta_[i]);
  }
  return infeasibility <= kFeasTol * scale;
}

void Simplex::end_phase_one() {
  for (int i = 0; i < m_; ++i) {
    const int art = n_ + m_ + i;
    lb_[art] = 0.0;
    ub_[art] = 0.0;
    if (where_[art] < 0) set_nonbasic(art, 0.0);
  }
}

Simplex::Outcome Simplex::phase_two() {
  std::fill(cost_.begin(), cost_.end(), 0.0);
  for (int j = 0; j < n_; ++j) cost_[j] = inst_.objective()[j];
  const Outcome out = iterate();
  recompute_beta();
  return out;
}

LpResult Simplex::extract(LpStatus status) const {
  LpResult res;
  res.status = status;
  res.iterations = iterations_;
  res.primal.assign(n_, 0.0);
  for (int j = 0; j < n_; ++j) res.primal[j] = where_[j] >= 0 ? beta_[where_[j]] : value_[j];
  res.objective = 0.0;
  for (int j = 0; j < n_; ++j) res.objective += inst_.objective()[j] * res.primal[j];
  std::vector<double> d;
  reduced_costs(d);
  res.basis.resize(n_ + m_);
  res.reduced_costs.resize(n_ + m_);
  for (int j = 0; j < n_ + m_; ++j) {
    res.basis[j] = where_[j] >= 0 ? BasisStatus::Basic : status_[j];
    res.reduced_costs[j] = where_[j] >= 0 ? 0.0 : d[j];
  }
  return res;
}

}  // namespace

LpResult solve_lp(const Instance& instance, const BoundBox& box, const Basis* warm_basis,
                  LpOptions options) {
  const std::size_t n = instance.num_vars();
  const std::size_t m = instance.num_rows();
  const std::uint64_t limit =
      options.iteration_limit ? options.iteration_limit : 10 * (n + m) + 1000;

  if (box.empty()) {
    LpResult res;
    res.status = LpStatus::Infeasible;
    return res;
  }

  Simplex simplex(instance, box, limit);
  if (!warm_basis || !simplex.warm_start(*warm_basis)) simplex.cold_start();

  if (simplex.needs_phase_one()) {
    const auto out = simplex.phase_one();
    if (out == Simplex::Outcome::Limit) return simplex.extract(LpStatus::IterationLimit);
    if (!simplex.phase_one_feasible()) return simplex.extract(LpStatus::Infeasible);
    simplex.end_phase_one();
  }
  switch (simplex.phase_two()) {
    case Simplex::Outcome::Optimal: return simplex.extract(LpStatus::Optimal);
    case Simplex::Outcome::Unbounded: return simplex.extract(LpStatus::Unbounded);
    case Simplex::Outcome::Limit: return simplex.extract(LpStatus::IterationLimit);
  }
  return simplex.extract(LpStatus::IterationLimit);
}

DegeneracyInfo measure_degeneracy(const LpResult& result, std::size_t num_rows) {
  DegeneracyInfo info;
  for (std::size_t j = 0; j < result.basis.size(); ++j) {
    switch (result.basis[j]) {
      case BasisStatus::Basic:
        ++info.basic;
        break;
      case BasisStatus::Fixed:
        break;
      default:
        ++info.nonbasic;
        if (std::abs(result.reduced_costs[j]) <= kDegeneracyTol) ++info.degenerate_nonbasic;
        break;
    }
  }
  // No free nonbasic columns: every one of them is (vacuously) degenerate.
  info.degenerate_share =
      info.nonbasic == 0 ? 1.0
                         : static_cast<double>(info.degenerate_nonbasic) /
                               static_cast<double>(info.nonbasic);
  info.face_var_constraint_ratio =
      static_cast<double>(info.basic + info.degenerate_nonbasic) /
      static_cast<double>(std::max<std::size_t>(1, num_rows));
  return info;
}

StrongBranchResult strong_branch(const Instance& instance, const BoundBox& box, int candidate,
                                 const LpResult& parent, StrongBranchTally& tally) {
  StrongBranchResult out;
  const double x = parent.primal[candidate];
  auto child = [&](Side side, double value) -> std::optional<double> {
    BoundBox b = box;
    if (side == Side::Upper ? value < b.lower(candidate) : value > b.upper(candidate)) {
      return std::nullopt;
    }
    b.tighten(static_cast<std::size_t>(candidate), side, value);
    const LpResult r = solve_lp(instance, b, &parent.basis);
    out.iterations += r.iterations;
    if (r.status == LpStatus::Optimal) return r.objective;
    if (r.status == LpStatus::Infeasible) return std::nullopt;
    return parent.objective;
  };
  out.down = child(Side::Upper, std::floor(x));
  out.up = child(Side::Lower, std::ceil(x));
  for (const auto& obj : {out.down, out.up}) {
    if (!obj || std::abs(*obj - parent.objective) <= 1e-6) {
      ++tally.no_improvement;
    } else {
      ++tally.objective_changed;
    }
  }
  return out;
}

}  // namespace rapidip
