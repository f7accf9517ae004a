#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rapidip/lp.hpp"

using namespace rapidip;

namespace {

Instance two_var(double cap, bool integer) {
  InstanceBuilder b;
  const int x = b.add_variable(-1, 0, 1, integer);
  const int y = b.add_variable(-1, 0, 1, integer);
  b.add_row({{x, 1}, {y, 1}}, Sense::LessEqual, cap);
  return b.build();
}

}  // namespace

TEST_SUITE("lp") {
  TEST_CASE("bound optimum without rows") {
    InstanceBuilder b;
    b.add_variable(-1, 0, 1, false);
    const Instance inst = b.build();
    const LpResult r = solve_lp(inst, BoundBox(inst));
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.primal[0] == doctest::Approx(1.0));
    CHECK(r.objective == doctest::Approx(-1.0));
  }

  TEST_CASE("x + y <= 1 has value -1 with one basic structural") {
    const Instance inst = two_var(1.0, false);
    const LpResult r = solve_lp(inst, BoundBox(inst));
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(*testing::vertex_optimum(inst, BoundBox(inst))));
    CHECK(r.objective == doctest::Approx(-1.0));
    int basic = 0;
    for (std::size_t j = 0; j < r.basis.size(); ++j) basic += r.basis[j] == BasisStatus::Basic;
    CHECK(basic == 1);
  }

  TEST_CASE("infeasible row") {
    InstanceBuilder b;
    const int x = b.add_variable(0, 0, 1, false);
    b.add_row({{x, 1}}, Sense::GreaterEqual, 2);
    const Instance inst = b.build();
    CHECK(solve_lp(inst, BoundBox(inst)).status == LpStatus::Infeasible);
  }

  TEST_CASE("random LPs agree with vertex enumeration") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 150; ++k) {
      const Instance inst = testing::random_lp(rng);
      const BoundBox box(inst);
      const LpResult r = solve_lp(inst, box);
      const auto oracle = testing::vertex_optimum(inst, box);
      if (!oracle) {
        CHECK(r.status == LpStatus::Infeasible);
        continue;
      }
      REQUIRE(r.status == LpStatus::Optimal);
      CHECK(r.objective == doctest::Approx(*oracle).epsilon(1e-6));
      CHECK(box.contains(r.primal, 1e-6));
      CHECK(inst.is_feasible(r.primal, 1e-6));
      for (std::size_t j = 0; j < r.basis.size(); ++j) {
        if (r.basis[j] == BasisStatus::Basic) CHECK(r.reduced_costs[j] == 0.0);
      }
    }
  }

  TEST_CASE("warm start reproduces the cold optimum") {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 60; ++k) {
      const Instance inst = testing::random_lp(rng);
      BoundBox box(inst);
      const LpResult parent = solve_lp(inst, box);
      if (parent.status != LpStatus::Optimal) continue;
      const std::size_t j = static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<int>(inst.num_vars()) - 1));
      if (box.upper(j) - box.lower(j) < 1) continue;
      box.tighten(j, Side::Upper, box.upper(j) - 1);
      const LpResult warm = solve_lp(inst, box, &parent.basis);
      const LpResult cold = solve_lp(inst, box);
      REQUIRE(warm.status == cold.status);
      if (cold.status == LpStatus::Optimal) CHECK(warm.objective == doctest::Approx(cold.objective));
    }
  }

  TEST_CASE("zero objective is fully degenerate") {
    InstanceBuilder b;
    for (int j = 0; j < 4; ++j) b.add_variable(0, 0, 2, false);
    const Instance inst = b.build();
    const LpResult r = solve_lp(inst, BoundBox(inst));
    const DegeneracyInfo d = measure_degeneracy(r, inst.num_rows());
    CHECK(d.nonbasic == 4);
    CHECK(d.degenerate_share == 1.0);
  }

  TEST_CASE("nonzero reduced cost is not degenerate") {
    InstanceBuilder b;
    b.add_variable(1, 0, 1, false);
    const Instance inst = b.build();
    const LpResult r = solve_lp(inst, BoundBox(inst));
    CHECK(measure_degeneracy(r, 0).degenerate_share == 0.0);
  }

  TEST_CASE("face ratio counts basic plus degenerate nonbasic") {
    LpResult r;
    r.status = LpStatus::Optimal;
    r.basis = {BasisStatus::Basic, BasisStatus::Basic, BasisStatus::Basic, BasisStatus::AtLower,
               BasisStatus::AtUpper};
    r.reduced_costs = {0, 0, 0, 0, 3};
    const DegeneracyInfo d = measure_degeneracy(r, 2);
    CHECK(d.face_var_constraint_ratio == 2.0);
    CHECK(d.degenerate_share == 0.5);
  }

  TEST_CASE("share is 1 when c vanishes on unfixed columns") {
    std::mt19937_64 rng(21);
    int checked = 0;
    for (int k = 0; k < 100; ++k) {
      InstanceBuilder b;
      const int n = testing::uniform(rng, 1, 5);
      for (int j = 0; j < n; ++j) {
        const bool fixed = testing::uniform(rng, 0, 2) == 0;
        const int lo = testing::uniform(rng, -2, 2);
        b.add_variable(fixed ? testing::uniform(rng, -5, 5) : 0.0, lo, fixed ? lo : lo + 3, false);
      }
      const int m = testing::uniform(rng, 0, 4);
      for (int i = 0; i < m; ++i) {
        std::vector<std::pair<int, double>> t;
        for (int j = 0; j < n; ++j) t.emplace_back(j, testing::uniform(rng, -3, 3));
        b.add_row(t, Sense::LessEqual, testing::uniform(rng, 0, 8));
      }
      const Instance inst = b.build();
      const LpResult r = solve_lp(inst, BoundBox(inst));
      if (r.status != LpStatus::Optimal) continue;
      ++checked;
      CHECK(measure_degeneracy(r, inst.num_rows()).degenerate_share == 1.0);
    }
    CHECK(checked > 50);
  }

  TEST_CASE("strong branching on a constant objective") {
    InstanceBuilder b;
    const int x = b.add_variable(0, 0, 1, false);
    const int y = b.add_variable(0, 0, 1, false);
    b.add_row({{x, 2}, {y, 2}}, Sense::Equal, 1);
    const Instance inst = b.build();
    BoundBox box(inst);
    const LpResult parent = solve_lp(inst, box);
    REQUIRE(parent.status == LpStatus::Optimal);
    const int cand = is_integral(parent.primal[0]) ? 1 : 0;
    StrongBranchTally tally;
    const auto sb = strong_branch(inst, box, cand, parent, tally);
    CHECK(sb.down.value_or(0.0) == 0.0);
    CHECK(tally.no_improvement == 2);
    CHECK(tally.objective_changed == 0);
  }

  TEST_CASE("strong branching sees an objective change") {
    const Instance inst = two_var(1.5, false);
    const BoundBox box(inst);
    const LpResult parent = solve_lp(inst, box);
    REQUIRE(parent.status == LpStatus::Optimal);
    CHECK(parent.objective == doctest::Approx(-1.5));
    const int cand = is_integral(parent.primal[0]) ? 1 : 0;
    REQUIRE_FALSE(is_integral(parent.primal[cand]));
    StrongBranchTally tally;
    const auto sb = strong_branch(inst, box, cand, parent, tally);
    // down child fixes the candidate to 0: oracle value -1
    BoundBox down = box;
    down.tighten(static_cast<std::size_t>(cand), Side::Upper, 0);
    REQUIRE(sb.down);
    CHECK(*sb.down == doctest::Approx(*testing::vertex_optimum(inst, down)));
    CHECK(*sb.down > parent.objective + 1e-6);
    CHECK(tally.objective_changed >= 1);
  }

  TEST_CASE("strong branching child with contradictory bounds") {
    InstanceBuilder b;
    const int x = b.add_variable(-1, 0, 1, false);
    b.add_row({{x, 1}}, Sense::GreaterEqual, 0.5);
    b.add_row({{x, 1}}, Sense::LessEqual, 0.5);
    const Instance inst = b.build();
    const BoundBox box(inst);
    const LpResult parent = solve_lp(inst, box);
    REQUIRE(parent.status == LpStatus::Optimal);
    StrongBranchTally tally;
    const auto sb = strong_branch(inst, box, 0, parent, tally);
    CHECK_FALSE(sb.down.has_value());
    CHECK_FALSE(sb.up.has_value());
    CHECK(tally.no_improvement == 2);
  }
}
