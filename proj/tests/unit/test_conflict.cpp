#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "rapidip/conflict.hpp"
#include "rapidip/error.hpp"

using namespace rapidip;

namespace {

Instance binaries(std::size_t n) {
  InstanceBuilder b;
  for (std::size_t j = 0; j < n; ++j) b.add_variable(0, 0, 1, true);
  return b.build();
}

}  // namespace

TEST_SUITE("conflict") {
  TEST_CASE("1-UIP after a propagated bound") {
    // rows: x1 + x2 <= 1 (x1 >= 1 forces x2 <= 0) and x2 >= 1 fails
    const Instance inst = binaries(2);
    ConflictGraph g(2);
    g.push_level();
    const int b1 = g.record(0, Side::Lower, 1.0, Reason::branching(), std::span<const int>{});
    const int ante[] = {b1};
    const int p2 = g.record(1, Side::Upper, 0.0, Reason::row(0), ante);
    const int fail[] = {p2};
    g.record_failure(Reason::row(1), fail);
    const ConflictAnalysis a = analyze_1uip(g, inst);
    REQUIRE(a.status == AnalysisStatus::Conflict);
    REQUIRE(a.conflict.size() == 1);
    CHECK(a.conflict.literals()[0] == Literal{1, Side::Lower, 1.0});

    // valid for every feasible point of x1 + x2 <= 1, x2 >= 1
    InstanceBuilder b;
    b.add_variable(0, 0, 1, true);
    b.add_variable(0, 0, 1, true);
    b.add_row({{0, 1}, {1, 1}}, Sense::LessEqual, 1);
    b.add_row({{1, 1}}, Sense::GreaterEqual, 1);
    for (const auto& p : testing::feasible_points(b.build())) CHECK(check_disjunction(a.conflict, p.x));
  }

  TEST_CASE("two decisions on different levels") {
    const Instance inst = binaries(2);
    ConflictGraph g(2);
    g.push_level();
    const int b1 = g.record(0, Side::Lower, 1.0, Reason::branching(), std::span<const int>{});
    g.push_level();
    const int b2 = g.record(1, Side::Lower, 1.0, Reason::branching(), std::span<const int>{});
    const int fail[] = {b1, b2};
    g.record_failure(Reason::row(0), fail);
    const ConflictAnalysis a = analyze_1uip(g, inst);
    REQUIRE(a.status == AnalysisStatus::Conflict);
    CHECK(a.failure_level == 2);
    BoundDisjunction expect({{0, Side::Upper, 0.0}, {1, Side::Upper, 0.0}});
    expect.normalize();
    CHECK(a.conflict.literals() == expect.literals());
    int deepest = 0;
    for (int lvl : a.literal_levels) deepest += lvl == a.failure_level;
    CHECK(deepest == 1);
  }

  TEST_CASE("failure at level 0 proves the scope infeasible") {
    const Instance inst = binaries(1);
    ConflictGraph g(1);
    const int p = g.record(0, Side::Upper, 0.0, Reason::row(0), std::span<const int>{});
    const int fail[] = {p};
    g.record_failure(Reason::row(1), fail);
    const ConflictAnalysis a = analyze_1uip(g, inst);
    CHECK(a.status == AnalysisStatus::ScopeInfeasible);
    CHECK(a.conflict.empty());
  }

  TEST_CASE("cuts through a continuous bound abort") {
    InstanceBuilder b;
    b.add_variable(0, 0, 1, true);
    b.add_variable(0, 0, 1, false);
    const Instance inst = b.build();
    ConflictGraph g(2);
    g.push_level();
    const int b1 = g.record(1, Side::Lower, 0.5, Reason::branching(), std::span<const int>{});
    const int fail[] = {b1};
    g.record_failure(Reason::row(0), fail);
    CHECK(analyze_1uip(g, inst).status == AnalysisStatus::AbortContinuous);
  }

  TEST_CASE("to_knapsack on binaries") {
    const BoundBox box({0, 0}, {1, 1});
    const BoundDisjunction d({{0, Side::Upper, 0}, {1, Side::Lower, 1}});
    const auto row = to_knapsack(d, box);
    REQUIRE(row);
    CHECK(row->rhs == 0);
    // both forms exclude exactly (1, 0)
    testing::for_each_point(box, [&](std::span<const double> x) {
      CHECK(check_disjunction(d, x) == (row->activity(x) <= row->rhs));
      CHECK(check_disjunction(d, x) == !(x[0] == 1 && x[1] == 0));
    });
  }

  TEST_CASE("to_knapsack rejects interior values") {
    const BoundBox box({0}, {5});
    CHECK_FALSE(to_knapsack(BoundDisjunction({{0, Side::Upper, 2}}), box).has_value());
  }

  TEST_CASE("to_knapsack single binary literal") {
    const BoundBox box({0, 0, 0, 0}, {1, 1, 1, 1});
    const auto row = to_knapsack(BoundDisjunction({{3, Side::Upper, 0}}), box);
    REQUIRE(row);
    REQUIRE(row->size() == 1);
    CHECK(row->index[0] == 3);
    CHECK(row->coef[0] == 1);
    CHECK(row->rhs == 0);
  }

  TEST_CASE("to_knapsack on general integers matches the disjunction") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 100; ++k) {
      const int n = testing::uniform(rng, 1, 6);
      std::vector<double> lo(n), hi(n);
      for (int j = 0; j < n; ++j) {
        lo[j] = testing::uniform(rng, -2, 1);
        hi[j] = lo[j] + testing::uniform(rng, 1, 3);
      }
      const BoundBox box(lo, hi);
      BoundDisjunction d;
      for (int j = 0; j < n; ++j) {
        const int pick = testing::uniform(rng, 0, 2);
        if (pick == 1) d.add({j, Side::Upper, hi[j] - 1});
        if (pick == 2) d.add({j, Side::Lower, lo[j] + 1});
      }
      if (d.empty()) d.add({0, Side::Upper, hi[0] - 1});
      const auto row = to_knapsack(d, box);
      REQUIRE(row);
      testing::for_each_point(box, [&](std::span<const double> x) {
        CHECK(check_disjunction(d, x) == (row->activity(x) <= row->rhs + 1e-9));
      });
    }
  }

  TEST_CASE("singleton upgrades") {
    BoundBox box({0, 0, 0}, {1, 9, 0});
    CHECK(upgrade_singleton(BoundDisjunction({{1, Side::Upper, 3}}), box));
    CHECK(box.upper(1) == 3);
    CHECK(upgrade_singleton(BoundDisjunction({{0, Side::Lower, 1}}), box));
    CHECK(box.lower(0) == 1);
    CHECK_THROWS_AS(upgrade_singleton(BoundDisjunction({{2, Side::Lower, 1}}), box), Error);
  }

  TEST_CASE("check_disjunction") {
    const BoundDisjunction d({{0, Side::Upper, 0}, {1, Side::Lower, 1}});
    const std::vector<double> a{0, 0}, b{1, 0};
    CHECK(check_disjunction(d, a));
    CHECK_FALSE(check_disjunction(d, b));
    CHECK_FALSE(check_disjunction(BoundDisjunction{}, a));
  }

  TEST_CASE("normalize merges and discards") {
    BoundDisjunction d({{1, Side::Upper, 2}, {1, Side::Upper, 4}, {0, Side::Lower, 3}});
    CHECK(d.normalize());
    REQUIRE(d.size() == 2);
    CHECK(d.literals()[1] == Literal{1, Side::Upper, 4});

    BoundDisjunction both({{0, Side::Upper, 1}, {0, Side::Lower, 3}});
    CHECK_FALSE(both.normalize());
  }
}
