#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rapidip/lp.hpp"
#include "rapidip/mipsearch.hpp"

using namespace rapidip;

namespace {

SolveConfig plain() {
  SolveConfig c;
  c.rapid.mode = RapidMode::Off;
  return c;
}

}  // namespace

TEST_SUITE("mipsearch") {
  TEST_CASE("binary packing optimum") {
    InstanceBuilder b;
    const int x = b.add_variable(-1, 0, 1, true);
    const int y = b.add_variable(-1, 0, 1, true);
    b.add_row({{x, 1}, {y, 1}}, Sense::LessEqual, 1);
    const Instance inst = b.build();
    const SolveResult r = solve(inst, plain());
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(-1.0));
    CHECK(r.objective == doctest::Approx(testing::enumerate_optimum(inst).value));
  }

  TEST_CASE("infeasible instance") {
    InstanceBuilder b;
    const int x = b.add_variable(0, 0, 1, true);
    const int y = b.add_variable(0, 0, 1, true);
    b.add_row({{x, 1}, {y, 1}}, Sense::GreaterEqual, 3);
    b.add_row({{x, 1}, {y, 1}}, Sense::LessEqual, 1);
    const Instance inst = b.build();
    const SolveResult r = solve(inst, SolveConfig{});
    CHECK(r.status == SolveStatus::Infeasible);
    CHECK_FALSE(r.solution);
    CHECK(r.stats.n_solutions == 0);
  }

  TEST_CASE("node limit 0 stops at the root LP") {
    InstanceBuilder b;
    const int x = b.add_variable(-1, 0, 3, true);
    const int y = b.add_variable(-1, 0, 3, true);
    b.add_row({{x, 2}, {y, 2}}, Sense::LessEqual, 5);
    const Instance inst = b.build();
    SolveConfig cfg = plain();
    cfg.node_limit = 0;
    const SolveResult r = solve(inst, cfg);
    CHECK(r.status == SolveStatus::NodeLimit);
    const LpResult root = solve_lp(inst, BoundBox(inst));
    CHECK(r.dual_bound == doctest::Approx(root.objective));
  }

  TEST_CASE("random instances match enumeration in every mode") {
    std::mt19937_64 rng(77);
    for (int k = 0; k < 80; ++k) {
      const Instance inst = testing::random_ip(rng);
      const auto oracle = testing::enumerate_optimum(inst);
      for (RapidMode mode : {RapidMode::Off, RapidMode::Root, RapidMode::Local}) {
        SolveConfig cfg;
        cfg.rapid.mode = mode;
        cfg.rapid.criteria = parse_criteria("dualbound,leaves,degeneracy,obj,nsols,sblps");
        cfg.rapid.f = 1;
        cfg.rapid.beta = 2;
        cfg.collect_events = true;
        const SolveResult r = solve(inst, cfg);
        if (!oracle.feasible) {
          CHECK(r.status == SolveStatus::Infeasible);
          continue;
        }
        REQUIRE(r.status == SolveStatus::Optimal);
        CHECK(r.objective == doctest::Approx(oracle.value));
        CHECK(inst.is_feasible(*r.solution));

        double last_dual = -kInf, last_inc = kInf;
        for (const auto& e : r.events) {
          CHECK(e.dual_bound >= last_dual - 1e-9);
          CHECK(e.incumbent <= last_inc + 1e-9);
          last_dual = e.dual_bound;
          last_inc = e.incumbent;
          if (e.rl) CHECK(is_rl_depth(e.depth, cfg.rapid.f, cfg.rapid.beta));
          if (mode != RapidMode::Local && e.depth > 0) CHECK_FALSE(e.rl.has_value());
        }
      }
    }
  }

  TEST_CASE("all criteria disabled equals the baseline") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 40; ++k) {
      const Instance inst = testing::random_ip(rng);
      SolveConfig off = plain();
      off.collect_events = true;
      SolveConfig none;
      none.rapid.criteria = parse_criteria("none");
      none.collect_events = true;
      CHECK(events_to_jsonl(solve(inst, off).events) == events_to_jsonl(solve(inst, none).events));
    }
  }

  TEST_CASE("same seed, same run") {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 20; ++k) {
      const Instance inst = testing::random_ip(rng);
      SolveConfig cfg;
      cfg.rapid.criteria = parse_criteria("dualbound,leaves,degeneracy,obj,nsols,sblps");
      cfg.rapid.f = 1;
      cfg.rapid.beta = 2;
      cfg.rapid.base_seed = 42;
      cfg.collect_events = true;
      const auto a = solve(inst, cfg);
      const auto b = solve(inst, cfg);
      CHECK(events_to_jsonl(a.events) == events_to_jsonl(b.events));
      CHECK(a.nodes == b.nodes);
    }
  }

  TEST_CASE("hybrid branching") {
    SearchStats s(3);
    const std::vector<int> cand{0, 1, 2};
    const std::vector<double> x{0.5, 0.5, 0.5};
    CHECK(select_branching(cand, x, s) == 0);

    s.update_pseudocost(1, BranchDir::Down, 2.0, 0.5);
    s.update_pseudocost(1, BranchDir::Up, 2.0, 0.5);
    CHECK(select_branching(cand, x, s) == 1);

    // leaf ratio 20: conflict weights let VSIDS activity 5 beat pseudo-cost 5
    SearchStats t(2);
    t.leaves_infeasible = 20;
    t.leaves_cutoff = 1;
    for (int i = 0; i < 5; ++i) t.vsids.bump(BoundDisjunction({{0, Side::Upper, 0}}));
    t.pc_down[1] = {5.0, 1};
    t.pc_up[1] = {5.0, 1};
    const std::vector<int> two{0, 1};
    const std::vector<double> half{0.5, 0.5};
    CHECK(branching_weights(t).vsids == kConflictHeavyWeights.vsids);
    CHECK(select_branching(two, half, t) == 0);
    t.leaves_infeasible = 10;
    CHECK(select_branching(two, half, t) == 1);
  }

  TEST_CASE("vsids bump and decay") {
    VsidsTable v(3);
    v.bump(BoundDisjunction({{0, Side::Lower, 1}, {1, Side::Upper, 0}}));
    CHECK(v.activity(0) == 1.0);
    CHECK(v.activity(1) == 1.0);
    CHECK(v.activity(2) == 0.0);

    VsidsTable w(2);
    w.bump(BoundDisjunction({{0, Side::Lower, 1}}));
    for (int i = 1; i < 100; ++i) w.bump(BoundDisjunction({{1, Side::Lower, 1}}));
    CHECK(w.activity(0) == doctest::Approx(0.95));
    CHECK(w.activity(1) == doctest::Approx(99 * 0.95));
  }

  TEST_CASE("leaf accounting") {
    SearchStats s(1);
    record_leaf(s, LeafKind::Infeasible);
    CHECK(s.leaves_infeasible == 1);
    record_leaf(s, LeafKind::Cutoff);
    CHECK(s.leaves_cutoff == 1);
    const std::vector<double> x{1.0};
    record_leaf(s, LeafKind::Improving, x, -3.0);
    CHECK(s.n_solutions == 1);
    CHECK(s.incumbent_value == -3.0);
  }

  TEST_CASE("branch hash follows branching events") {
    NodeEvent a;
    a.action = "branch";
    a.branch = BranchRecord{1, 0.5};
    NodeEvent b = a;
    b.branch = BranchRecord{2, 0.5};
    CHECK(branch_hash({a}) == branch_hash({a}));
    CHECK(branch_hash({a}) != branch_hash({b}));
  }
}
