#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rapidip/error.hpp"
#include "rapidip/mipsearch.hpp"
#include "rapidip/rapid.hpp"

using namespace rapidip;

namespace {

struct Fixture {
  Instance inst;
  BoundBox box;
  SearchStats stats;
  RapidConfig cfg;

  Fixture() {
    InstanceBuilder b;
    b.add_variable(1, 0, 3, true);
    b.add_variable(0, 0, 3, true);
    inst = b.build();
    box = BoundBox(inst);
    stats = SearchStats(inst.num_vars());
    stats.n_solutions = 1;
    stats.dual_bound = 1.0;
    stats.root_dual_bound = 0.0;
  }

  CriterionReport eval(double share, double ratio) const {
    DegeneracyInfo d;
    d.degenerate_share = share;
    d.face_var_constraint_ratio = ratio;
    return evaluate_criteria(inst, box, stats, d, cfg);
  }
};

}  // namespace

TEST_SUITE("rapid") {
  TEST_CASE("depth schedule") {
    for (long long d = 0; d <= 1000; ++d) {
      const bool expect = d == 0 || d == 5 || d == 20 || d == 80 || d == 320;
      CHECK(is_rl_depth(d, 5, 4) == expect);
    }
    CHECK_FALSE(is_rl_depth(10, 5, 4));
    RapidConfig bad;
    bad.f = 1;
    bad.beta = 1;
    CHECK_THROWS_AS(validate(bad), Error);
  }

  TEST_CASE("degeneracy criterion") {
    Fixture f;
    CHECK(f.eval(0.85, 1.0).fired_on(Criterion::Degeneracy));
    CHECK(f.eval(0.5, 2.5).fired_on(Criterion::Degeneracy));
    CHECK_FALSE(f.eval(0.80, 2.0).fired_on(Criterion::Degeneracy));
  }

  TEST_CASE("leaves criterion") {
    Fixture f;
    f.stats.leaves_infeasible = 100;
    f.stats.leaves_cutoff = 5;
    CHECK(f.eval(0, 0).fired_on(Criterion::Leaves));
    f.stats.leaves_infeasible = 50;
    CHECK_FALSE(f.eval(0, 0).fired_on(Criterion::Leaves));
  }

  TEST_CASE("obj, nsols, dualbound, sblps") {
    Fixture f;
    CHECK_FALSE(f.eval(0, 0).fired_on(Criterion::Obj));
    f.box.tighten(0, Side::Upper, 0);
    CHECK(f.eval(0, 0).fired_on(Criterion::Obj));

    CHECK_FALSE(f.eval(0, 0).fired_on(Criterion::NSols));
    f.stats.n_solutions = 0;
    CHECK(f.eval(0, 0).fired_on(Criterion::NSols));

    CHECK_FALSE(f.eval(0, 0).fired_on(Criterion::DualBound));
    f.stats.dual_bound = 0.0;
    CHECK(f.eval(0, 0).fired_on(Criterion::DualBound));

    CHECK_FALSE(f.eval(0, 0).fired_on(Criterion::SbLps));
    f.stats.sb_no_improvement = 11;
    f.stats.sb_objective_changed = 1;
    CHECK(f.eval(0, 0).fired_on(Criterion::SbLps));
  }

  TEST_CASE("run decisions") {
    Fixture f;
    DegeneracyInfo high;
    high.degenerate_share = 0.9;
    CHECK_FALSE(decide_run(f.inst, f.box, 7, f.stats, high, f.cfg).run);
    CHECK(decide_run(f.inst, f.box, 5, f.stats, high, f.cfg).run);

    RapidConfig dual_only = f.cfg;
    dual_only.criteria = parse_criteria("dualbound");
    f.stats.dual_bound = f.stats.root_dual_bound;
    CHECK_FALSE(decide_run(f.inst, f.box, 0, f.stats, high, dual_only).run);
    CHECK(decide_run(f.inst, f.box, 5, f.stats, high, dual_only).run);

    RapidConfig root = f.cfg;
    root.mode = RapidMode::Root;
    DegeneracyInfo low;
    CHECK(decide_run(f.inst, f.box, 0, f.stats, low, root).run);
    CHECK_FALSE(decide_run(f.inst, f.box, 5, f.stats, high, root).run);

    RapidConfig off = f.cfg;
    off.mode = RapidMode::Off;
    CHECK_FALSE(decide_run(f.inst, f.box, 0, f.stats, high, off).run);
  }

  TEST_CASE("cp config") {
    SearchStats s(1);
    s.iter_lp = 2000;
    RapidConfig cfg;
    cfg.base_seed = 12;
    const CpConfig a = cp_config_for(3, s, cfg);
    CHECK(a.node_limit == 2000);
    CHECK(a.seed == (12u ^ 3u));
    CHECK(cp_config_for(4, s, cfg).seed != a.seed);
  }

  TEST_CASE("criteria parsing") {
    const CriterionSet s = parse_criteria("degeneracy,leaves");
    CHECK(s[static_cast<std::size_t>(Criterion::Degeneracy)]);
    CHECK(s[static_cast<std::size_t>(Criterion::Leaves)]);
    CHECK_FALSE(s[static_cast<std::size_t>(Criterion::Obj)]);
    CHECK(format_criteria(s) == "leaves,degeneracy");
    CHECK_THROWS_AS(parse_criteria("bogus"), Error);
    CHECK(parse_criteria("none") == CriterionSet{});
  }

  TEST_CASE("transfer keeps the best ten conflicts") {
    InstanceBuilder b;
    for (int j = 0; j < 100; ++j) b.add_variable(0, 0, 1, true);
    const Instance inst = b.build();
    CpOutcome out;
    out.box = BoundBox(inst);
    const std::size_t cap = conflict_length_cap(100, 0.05);
    CHECK(cap == 5);
    for (std::size_t len = 2; len <= cap; ++len) {
      for (int rep = 0; rep < 4; ++rep) {
        LearnedConstraint c;
        for (std::size_t i = 0; i < len; ++i)
          c.disjunction.add({static_cast<int>(i + 10 * static_cast<std::size_t>(rep)), Side::Upper, 0});
        if (rep == 3) c.linear = to_knapsack(c.disjunction, out.box);
        out.conflicts.push_back(c);
      }
    }
    BoundBox node(inst);
    std::vector<LearnedConstraint> sink;
    SearchStats stats(inst.num_vars());
    RapidConfig cfg;
    const auto summary = transfer(out, inst, 4, false, node, sink, stats, cfg);
    CHECK(summary.conflicts_transferred == 10);
    REQUIRE(sink.size() == 10);
    for (std::size_t i = 0; i < 4; ++i) CHECK(sink[i].is_linear());
    for (std::size_t i = 4; i < 10; ++i) CHECK(sink[i].length() <= 3);
    for (const auto& c : sink) {
      CHECK(c.scope == ConstraintScope::Local);
      CHECK(c.node == 4);
    }
  }

  TEST_CASE("transfer prunes solved nodes and installs solutions") {
    InstanceBuilder b;
    const int x = b.add_variable(-1, 0, 1, true);
    const int y = b.add_variable(-1, 0, 1, true);
    b.add_row({{x, 1}, {y, 1}}, Sense::LessEqual, 1);
    const Instance inst = b.build();

    CpOutcome infeasible;
    infeasible.status = CpStatus::SolvedInfeasible;
    infeasible.box = BoundBox(inst);
    BoundBox node(inst);
    std::vector<LearnedConstraint> sink;
    SearchStats stats(2);
    const auto s1 = transfer(infeasible, inst, 3, false, node, sink, stats, RapidConfig{});
    CHECK(s1.node_pruned);
    CHECK(stats.leaves_infeasible == 1);

    CpOutcome found;
    found.status = CpStatus::NodeLimitReached;
    found.box = BoundBox(inst);
    found.solution = std::vector<double>{1, 0};
    found.solution_value = -1;
    SearchStats st(2);
    const auto s2 = transfer(found, inst, 3, false, node, sink, st, RapidConfig{});
    CHECK(s2.solution_installed);
    CHECK(st.n_solutions == 1);
    CHECK(st.incumbent_value == -1);

    CpOutcome bogus = found;
    bogus.solution = std::vector<double>{1, 1};
    SearchStats sb(2);
    const auto s3 = transfer(bogus, inst, 3, false, node, sink, sb, RapidConfig{});
    CHECK(s3.solution_rejected);
    CHECK(sb.n_solutions == 0);
  }

  TEST_CASE("local conflicts stay valid inside their node box") {
    std::mt19937_64 rng(44);
    std::size_t checked = 0;
    for (int k = 0; k < 60; ++k) {
      const Instance inst = testing::random_ip(rng);
      SolveConfig cfg;
      cfg.rapid.criteria = parse_criteria("dualbound,leaves,degeneracy,obj,nsols,sblps");
      cfg.rapid.f = 1;
      cfg.rapid.beta = 2;
      cfg.rapid.max_conflict_frac = 1.0;
      cfg.audit = true;
      const SolveResult r = solve(inst, cfg);
      const auto points = testing::feasible_points(inst);
      for (const auto& a : r.learned) {
        for (const auto& p : points) {
          if (!a.scope.contains(p.x) || p.value >= a.constraint.cutoff - 1e-6) continue;
          ++checked;
          CHECK(testing::satisfies(a.constraint, p.x));
        }
      }
    }
    CHECK(checked > 0);
  }
}
