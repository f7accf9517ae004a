#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "rapidip/bench.hpp"
#include "rapidip/error.hpp"
#include "rapidip/mps.hpp"

using namespace rapidip;
namespace fs = std::filesystem;

namespace {

BenchConfig config(const std::string& name, RapidMode mode) {
  BenchConfig c;
  c.name = name;
  c.solve.rapid.mode = mode;
  return c;
}

BenchRow row(const std::string& inst, std::uint64_t seed, const std::string& cfg, std::uint64_t hash) {
  BenchRow r;
  r.instance = inst;
  r.seed = seed;
  r.config = cfg;
  r.status = "optimal";
  r.branch_hash = hash;
  return r;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("shifted geometric mean") {
    const std::vector<double> same{7, 7, 7};
    CHECK(shifted_geomean(same, 1) == doctest::Approx(7));
    const std::vector<double> zeros{0, 0};
    CHECK(shifted_geomean(zeros, 1) == doctest::Approx(0).epsilon(1e-12));
    const std::vector<double> pair{10, 1000};
    CHECK(shifted_geomean(pair, 1) == doctest::Approx(std::sqrt(11.0 * 1001.0) - 1.0));
    CHECK(std::abs(shifted_geomean(pair, 1) - 103.93) < 0.01);
  }

  TEST_CASE("shifted geometric mean is symmetric and monotone") {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 50; ++k) {
      std::vector<double> v(static_cast<std::size_t>(testing::uniform(rng, 1, 8)));
      for (double& x : v) x = testing::uniform(rng, 0, 1000);
      const double base = shifted_geomean(v, 100);
      std::vector<double> p = v;
      std::shuffle(p.begin(), p.end(), rng);
      CHECK(shifted_geomean(p, 100) == doctest::Approx(base));
      p = v;
      p[0] += 5;
      CHECK(shifted_geomean(p, 100) > base);
    }
  }

  TEST_CASE("cartesian suite") {
    std::mt19937_64 rng(2);
    std::vector<std::pair<std::string, Instance>> insts{{"a", testing::random_ip(rng)},
                                                        {"b", testing::random_ip(rng)}};
    const auto suite = run_suite(insts, {config("off", RapidMode::Off), config("local", RapidMode::Local)},
                                 {1, 2}, 2);
    CHECK(suite.rows.size() == 8);
    CHECK(suite.rows[0].instance == "a");
    CHECK(suite.rows[0].seed == 1);
    CHECK(suite.rows[0].config == "off");
    CHECK(suite.rows[1].config == "local");
    const auto serial = run_suite(insts, {config("off", RapidMode::Off), config("local", RapidMode::Local)},
                                  {1, 2}, 1);
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(serial.rows[i].nodes == suite.rows[i].nodes);
      CHECK(serial.rows[i].branch_hash == suite.rows[i].branch_hash);
    }
  }

  TEST_CASE("time limit row") {
    std::mt19937_64 rng(3);
    const Instance big = testing::random_feasibility_ip(rng, 40, 30);
    BenchConfig c = config("off", RapidMode::Off);
    c.solve.time_limit = 1e-9;
    const auto suite = run_suite({{"big", big}}, {c}, {0});
    REQUIRE(suite.rows.size() == 1);
    if (suite.rows[0].status == "time_limit") CHECK(suite.rows[0].time == 1e-9);
    CHECK((suite.rows[0].status == "time_limit" || suite.rows[0].solved()));
  }

  TEST_CASE("empty directory") {
    const fs::path dir = fs::temp_directory_path() / "rapidip_empty_bench";
    fs::create_directories(dir);
    const auto suite = run_suite(dir.string(), {config("off", RapidMode::Off)}, {0});
    fs::remove_all(dir);
    CHECK(suite.rows.empty());
    CHECK_FALSE(suite.warnings.empty());
  }

  TEST_CASE("broken files become error rows") {
    const fs::path dir = fs::temp_directory_path() / "rapidip_broken_bench";
    fs::create_directories(dir);
    {
      std::ofstream(dir / "bad.mps") << "NAME X\nFOO\n";
    }
    InstanceBuilder b;
    b.add_variable(1, 0, 1, true);
    write_mps(b.build(), (dir / "good.mps").string());
    const auto suite = run_suite(dir.string(), {config("off", RapidMode::Off)}, {0});
    fs::remove_all(dir);
    REQUIRE(suite.rows.size() == 2);
    CHECK(suite.rows[0].status == "error");
    CHECK_FALSE(suite.rows[0].error.empty());
    CHECK(suite.rows[1].status == "optimal");
  }

  TEST_CASE("affected split") {
    const std::vector<BenchRow> base{row("a", 0, "off", 1), row("b", 0, "off", 2)};
    const std::vector<BenchRow> same{row("a", 0, "rl", 1), row("b", 0, "rl", 2)};
    const auto s = affected_split(base, same);
    CHECK(s.affected.empty());
    CHECK(s.unaffected.size() == 2);

    const std::vector<BenchRow> diff{row("a", 0, "rl", 9), row("b", 0, "rl", 2)};
    const auto d = affected_split(base, diff);
    REQUIRE(d.affected.size() == 1);
    CHECK(d.affected[0].first == "a");

    const std::vector<BenchRow> missing{row("a", 0, "off", 1)};
    CHECK_THROWS_AS(affected_split(missing, same), Error);
  }

  TEST_CASE("report") {
    std::vector<BenchRow> rows;
    for (int i = 0; i < 4; ++i) {
      BenchRow a = row("i" + std::to_string(i), 0, "off", 1);
      a.time = 2;
      a.nodes = 100;
      BenchRow b = row("i" + std::to_string(i), 0, "rl", i % 2 ? 1 : 2);
      b.time = 1;
      b.nodes = 50;
      rows.push_back(a);
      rows.push_back(b);
    }
    const BenchReport rep = summarize(rows, "off");
    REQUIRE(rep.configs.size() == 2);
    const ConfigSummary& rl = rep.configs[1];
    CHECK(rl.config == "rl");
    CHECK(rl.solved == 4);
    CHECK(rl.time == doctest::Approx(1));
    CHECK(rl.time_q == doctest::Approx(0.5));
    CHECK(rl.nodes_q == doctest::Approx(0.5));
    CHECK(rl.affected == 2);
    CHECK(rl.unaffected == 2);
    const std::string md = report_to_markdown(rep);
    CHECK(md.find("| rl") != std::string::npos);
    CHECK(report_to_csv(rep).find("time_Q") != std::string::npos);
  }
}
