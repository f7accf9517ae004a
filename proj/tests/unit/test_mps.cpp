#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "rapidip/error.hpp"
#include "rapidip/mipsearch.hpp"
#include "rapidip/mps.hpp"

using namespace rapidip;
namespace fs = std::filesystem;

namespace {

std::set<std::vector<double>> point_set(const Instance& inst) {
  std::set<std::vector<double>> out;
  for (const auto& p : testing::feasible_points(inst)) out.insert(p.x);
  return out;
}

ErrorCode parse_error(std::string_view text) {
  try {
    parse_mps(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error");
  return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("mps") {
  TEST_CASE("single variable") {
    const auto pm = parse_mps(
        "NAME ONE\nROWS\n N obj\nCOLUMNS\n x obj 1\nRHS\nENDATA\n");
    const Instance& inst = pm.instance;
    CHECK(inst.num_vars() == 1);
    CHECK(inst.num_rows() == 0);
    CHECK(inst.objective()[0] == 1);
    CHECK(inst.lower()[0] == 0);
    CHECK(inst.upper()[0] == kInf);
    CHECK_FALSE(inst.is_integer(0));
  }

  TEST_CASE("golden knapsack fixture") {
    const auto pm = read_mps_file(RAPIDIP_TEST_DATA "/knapsack2.mps");
    const Instance& inst = pm.instance;
    REQUIRE(inst.num_vars() == 2);
    CHECK(inst.var_name(0) == "x");
    CHECK(inst.var_name(1) == "y");
    CHECK(inst.is_integer(0));
    CHECK(inst.is_integer(1));
    CHECK(inst.maximize());
    CHECK(inst.objective()[0] == -1);
    REQUIRE(inst.num_rows() == 1);
    CHECK(inst.row(0).rhs == 6);
    CHECK(inst.upper()[0] == 10);
    // hand count: 2x + 3y <= 6 over [0,10]^2
    CHECK(point_set(inst).size() == 7);
  }

  TEST_CASE("INTORG default upper bound is 1") {
    const auto pm = parse_mps(
        "NAME T\nROWS\n N obj\n L c\nCOLUMNS\n"
        " M1 'MARKER' 'INTORG'\n x obj 1 c 1\n M2 'MARKER' 'INTEND'\n"
        "RHS\n RHS c 5\nENDATA\n");
    CHECK(pm.instance.is_integer(0));
    CHECK(pm.instance.upper()[0] == 1);
  }

  TEST_CASE("fixed format with spaces in names") {
    // fields start at columns 2, 5, 15, 25, 40, 50
    auto line = [](std::vector<std::pair<std::size_t, std::string>> fields) {
      std::string s;
      for (const auto& [col, text] : fields) {
        s.resize(col - 1, ' ');
        s += text;
      }
      return s + "\n";
    };
    const std::string text = "NAME          FIX\nROWS\n" + line({{2, "N"}, {5, "COST"}}) +
                             line({{2, "G"}, {5, "LIM 1"}}) + "COLUMNS\n" +
                             line({{5, "X ONE"}, {15, "COST"}, {25, "1.0"}, {40, "LIM 1"}, {50, "1.0"}}) +
                             "RHS\n" + line({{5, "RHS"}, {15, "LIM 1"}, {25, "2.0"}}) + "BOUNDS\n" +
                             line({{2, "UP"}, {5, "BND"}, {15, "X ONE"}, {25, "4.0"}}) + "ENDATA\n";
    const auto pm = parse_mps(text, "fix", MpsFormat::Fixed);
    CHECK(pm.instance.var_name(0) == "X ONE");
    CHECK(pm.instance.row(0).rhs == -2);
    CHECK(pm.instance.upper()[0] == 4);
  }

  TEST_CASE("ranges and equality rows") {
    const auto pm = parse_mps(
        "NAME R\nROWS\n N obj\n E e\n L r\nCOLUMNS\n x obj 1 e 1\n x r 1\n y e 1\n"
        "RHS\n RHS e 2 r 3\nRANGES\n RNG r 2\nBOUNDS\n UP BND x 5\n UP BND y 5\nENDATA\n");
    // e: two rows; r: 1 <= x <= 3 -> two rows
    CHECK(pm.instance.num_rows() == 4);
  }

  TEST_CASE("objective constant and MAX") {
    const auto pm = parse_mps(
        "NAME C\nOBJSENSE MAX\nROWS\n N obj\nCOLUMNS\n x obj 2\nRHS\n RHS obj -3\n"
        "BOUNDS\n UP BND x 1\nENDATA\n");
    const Instance& inst = pm.instance;
    CHECK(inst.maximize());
    // reported value 2x + 3 at x = 1; internal c^T x = -2
    CHECK(reported_objective(inst, -2.0) == doctest::Approx(5.0));
    const SolveResult r = solve(inst, SolveConfig{});
    CHECK(reported_objective(inst, r.objective) == doctest::Approx(5.0));
  }

  TEST_CASE("errors") {
    CHECK(parse_error("NAME A\nROWS\n N obj\nCOLUMNS\n x obj 1\nRHS\n RHS nope 1\nENDATA\n") ==
          ErrorCode::UnknownRowReference);
    CHECK(parse_error("NAME A\nCOLUMNS\n x obj 1\nROWS\n N obj\nENDATA\n") ==
          ErrorCode::MalformedSection);
    CHECK(parse_error("NAME A\nROWS\n N obj\nFOO\nENDATA\n") == ErrorCode::MalformedSection);
    CHECK(parse_error("NAME A\nROWS\n N obj\nCOLUMNS\n x obj abc\nENDATA\n") ==
          ErrorCode::NonNumericField);
  }

  TEST_CASE("error messages carry the line") {
    try {
      parse_mps("NAME A\nROWS\n N obj\nCOLUMNS\n x obj abc\nENDATA\n", "f.mps");
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("f.mps:5") != std::string::npos);
    }
  }

  TEST_CASE("round trip keeps the integer-feasible set") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 40; ++k) {
      const Instance a = testing::random_ip(rng, {.max_vars = 5, .max_rows = 4});
      const Instance b = parse_mps(to_mps(a)).instance;
      REQUIRE(a.num_vars() == b.num_vars());
      CHECK(a.lower() == b.lower());
      CHECK(a.upper() == b.upper());
      CHECK(a.objective() == b.objective());
      CHECK(point_set(a) == point_set(b));
    }
  }

  TEST_CASE("round trip of the fixture through a file") {
    const auto a = read_mps_file(RAPIDIP_TEST_DATA "/knapsack2.mps").instance;
    const fs::path tmp = fs::temp_directory_path() / "rapidip_rt_knapsack2.mps";
    write_mps(a, tmp.string());
    const auto b = read_mps_file(tmp.string()).instance;
    fs::remove(tmp);
    CHECK(point_set(a) == point_set(b));
    CHECK(b.maximize());
    CHECK(a.objective() == b.objective());
  }

  TEST_CASE("empty instance writes a valid file") {
    const Instance empty = InstanceBuilder{}.build();
    const std::string text = to_mps(empty);
    CHECK(text.find("COLUMNS") != std::string::npos);
    const Instance back = parse_mps(text).instance;
    CHECK(back.num_vars() == 0);
    CHECK(back.num_rows() == 0);
  }

  TEST_CASE("unwritable path") {
    InstanceBuilder b;
    b.add_variable(1, 0, 1, true);
    try {
      write_mps(b.build(), "/nonexistent-dir/x.mps");
      FAIL("expected Io");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Io);
      CHECK(std::string(e.what()).find("/nonexistent-dir/x.mps") != std::string::npos);
    }
  }

  TEST_CASE("fuzz: arbitrary bytes never crash") {
    std::mt19937_64 rng(5);
    const std::string seed_text =
        "NAME F\nROWS\n N obj\n L c\n G d\nCOLUMNS\n M 'MARKER' 'INTORG'\n x obj 1 c 2\n"
        " y c 3 d 1\n M 'MARKER' 'INTEND'\nRHS\n RHS c 6 d 1\nRANGES\n R c 2\n"
        "BOUNDS\n UP B x 4\n LO B y 1\n FR B z\nENDATA\n";
    const std::string alphabet = " \n\t'-+.eE0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZxyzc\x01\xff";
    for (int k = 0; k < 3000; ++k) {
      std::string text = seed_text;
      const int edits = testing::uniform(rng, 1, 8);
      for (int e = 0; e < edits; ++e) {
        const auto pos = static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<int>(text.size()) - 1));
        const char ch = alphabet[static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<int>(alphabet.size()) - 1))];
        switch (testing::uniform(rng, 0, 2)) {
          case 0: text[pos] = ch; break;
          case 1: text.insert(text.begin() + static_cast<long>(pos), ch); break;
          default: text.erase(pos, 1); break;
        }
      }
      try {
        parse_mps(text);
      } catch (const Error&) {
      }
    }
    for (int k = 0; k < 500; ++k) {
      std::string junk(static_cast<std::size_t>(testing::uniform(rng, 0, 200)), '\0');
      for (char& c : junk) c = static_cast<char>(testing::uniform(rng, 0, 255));
      try {
        parse_mps(junk);
      } catch (const Error&) {
      }
    }
    CHECK(true);
  }
}
