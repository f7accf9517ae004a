#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rapidip/bench.hpp"
#include "rapidip/error.hpp"
#include "rapidip/mipsearch.hpp"
#include "rapidip/mps.hpp"

namespace rapidip::cli {

namespace {

struct SolveOptions {
  std::string path;
  std::string rapid = "local";
  std::string criteria = "degeneracy";
  long long freq_f = 5;
  double freq_beta = 4.0;
  long long max_conflicts = 10;
  std::uint64_t seed = 0;
  long long node_limit = -1;
  double time_limit = 3600.0;
  std::string events_path;
  std::string solution_path;
  bool json = false;
  bool omit_timing = false;
  bool fixed = false;
};

struct BenchOptions {
  std::string dir;
  std::vector<std::string> configs;
  std::string baseline;
  std::string seeds = "0";
  long long node_limit = -1;
  double time_limit = 3600.0;
  std::size_t workers = 1;
  std::string csv_path;
  std::string rows_path;
  std::string markdown_path;
};

struct ConvertOptions {
  std::string input;
  std::string output;
  bool fixed = false;
};

RapidConfig rapid_config(const std::string& mode, const std::string& criteria, long long f,
                         double beta, long long max_conflicts, std::uint64_t seed) {
  RapidConfig rc;
  const auto m = rapid_mode_from_string(mode);
  if (!m) throw Error(ErrorCode::InvalidConfig, "unknown --rapid mode '" + mode + "'");
  rc.mode = *m;
  rc.criteria = parse_criteria(criteria);
  rc.f = f;
  rc.beta = beta;
  if (max_conflicts < 0) throw Error(ErrorCode::InvalidConfig, "--max-conflicts must be >= 0");
  rc.max_transferred_conflicts = static_cast<std::size_t>(max_conflicts);
  rc.base_seed = seed;
  validate(rc);
  return rc;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  f << text;
  if (!f) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

nlohmann::ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  SolveConfig sc;
  try {
    sc.rapid = rapid_config(o.rapid, o.criteria, o.freq_f, o.freq_beta, o.max_conflicts, o.seed);
    if (!(o.time_limit > 0.0)) throw Error(ErrorCode::InvalidConfig, "--time-limit must be > 0");
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (o.node_limit >= 0) sc.node_limit = static_cast<std::uint64_t>(o.node_limit);
  sc.time_limit = o.time_limit;
  sc.collect_events = !o.events_path.empty();

  ParsedModel model;
  try {
    model = read_mps_file(o.path, o.fixed ? MpsFormat::Fixed : MpsFormat::Free);
  } catch (const Error& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  }
  for (const auto& w : model.diagnostics.warnings) {
    err << "warning: " << model.diagnostics.source << ":" << w.line << ": " << w.message << "\n";
  }
  const Instance& inst = model.instance;

  SolveResult res;
  try {
    res = solve(inst, sc);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  const double objective = res.solution ? reported_objective(inst, res.objective) : kInf;
  const double dual = reported_objective(inst, res.dual_bound);

  if (o.json) {
    nlohmann::ordered_json j;
    j["status"] = std::string(to_string(res.status));
    j["objective"] = res.solution ? num(objective) : nlohmann::ordered_json(nullptr);
    j["dual_bound"] = num(dual);
    j["nodes"] = res.nodes;
    j["rl_calls"] = res.rl_calls;
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (Criterion c : kAllCriteria) counts[std::string(to_string(c))] = res.criterion_counts[static_cast<std::size_t>(c)];
    j["criterion_counts"] = counts;
    j["wall_seconds"] = o.omit_timing ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(res.wall_seconds);
    j["seed"] = o.seed;
    out << j.dump(2) << "\n";
  } else {
    out << "status      " << to_string(res.status) << "\n";
    out << "objective   " << (res.solution ? format_value(objective) : "-") << "\n";
    out << "dual bound  " << format_value(dual) << "\n";
    out << "nodes       " << res.nodes << "\n";
    out << "rl calls    " << res.rl_calls << "\n";
    out << "criteria   ";
    for (Criterion c : kAllCriteria) out << " " << to_string(c) << "=" << res.criterion_counts[static_cast<std::size_t>(c)];
    out << "\n";
    if (!o.omit_timing) out << "time        " << format_value(res.wall_seconds) << "s\n";
  }

  try {
    if (!o.events_path.empty()) write_text(o.events_path, events_to_jsonl(res.events));
    if (!o.solution_path.empty()) {
      std::ostringstream s;
      if (res.solution) {
        for (std::size_t j = 0; j < inst.num_vars(); ++j)
          s << inst.var_name(j) << " " << format_value((*res.solution)[j]) << "\n";
      }
      write_text(o.solution_path, s.str());
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

// name=mode[:criteria]
BenchConfig bench_config(const std::string& spec, const BenchOptions& o) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorCode::InvalidConfig, "bench config must look like name=mode[:criteria]");
  BenchConfig bc;
  bc.name = spec.substr(0, eq);
  std::string rest = spec.substr(eq + 1);
  std::string criteria = "degeneracy";
  if (const auto colon = rest.find(':'); colon != std::string::npos) {
    criteria = rest.substr(colon + 1);
    rest = rest.substr(0, colon);
  }
  bc.solve.rapid = rapid_config(rest, criteria, 5, 4.0, 10, 0);
  bc.solve.time_limit = o.time_limit;
  if (o.node_limit >= 0) bc.solve.node_limit = static_cast<std::uint64_t>(o.node_limit);
  return bc;
}

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<BenchConfig> configs;
  std::vector<std::uint64_t> seeds;
  try {
    const auto specs = o.configs.empty()
                           ? std::vector<std::string>{"off=off", "local=local:degeneracy"}
                           : o.configs;
    for (const auto& s : specs) configs.push_back(bench_config(s, o));
    std::stringstream ss(o.seeds);
    for (std::string tok; std::getline(ss, tok, ',');) {
      if (tok.empty()) continue;
      std::size_t used = 0;
      const unsigned long long v = std::stoull(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      seeds.push_back(v);
    }
    if (seeds.empty()) throw Error(ErrorCode::InvalidConfig, "--seeds needs at least one seed");
    if (!(o.time_limit > 0.0)) throw Error(ErrorCode::InvalidConfig, "--time-limit must be > 0");
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "config error: bad seed list '" << o.seeds << "'\n";
    return kExitConfig;
  }
  const std::string baseline = o.baseline.empty() ? configs.front().name : o.baseline;

  SuiteResult suite;
  try {
    suite = run_suite(o.dir, configs, seeds, o.workers);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  for (const auto& w : suite.warnings) err << "warning: " << w << "\n";
  if (suite.rows.empty()) return kExitOk;

  try {
    const BenchReport report = summarize(suite.rows, baseline);
    out << report_to_markdown(report);
    if (!o.csv_path.empty()) write_text(o.csv_path, report_to_csv(report));
    if (!o.markdown_path.empty()) write_text(o.markdown_path, report_to_markdown(report));
    if (!o.rows_path.empty()) write_text(o.rows_path, rows_to_csv(suite.rows));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

int cmd_convert(const ConvertOptions& o, std::ostream& err) {
  ParsedModel model;
  try {
    model = read_mps_file(o.input, o.fixed ? MpsFormat::Fixed : MpsFormat::Free);
  } catch (const Error& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  }
  try {
    write_mps(model.instance, o.output);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Branch-and-bound IP solver with embedded conflict-learning CP search", "rapidip"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one MPS instance");
  solve_cmd->add_option("file", so.path, "MPS file")->required();
  solve_cmd->add_option("--rapid", so.rapid, "Rapid Learning mode: off, root, local")->capture_default_str();
  solve_cmd->add_option("--criteria", so.criteria,
                        "Comma list of dualbound,leaves,degeneracy,obj,nsols,sblps (or none)")
      ->capture_default_str();
  solve_cmd->add_option("--freq-f", so.freq_f, "Depth schedule offset f")->capture_default_str();
  solve_cmd->add_option("--freq-beta", so.freq_beta, "Depth schedule base beta")->capture_default_str();
  solve_cmd->add_option("--max-conflicts", so.max_conflicts, "Conflicts transferred per call")
      ->capture_default_str();
  solve_cmd->add_option("--seed", so.seed, "Base random seed")->capture_default_str();
  solve_cmd->add_option("--node-limit", so.node_limit, "Node limit (0: root LP only)");
  solve_cmd->add_option("--time-limit", so.time_limit, "Time limit in seconds")->capture_default_str();
  solve_cmd->add_option("--emit-events", so.events_path, "Write the node event log (JSON lines)");
  solve_cmd->add_option("--solution", so.solution_path, "Write '<var> <value>' lines");
  solve_cmd->add_flag("--json", so.json, "Print the result as JSON");
  solve_cmd->add_flag("--omit-timing", so.omit_timing, "Leave wall-clock time out of the output");
  solve_cmd->add_flag("--fixed", so.fixed, "Read fixed-column MPS");

  BenchOptions bo;
  auto* bench_cmd = app.add_subcommand("bench", "Run every instance of a directory under several configs");
  bench_cmd->add_option("dir", bo.dir, "Directory with .mps files")->required();
  bench_cmd->add_option("--config", bo.configs, "name=mode[:criteria], repeatable");
  bench_cmd->add_option("--baseline", bo.baseline, "Config the ratios refer to (default: first)");
  bench_cmd->add_option("--seeds", bo.seeds, "Comma list of seeds")->capture_default_str();
  bench_cmd->add_option("--node-limit", bo.node_limit, "Node limit per run");
  bench_cmd->add_option("--time-limit", bo.time_limit, "Time limit per run")->capture_default_str();
  bench_cmd->add_option("--workers", bo.workers, "Parallel worker threads")->capture_default_str();
  bench_cmd->add_option("--csv", bo.csv_path, "Write the summary table as CSV");
  bench_cmd->add_option("--markdown", bo.markdown_path, "Write the summary table as Markdown");
  bench_cmd->add_option("--rows", bo.rows_path, "Write per-run rows as CSV");

  ConvertOptions co;
  auto* convert_cmd = app.add_subcommand("convert", "Re-emit an MPS file in free format");
  convert_cmd->add_option("input", co.input)->required();
  convert_cmd->add_option("output", co.output)->required();
  convert_cmd->add_flag("--fixed", co.fixed, "Read fixed-column MPS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (*solve_cmd) return cmd_solve(so, out, err);
  if (*bench_cmd) return cmd_bench(bo, out, err);
  return cmd_convert(co, err);
}

}  // namespace rapidip::cli
