#include "rapidip/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "rapidip/error.hpp"
#include "rapidip/mps.hpp"

namespace rapidip {

namespace {

struct Job {
  const Instance* instance;
  const std::string* error;  // load failure, instance unused
  std::size_t instance_index;
  std::uint64_t seed;
  std::size_t config_index;
};

BenchRow execute(const Job& job, const std::string& name, const BenchConfig& config) {
  BenchRow row;
  row.instance = name;
  row.seed = job.seed;
  row.config = config.name;
  if (job.error) {
    row.status = "error";
    row.error = *job.error;
    return row;
  }
  SolveConfig sc = config.solve;
  sc.rapid.base_seed = job.seed;
  sc.collect_events = true;
  try {
    const SolveResult res = solve(*job.instance, sc);
    row.status = std::string(to_string(res.status));
    row.time = res.status == SolveStatus::TimeLimit ? sc.time_limit : res.wall_seconds;
    row.nodes = res.nodes;
    if (res.solution) row.objective = reported_objective(*job.instance, res.objective);
    row.branch_hash = branch_hash(res.events);
    row.rl_calls = res.rl_calls;
  } catch (const std::exception& e) {
    row.status = "error";
    row.error = e.what();
  }
  return row;
}

std::string fmt(double v, int precision = 2) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

SuiteResult run_suite(const std::vector<std::pair<std::string, Instance>>& instances,
                      const std::vector<BenchConfig>& configs,
                      const std::vector<std::uint64_t>& seeds, std::size_t workers) {
  SuiteResult out;
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::uint64_t seed : seeds) {
      for (std::size_t c = 0; c < configs.size(); ++c) {
        jobs.push_back({&instances[i].second, nullptr, i, seed, c});
      }
    }
  }
  out.rows.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const Job& job = jobs[k];
      out.rows[k] = execute(job, instances[job.instance_index].first, configs[job.config_index]);
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, jobs.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

SuiteResult run_suite(const std::string& dir, const std::vector<BenchConfig>& configs,
                      const std::vector<std::uint64_t>& seeds, std::size_t workers) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  std::error_code ec;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".mps") files.push_back(it->path());
  }
  if (ec) throw Error(ErrorCode::Io, "cannot list '" + dir + "': " + ec.message());
  std::sort(files.begin(), files.end());

  SuiteResult out;
  if (files.empty()) {
    out.warnings.push_back("no .mps files in '" + dir + "'");
    return out;
  }

  std::vector<std::pair<std::string, Instance>> loaded;
  std::vector<std::pair<std::string, std::string>> failed;  // name, error
  std::vector<std::string> order;
  for (const auto& f : files) {
    const std::string name = f.stem().string();
    order.push_back(name);
    try {
      loaded.emplace_back(name, read_mps_file(f.string()).instance);
    } catch (const std::exception& e) {
      failed.emplace_back(name, e.what());
      out.warnings.push_back(name + ": " + e.what());
    }
  }
  SuiteResult ran = run_suite(loaded, configs, seeds, workers);

  // Merge load failures back in file order.
  std::map<std::string, std::vector<BenchRow>> by_instance;
  for (auto& row : ran.rows) by_instance[row.instance].push_back(std::move(row));
  for (const auto& [name, err] : failed) {
    for (std::uint64_t seed : seeds) {
      for (const auto& cfg : configs) {
        BenchRow row;
        row.instance = name;
        row.seed = seed;
        row.config = cfg.name;
        row.status = "error";
        row.error = err;
        by_instance[name].push_back(std::move(row));
      }
    }
  }
  for (const auto& name : order) {
    for (auto& row : by_instance[name]) out.rows.push_back(std::move(row));
  }
  return out;
}

double shifted_geomean(std::span<const double> values, double shift) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += std::log(v + shift);
  return std::exp(sum / static_cast<double>(values.size())) - shift;
}

AffectedSplit affected_split(std::span<const BenchRow> baseline, std::span<const BenchRow> treatment) {
  std::map<RunKey, std::uint64_t> base;
  for (const auto& r : baseline) base[{r.instance, r.seed}] = r.branch_hash;
  std::map<RunKey, std::uint64_t> treat;
  for (const auto& r : treatment) treat[{r.instance, r.seed}] = r.branch_hash;
  if (base.size() != treat.size())
    throw Error(ErrorCode::MissingPair, "baseline and treatment cover different runs");
  AffectedSplit split;
  for (const auto& [key, h] : treat) {
    auto it = base.find(key);
    if (it == base.end())
      throw Error(ErrorCode::MissingPair,
                  "no baseline run for " + key.first + " seed " + std::to_string(key.second));
    (it->second == h ? split.unaffected : split.affected).push_back(key);
  }
  return split;
}

Quartiles quartiles(std::vector<double> values) {
  Quartiles q;
  q.count = values.size();
  if (values.empty()) return q;
  std::sort(values.begin(), values.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  q.q1 = at(0.25);
  q.median = at(0.5);
  q.q3 = at(0.75);
  return q;
}

BenchReport summarize(std::span<const BenchRow> rows, const std::string& baseline) {
  BenchReport report;
  report.baseline = baseline;
  std::vector<std::string> names;
  std::map<std::string, std::vector<BenchRow>> by_config;
  for (const auto& r : rows) {
    if (!by_config.count(r.config)) names.push_back(r.config);
    by_config[r.config].push_back(r);
  }
  if (!by_config.count(baseline))
    throw Error(ErrorCode::MissingPair, "baseline config '" + baseline + "' has no runs");
  const auto& base_rows = by_config[baseline];
  std::map<RunKey, const BenchRow*> base_index;
  for (const auto& r : base_rows) base_index[{r.instance, r.seed}] = &r;

  auto sgm = [](const std::vector<const BenchRow*>& rs, bool time) {
    std::vector<double> v;
    for (const auto* r : rs) v.push_back(time ? r->time : static_cast<double>(r->nodes));
    return shifted_geomean(v, time ? 1.0 : 100.0);
  };
  auto ratio = [](double a, double b) { return b > 0.0 ? a / b : (a > 0.0 ? kInf : 1.0); };

  std::vector<const BenchRow*> base_all;
  for (const auto& r : base_rows) base_all.push_back(&r);
  const double base_time = sgm(base_all, true);
  const double base_nodes = sgm(base_all, false);

  for (const auto& name : names) {
    const auto& rs = by_config[name];
    ConfigSummary s;
    s.config = name;
    s.runs = rs.size();
    std::vector<const BenchRow*> all;
    for (const auto& r : rs) {
      all.push_back(&r);
      if (r.solved()) ++s.solved;
    }
    s.time = sgm(all, true);
    s.nodes = sgm(all, false);
    s.time_q = ratio(s.time, base_time);
    s.nodes_q = ratio(s.nodes, base_nodes);

    const AffectedSplit split = affected_split(base_rows, rs);
    s.affected = split.affected.size();
    s.unaffected = split.unaffected.size();
    std::map<RunKey, const BenchRow*> mine;
    for (const auto& r : rs) mine[{r.instance, r.seed}] = &r;
    std::vector<const BenchRow*> aff_base, aff_mine;
    std::vector<double> ratios;
    for (const auto& key : split.affected) {
      aff_base.push_back(base_index[key]);
      aff_mine.push_back(mine[key]);
      ratios.push_back(ratio(mine[key]->time + 1.0, base_index[key]->time + 1.0));
    }
    if (!aff_base.empty()) {
      s.affected_time_q = ratio(sgm(aff_mine, true), sgm(aff_base, true));
      s.affected_nodes_q = ratio(sgm(aff_mine, false), sgm(aff_base, false));
    }
    s.affected_time_ratio = quartiles(std::move(ratios));
    report.configs.push_back(std::move(s));
  }
  return report;
}

std::string rows_to_csv(std::span<const BenchRow> rows) {
  std::ostringstream os;
  os << "instance,seed,config,status,time,nodes,objective,rl_calls,branch_hash\n";
  for (const auto& r : rows) {
    os << r.instance << ',' << r.seed << ',' << r.config << ',' << r.status << ','
       << fmt(r.time, 4) << ',' << r.nodes << ','
       << (r.objective ? fmt(*r.objective, 6) : std::string()) << ',' << r.rl_calls << ','
       << std::hex << r.branch_hash << std::dec << '\n';
  }
  return os.str();
}

std::string report_to_csv(const BenchReport& report) {
  std::ostringstream os;
  os << "config,runs,solved,time,nodes,time_Q,nodes_Q,affected,unaffected,"
        "affected_time_Q,affected_nodes_Q,ratio_q1,ratio_median,ratio_q3\n";
  for (const auto& s : report.configs) {
    os << s.config << ',' << s.runs << ',' << s.solved << ',' << fmt(s.time, 4) << ','
       << fmt(s.nodes, 2) << ',' << fmt(s.time_q, 4) << ',' << fmt(s.nodes_q, 4) << ','
       << s.affected << ',' << s.unaffected << ',' << fmt(s.affected_time_q, 4) << ','
       << fmt(s.affected_nodes_q, 4) << ',' << fmt(s.affected_time_ratio.q1, 4) << ','
       << fmt(s.affected_time_ratio.median, 4) << ',' << fmt(s.affected_time_ratio.q3, 4) << '\n';
  }
  return os.str();
}

std::string report_to_markdown(const BenchReport& report) {
  std::ostringstream os;
  os << "Baseline: `" << report.baseline << "` (time: shifted geometric mean, shift 1; "
     << "nodes: shift 100)\n\n";
  os << "| config | solved | time | nodes | time_Q | nodes_Q |\n";
  os << "|---|---:|---:|---:|---:|---:|\n";
  for (const auto& s : report.configs) {
    os << "| " << s.config << " | " << s.solved << "/" << s.runs << " | " << fmt(s.time, 3)
       << " | " << fmt(s.nodes, 1) << " | " << fmt(s.time_q, 3) << " | " << fmt(s.nodes_q, 3)
       << " |\n";
  }
  os << "\nAffected runs (branching sequence differs from the baseline):\n\n";
  os << "| config | affected | unaffected | time_Q | nodes_Q | ratio q1 | median | q3 |\n";
  os << "|---|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& s : report.configs) {
    os << "| " << s.config << " | " << s.affected << " | " << s.unaffected << " | "
       << fmt(s.affected_time_q, 3) << " | " << fmt(s.affected_nodes_q, 3) << " | "
       << fmt(s.affected_time_ratio.q1, 3) << " | " << fmt(s.affected_time_ratio.median, 3)
       << " | " << fmt(s.affected_time_ratio.q3, 3) << " |\n";
  }
  return os.str();
}

}  // namespace rapidip
