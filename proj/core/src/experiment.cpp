#include "dtcns/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "dtcns/errors.hpp"
#include "dtcns/plot.hpp"
#include "dtcns/policy_file.hpp"

namespace fs = std::filesystem;

namespace dtcns {

std::string Scenario::name() const {
  if (kind == Kind::Single) return std::string(to_string(style));
  return "mixed-" + std::string(to_string(style)) + "-" + std::to_string(riders);
}

Scenario Scenario::parse(const std::string& text) {
  if (text.rfind("mixed-", 0) == 0) {
    const auto dash = text.rfind('-');
    if (dash <= 6) throw ConfigError("bad scenario name '" + text + "'");
    const Style rider = parse_style(text.substr(6, dash - 6));
    if (rider == Style::Cooperative)
      throw ConfigError("free-riders must be egocentric or ignorant: '" + text + "'");
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(text.substr(dash + 1), &used);
      if (used != text.size() - dash - 1) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw ConfigError("bad free-rider count in scenario '" + text + "'");
    }
    return mixed(rider, k);
  }
  return single(parse_style(text));
}

std::vector<Style> Scenario::styles(int num_nodes, bool random_placement,
                                    std::uint64_t placement_seed) const {
  if (kind == Kind::Single) return std::vector<Style>(static_cast<std::size_t>(num_nodes), style);
  if (riders < 0 || riders > num_nodes)
    throw ConfigError("free-rider count " + std::to_string(riders) + " exceeds " +
                      std::to_string(num_nodes) + " nodes");
  std::vector<Style> out(static_cast<std::size_t>(num_nodes), Style::Cooperative);
  std::vector<NodeId> ids(static_cast<std::size_t>(num_nodes));
  std::iota(ids.begin(), ids.end(), 0);
  if (random_placement) {
    Rng rng = make_stream(placement_seed, Stream::Placement);
    std::shuffle(ids.begin(), ids.end(), rng);
  }
  for (int k = 0; k < riders; ++k) out[static_cast<std::size_t>(ids[static_cast<std::size_t>(k)])] = style;
  return out;
}

std::vector<GridPoint> resilience_grid() {
  std::vector<GridPoint> grid;
  for (double rt : {5.0, 10.0, 15.0, 20.0})
    for (double z : {0.05, 0.10, 0.15, 0.20}) grid.push_back({z, rt});
  return grid;
}

void ExperimentConfig::validate() const {
  sim.validate();
  if (scenarios.empty()) throw ConfigError("experiment: no scenarios");
  if (grid.empty()) throw ConfigError("experiment: empty epidemic grid");
  if (seeds.empty()) throw ConfigError("experiment: no seeds");
  if (jobs < 1) throw ConfigError("experiment: jobs must be >= 1");
  for (const auto& g : grid) {
    if (g.zeta < 0.0 || g.zeta > 1.0) throw ConfigError("experiment: grid zeta outside [0,1]");
    if (g.recovery_days < 1.0 || g.recovery_days > 365.0)
      throw ConfigError("experiment: grid recovery_days outside [1,365]");
  }
  for (const auto& s : scenarios)
    if (s.kind == Scenario::Kind::Mixed && (s.riders < 0 || s.riders > sim.num_nodes))
      throw ConfigError("experiment: free-rider count outside [0, num_nodes]");
}

namespace {

std::vector<DailyPoint> daily_points(const EpisodeTrace& trace) {
  std::vector<DailyPoint> out;
  for (std::size_t k = 0; k < trace.ticks.size(); ++k) {
    const auto& r = trace.ticks[k];
    const bool last_of_day = k + 1 == trace.ticks.size() || trace.ticks[k + 1].day != r.day;
    if (last_of_day) out.push_back({r.day, r.infected_now, r.cum_infections, r.cum_reward});
  }
  return out;
}

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<CellResult> run_cells(const SimConfig& sim, const std::vector<Scenario>& scenarios,
                                  const std::vector<GridPoint>& grid,
                                  const std::vector<std::uint64_t>& seeds,
                                  const PolicySet& policies, int jobs, bool random_placement,
                                  const TraceSink& sink) {
  struct Task {
    std::size_t scenario, point, seed;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    check_policies(scenarios[s].styles(sim.num_nodes), policies);
    for (std::size_t g = 0; g < grid.size(); ++g)
      for (std::size_t k = 0; k < seeds.size(); ++k) tasks.push_back({s, g, k});
  }
  std::vector<CellResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      try {
        const auto& task = tasks[idx];
        CellResult cell;
        cell.scenario = scenarios[task.scenario];
        cell.point = grid[task.point];
        cell.seed = seeds[task.seed];
        SimConfig cfg = sim;
        cfg.transmissibility = cell.point.zeta;
        cfg.recovery_days = cell.point.recovery_days;
        const auto styles = cell.scenario.styles(cfg.num_nodes, random_placement, cell.seed);
        const auto trace = run_episode(cfg, styles, policies, cell.seed);
        cell.final_cum_infections = trace.final_cum_infections();
        cell.final_cum_reward = trace.final_cum_reward();
        cell.daily = daily_points(trace);
        if (sink) sink(cell, trace);
        results[idx] = std::move(cell);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks.size());
      }
    }
  };

  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::vector<CellResult> run_single_style(const SimConfig& sim, Style style,
                                         const std::vector<GridPoint>& grid,
                                         const std::vector<std::uint64_t>& seeds,
                                         const PolicySet& policies, int jobs) {
  return run_cells(sim, {Scenario::single(style)}, grid, seeds, policies, jobs);
}

std::vector<CellResult> run_mixed(const SimConfig& sim, Style rider,
                                  const std::vector<int>& k_values,
                                  const std::vector<GridPoint>& grid,
                                  const std::vector<std::uint64_t>& seeds,
                                  const PolicySet& policies, int jobs) {
  if (rider == Style::Cooperative)
    throw ConfigError("free-riders must be egocentric or ignorant");
  std::vector<Scenario> scenarios;
  for (int k : k_values) {
    if (k < 0 || k > sim.num_nodes)
      throw ConfigError("free-rider count " + std::to_string(k) + " outside [0, " +
                        std::to_string(sim.num_nodes) + "]");
    scenarios.push_back(Scenario::mixed(rider, k));
  }
  return run_cells(sim, scenarios, grid, seeds, policies, jobs);
}

std::vector<GridRow> aggregate(const std::vector<CellResult>& cells) {
  std::vector<GridRow> rows;
  std::map<std::tuple<std::string, double, double>, std::size_t> index;
  for (const auto& c : cells) {
    const auto key = std::make_tuple(c.scenario.name(), c.point.zeta, c.point.recovery_days);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      GridRow row;
      row.scenario = c.scenario.name();
      row.point = c.point;
      row.infections_min = row.infections_max = c.final_cum_infections;
      row.reward_min = row.reward_max = c.final_cum_reward;
      rows.push_back(row);
    }
    auto& row = rows[it->second];
    ++row.seeds;
    row.infections_mean += c.final_cum_infections;
    row.reward_mean += c.final_cum_reward;
    row.infections_min = std::min<double>(row.infections_min, c.final_cum_infections);
    row.infections_max = std::max<double>(row.infections_max, c.final_cum_infections);
    row.reward_min = std::min(row.reward_min, c.final_cum_reward);
    row.reward_max = std::max(row.reward_max, c.final_cum_reward);
  }
  for (auto& row : rows) {
    row.infections_mean /= row.seeds;
    row.reward_mean /= row.seeds;
  }
  return rows;
}

std::string provenance_values(const CellResult& cell) {
  return cell.scenario.name() + "," + fmt_param(cell.point.zeta) + "," +
         fmt_param(cell.point.recovery_days) + "," + std::to_string(cell.seed);
}

std::string trace_file_name(const CellResult& cell) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s_RT%g_Inf%.2f_s%llu.csv", cell.scenario.name().c_str(),
                cell.point.recovery_days, cell.point.zeta,
                static_cast<unsigned long long>(cell.seed));
  return buf;
}

void write_summary_csv(std::ostream& out, const std::vector<CellResult>& cells) {
  out << kSummaryColumns << '\n';
  for (const auto& c : cells)
    out << provenance_values(c) << ',' << c.final_cum_infections << ','
        << fmt_real(c.final_cum_reward) << '\n';
}

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows) {
  out << kGridColumns << '\n';
  for (const auto& r : rows)
    out << r.scenario << ',' << fmt_param(r.point.zeta) << ',' << fmt_param(r.point.recovery_days)
        << ',' << r.seeds << ',' << fmt_real(r.infections_mean) << ','
        << fmt_real(r.infections_min) << ',' << fmt_real(r.infections_max) << ','
        << fmt_real(r.reward_mean) << ',' << fmt_real(r.reward_min) << ','
        << fmt_real(r.reward_max) << '\n';
}

void write_daily_csv(std::ostream& out, const std::vector<CellResult>& cells) {
  out << kDailyColumns << '\n';
  for (const auto& c : cells) {
    const auto prov = provenance_values(c);
    for (const auto& d : c.daily)
      out << prov << ',' << d.day << ',' << d.infected_now << ',' << d.cum_infections << ','
          << fmt_real(d.cum_reward) << '\n';
  }
}

std::vector<CellResult> read_daily_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kDailyColumns)
    throw ConfigError("daily table: unexpected header");
  std::vector<CellResult> cells;
  std::map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 8) throw ConfigError("daily table: malformed row '" + line + "'");
    const std::string key = f[0] + "," + f[1] + "," + f[2] + "," + f[3];
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, cells.size()).first;
      CellResult c;
      c.scenario = Scenario::parse(f[0]);
      c.point = {std::stod(f[1]), std::stod(f[2])};
      c.seed = std::stoull(f[3]);
      cells.push_back(std::move(c));
    }
    auto& c = cells[it->second];
    c.daily.push_back({std::stoi(f[4]), std::stoi(f[5]), std::stoi(f[6]), std::stod(f[7])});
    c.final_cum_infections = c.daily.back().cum_infections;
    c.final_cum_reward = c.daily.back().cum_reward;
  }
  return cells;
}

PolicySet load_policies(const std::string& dir, const std::vector<Scenario>& scenarios) {
  bool need_cop = false, need_ego = false;
  for (const auto& s : scenarios) {
    const bool single = s.kind == Scenario::Kind::Single;
    need_cop |= !single || s.style == Style::Cooperative;
    need_ego |= s.style == Style::Egocentric && (single || s.riders > 0);
  }
  PolicySet set;
  auto load = [&](const char* file, PolicyKind kind, const char* flag) {
    const auto path = (fs::path(dir) / file).string();
    if (!fs::exists(path))
      throw ConfigError("missing policy file " + path + " (run `dtcns train --style " + flag +
                        "` first)");
    auto p = load_policy(path);
    if (p.kind != kind) throw ConfigError("policy file " + path + " has the wrong kind");
    return p.actor;
  };
  if (need_cop) set.cooperative = load("cooperative.policy", PolicyKind::Cooperative, "cop");
  if (need_ego) set.egocentric = load("egocentric.policy", PolicyKind::Egocentric, "ego");
  return set;
}

namespace {

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create directory (" + ec.message() + ")", p.string());
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open for writing", p.string());
  return out;
}

}  // namespace

std::vector<CellResult> run_resilience_sweep(const ExperimentConfig& config,
                                             const PolicySet& policies) {
  config.validate();
  const fs::path root(config.output_dir);
  ensure_dir(root);
  TraceSink sink;
  if (config.write_traces) {
    ensure_dir(root / "traces");
    sink = [&](const CellResult& cell, const EpisodeTrace& trace) {
      auto out = open_out(root / "traces" / trace_file_name(cell));
      write_trace_csv(out, trace, "scenario,zeta,recovery_days,seed", provenance_values(cell));
      if (!out) throw IoError("failed writing trace", (root / "traces" / trace_file_name(cell)).string());
    };
  }
  auto cells = run_cells(config.sim, config.scenarios, config.grid, config.seeds, policies,
                         config.jobs, config.random_placement, sink);
  {
    auto out = open_out(root / "summary.csv");
    write_summary_csv(out, cells);
  }
  {
    auto out = open_out(root / "grid.csv");
    write_grid_csv(out, aggregate(cells));
  }
  {
    auto out = open_out(root / "daily.csv");
    write_daily_csv(out, cells);
  }
  if (config.plots) emit_plots(cells, (root / "plots").string());
  return cells;
}

VerifyReport verify_outputs(const std::string& dir) {
  VerifyReport report;
  const fs::path root(dir);
  std::ifstream summary(root / "summary.csv");
  if (!summary) {
    report.problems.push_back("missing " + (root / "summary.csv").string());
    return report;
  }
  std::map<std::string, std::string> expected;  // provenance -> "infections,reward"
  std::string line;
  std::getline(summary, line);
  if (line != kSummaryColumns) report.problems.push_back("summary.csv: unexpected header");
  while (std::getline(summary, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) {
      report.problems.push_back("summary.csv: malformed row '" + line + "'");
      continue;
    }
    expected[f[0] + "," + f[1] + "," + f[2] + "," + f[3]] = f[4] + "," + f[5];
  }

  const auto traces = root / "traces";
  if (!fs::is_directory(traces)) {
    report.problems.push_back("missing trace directory " + traces.string());
    return report;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(traces))
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::map<std::string, bool> seen;
  for (const auto& path : files) {
    std::ifstream in(path);
    std::getline(in, line);
    const std::string header = std::string("scenario,zeta,recovery_days,seed,") + kTraceColumns;
    if (line != header) {
      report.problems.push_back(path.string() + ": unexpected header");
      continue;
    }
    std::string prov, last_inf, last_reward;
    long prev_cum = -1;
    double reward_sum = 0.0, last_cum_reward = 0.0;
    bool ok = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_csv(line);
      if (f.size() != 13) {
        report.problems.push_back(path.string() + ": malformed row");
        ok = false;
        break;
      }
      prov = f[0] + "," + f[1] + "," + f[2] + "," + f[3];
      const long new_inf = std::stol(f[8]);
      const long cum = std::stol(f[10]);
      if (prev_cum >= 0 && cum != prev_cum + new_inf) {
        report.problems.push_back(path.string() + ": cum_infections is not a running sum at tick " + f[4]);
        ok = false;
      }
      prev_cum = cum;
      reward_sum += std::stod(f[11]);
      last_cum_reward = std::stod(f[12]);
      last_inf = f[10];
      last_reward = f[12];
    }
    if (!ok || prov.empty()) continue;
    if (std::abs(reward_sum - last_cum_reward) > 1e-9 * std::max(1.0, std::abs(reward_sum)))
      report.problems.push_back(path.string() + ": cum_reward differs from the sum of step rewards");
    ++report.traces_checked;
    seen[prov] = true;
    const auto it = expected.find(prov);
    if (it == expected.end()) {
      report.problems.push_back(path.string() + ": no summary row for " + prov);
    } else if (it->second != last_inf + "," + last_reward) {
      report.problems.push_back(prov + ": summary " + it->second + " != trace " + last_inf + "," +
                                last_reward);
    }
  }
  for (const auto& [prov, _] : expected)
    if (!seen.count(prov)) report.problems.push_back("summary row without trace: " + prov);
  return report;
}

}  // namespace dtcns
