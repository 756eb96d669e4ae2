#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dtcns/engine.hpp"

namespace dtcns {

/// Either every node shares one style, or `riders` free-riders of one kind
/// replace cooperative nodes (lowest ids first, unless placement is random).
struct Scenario {
  enum class Kind { Single, Mixed };
  Kind kind = Kind::Single;
  Style style = Style::Cooperative;  // Single: the shared style. Mixed: rider kind.
  int riders = 0;

  static Scenario single(Style s) { return {Kind::Single, s, 0}; }
  static Scenario mixed(Style rider, int k) { return {Kind::Mixed, rider, k}; }
  /// "cooperative", "egocentric", "ignorant", "mixed-egocentric-3", ...
  std::string name() const;
  static Scenario parse(const std::string& name);

  std::vector<Style> styles(int num_nodes, bool random_placement = false,
                            std::uint64_t placement_seed = 0) const;
  bool operator==(const Scenario&) const = default;
};

struct GridPoint {
  double zeta = 0.10;
  double recovery_days = 5.0;
  bool operator==(const GridPoint&) const = default;
};

/// The 4 x 4 severity grid: transmissibility 0.05..0.20, recovery 5..20 days.
std::vector<GridPoint> resilience_grid();

struct ExperimentConfig {
  SimConfig sim;
  std::vector<Scenario> scenarios;
  std::vector<GridPoint> grid = {GridPoint{}};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::vector<int> k_values = {1, 2, 3, 5, 10};
  std::string output_dir = "dtcns-out";
  std::string policies_dir;  // defaults to <output_dir>/policies
  bool plots = true;
  bool write_traces = true;
  bool random_placement = false;
  int jobs = 1;

  void validate() const;
};

struct DailyPoint {
  int day = 0;
  int infected_now = 0;
  int cum_infections = 0;
  double cum_reward = 0.0;
};

struct CellResult {
  Scenario scenario;
  GridPoint point;
  std::uint64_t seed = 0;
  int final_cum_infections = 0;
  double final_cum_reward = 0.0;
  std::vector<DailyPoint> daily;
};

struct GridRow {
  std::string scenario;
  GridPoint point;
  int seeds = 0;
  double infections_mean = 0.0, infections_min = 0.0, infections_max = 0.0;
  double reward_mean = 0.0, reward_min = 0.0, reward_max = 0.0;
};

/// Called with the finished trace of each cell; may run on worker threads
/// concurrently for different cells.
using TraceSink = std::function<void(const CellResult&, const EpisodeTrace&)>;

/// Runs every (scenario, grid point, seed) cell on `jobs` threads. The episode
/// seed of a cell is its replicate seed, so scenarios that share a seed share
/// the network initialization and noise streams. Output order is
/// scenario-major, then grid point, then seed, independent of `jobs`.
std::vector<CellResult> run_cells(const SimConfig& sim, const std::vector<Scenario>& scenarios,
                                  const std::vector<GridPoint>& grid,
                                  const std::vector<std::uint64_t>& seeds,
                                  const PolicySet& policies, int jobs,
                                  bool random_placement = false, const TraceSink& sink = {});

std::vector<CellResult> run_single_style(const SimConfig& sim, Style style,
                                         const std::vector<GridPoint>& grid,
                                         const std::vector<std::uint64_t>& seeds,
                                         const PolicySet& policies, int jobs = 1);
std::vector<CellResult> run_mixed(const SimConfig& sim, Style rider,
                                  const std::vector<int>& k_values,
                                  const std::vector<GridPoint>& grid,
                                  const std::vector<std::uint64_t>& seeds,
                                  const PolicySet& policies, int jobs = 1);

/// Mean, min and max over seeds for each (scenario, grid point).
std::vector<GridRow> aggregate(const std::vector<CellResult>& cells);

/// Full sweep as configured: writes summary.csv, grid.csv, daily.csv, and
/// optionally traces/ and plots/ under output_dir. Returns the cells.
std::vector<CellResult> run_resilience_sweep(const ExperimentConfig& config,
                                             const PolicySet& policies);

PolicySet load_policies(const std::string& dir, const std::vector<Scenario>& scenarios);

// CSV tables. Every row starts with scenario,zeta,recovery_days[,seed].
inline constexpr const char* kSummaryColumns =
    "scenario,zeta,recovery_days,seed,final_cum_infections,final_cum_reward";
inline constexpr const char* kGridColumns =
    "scenario,zeta,recovery_days,seeds,infections_mean,infections_min,infections_max,"
    "reward_mean,reward_min,reward_max";
inline constexpr const char* kDailyColumns =
    "scenario,zeta,recovery_days,seed,day,infected_now,cum_infections,cum_reward";

std::string provenance_values(const CellResult& cell);
std::string trace_file_name(const CellResult& cell);

void write_summary_csv(std::ostream& out, const std::vector<CellResult>& cells);
void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows);
void write_daily_csv(std::ostream& out, const std::vector<CellResult>& cells);

/// Reads daily.csv back into cells (finals taken from the last day).
std::vector<CellResult> read_daily_csv(std::istream& in);

struct VerifyReport {
  int traces_checked = 0;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty() && traces_checked > 0; }
};

/// Recomputes every summary row from the raw traces in `dir`/traces and diffs
/// against `dir`/summary.csv; also checks trace-internal consistency.
VerifyReport verify_outputs(const std::string& dir);

}  // namespace dtcns
