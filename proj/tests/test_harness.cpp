#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dtcns/config_io.hpp"
#include "dtcns/errors.hpp"
#include "dtcns/experiment.hpp"
#include "dtcns/plot.hpp"

using namespace dtcns;
namespace fs = std::filesystem;

namespace {

PolicySet random_policies(int n, std::uint64_t seed) {
  Rng init = make_stream(seed, Stream::Init);
  PolicySet p;
  p.cooperative = DenseNet({observation_size(PolicyKind::Cooperative, n), 16, kActionSize},
                           Activation::Relu, Activation::Tanh);
  p.cooperative->init_uniform(init);
  p.egocentric = DenseNet({observation_size(PolicyKind::Egocentric, n), 16, kActionSize},
                          Activation::Relu, Activation::Tanh);
  p.egocentric->init_uniform(init);
  return p;
}

SimConfig quick_sim() {
  SimConfig cfg;
  cfg.num_nodes = 8;
  cfg.episode_days = 6;
  cfg.ticks_per_day = 10;
  cfg.rl_epoch_ticks = 10;
  return cfg;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("dtcns_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("experiment-harness") {

TEST_CASE("scenario names and parsing") {
  CHECK(Scenario::single(Style::Egocentric).name() == "egocentric");
  CHECK(Scenario::mixed(Style::Ignorant, 3).name() == "mixed-ignorant-3");
  CHECK(Scenario::parse("mixed-egocentric-10") == Scenario::mixed(Style::Egocentric, 10));
  CHECK(Scenario::parse("cop") == Scenario::single(Style::Cooperative));
  CHECK_THROWS_AS(Scenario::parse("mixed-cooperative-2"), ConfigError);
  CHECK_THROWS_AS(Scenario::parse("mixed-egocentric-x"), ConfigError);
  CHECK_THROWS_AS(Scenario::parse("selfish"), ConfigError);
}

TEST_CASE("free-riders take the lowest ids") {
  const auto s = Scenario::mixed(Style::Egocentric, 3).styles(30);
  for (int i = 0; i < 30; ++i) CHECK(s[i] == (i < 3 ? Style::Egocentric : Style::Cooperative));
  CHECK(Scenario::mixed(Style::Ignorant, 0).styles(30) ==
        std::vector<Style>(30, Style::Cooperative));
  CHECK_THROWS_AS(Scenario::mixed(Style::Ignorant, 31).styles(30), ConfigError);
  const auto r = Scenario::mixed(Style::Ignorant, 5).styles(30, true, 4);
  CHECK(std::count(r.begin(), r.end(), Style::Ignorant) == 5);
  CHECK(r == Scenario::mixed(Style::Ignorant, 5).styles(30, true, 4));
}

TEST_CASE("resilience grid") {
  const auto g = resilience_grid();
  CHECK(g.size() == 16);
  CHECK(g.front() == GridPoint{0.05, 5.0});
  CHECK(g.back() == GridPoint{0.20, 20.0});
}

TEST_CASE("cell count is scenarios x grid x seeds, ordered and independent of jobs") {
  const auto sim = quick_sim();
  const auto policies = random_policies(8, 1);
  std::vector<Scenario> scen{Scenario::single(Style::Ignorant),
                             Scenario::mixed(Style::Egocentric, 2)};
  const auto grid = resilience_grid();
  const std::vector<std::uint64_t> seeds{1, 2};
  const auto one = run_cells(sim, scen, grid, seeds, policies, 1);
  CHECK(one.size() == 2 * 16 * 2);
  CHECK(one[0].scenario.name() == "ignorant");
  CHECK(one[1].seed == 2);
  CHECK(one[2].point == grid[1]);
  const auto three = run_cells(sim, scen, grid, seeds, policies, 3);
  REQUIRE(three.size() == one.size());
  for (std::size_t k = 0; k < one.size(); ++k) {
    CHECK(one[k].final_cum_infections == three[k].final_cum_infections);
    CHECK(one[k].final_cum_reward == three[k].final_cum_reward);
  }
}

TEST_CASE("k = 0 reproduces the cooperative single-style run") {
  const auto sim = quick_sim();
  const auto policies = random_policies(8, 2);
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const auto cop = run_single_style(sim, Style::Cooperative, {GridPoint{}}, seeds, policies);
  const auto k0 = run_mixed(sim, Style::Egocentric, {0}, {GridPoint{}}, seeds, policies);
  REQUIRE(cop.size() == k0.size());
  for (std::size_t k = 0; k < cop.size(); ++k) {
    CHECK(cop[k].final_cum_infections == k0[k].final_cum_infections);
    CHECK(cop[k].final_cum_reward == k0[k].final_cum_reward);
    CHECK(cop[k].daily.size() == k0[k].daily.size());
  }
  CHECK_THROWS_AS(run_mixed(sim, Style::Egocentric, {9}, {GridPoint{}}, seeds, policies),
                  ConfigError);
}

TEST_CASE("zero transmissibility leaves only the seed infection") {
  const auto sim = quick_sim();
  const auto policies = random_policies(8, 3);
  for (Style s : {Style::Cooperative, Style::Egocentric, Style::Ignorant})
    for (const auto& c : run_single_style(sim, s, {GridPoint{0.0, 5.0}}, {1, 2}, policies))
      CHECK(c.final_cum_infections == 1);
}

TEST_CASE("missing policies name the train command") {
  try {
    run_single_style(quick_sim(), Style::Egocentric, {GridPoint{}}, {1}, {});
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("dtcns train --style ego") != std::string::npos);
  }
  const auto dir = scratch("nopolicies");
  CHECK_THROWS_AS(load_policies(dir.string(), {Scenario::single(Style::Cooperative)}),
                  ConfigError);
  CHECK_NOTHROW(load_policies(dir.string(), {Scenario::single(Style::Ignorant)}));
}

TEST_CASE("aggregation") {
  std::vector<CellResult> cells(3);
  for (int k = 0; k < 3; ++k) {
    cells[k].scenario = Scenario::single(Style::Ignorant);
    cells[k].seed = k + 1;
    cells[k].final_cum_infections = 2 + 3 * k;
    cells[k].final_cum_reward = 1.0 + k;
  }
  const auto rows = aggregate(cells);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].seeds == 3);
  CHECK(rows[0].infections_mean == 5.0);
  CHECK(rows[0].infections_min == 2.0);
  CHECK(rows[0].infections_max == 8.0);
  CHECK(rows[0].reward_mean == 2.0);
}

TEST_CASE("sweep outputs carry provenance and verify") {
  const auto dir = scratch("sweep");
  ExperimentConfig cfg;
  cfg.sim = quick_sim();
  cfg.scenarios = {Scenario::single(Style::Ignorant), Scenario::mixed(Style::Ignorant, 2)};
  cfg.grid = {GridPoint{0.10, 5.0}, GridPoint{0.20, 10.0}};
  cfg.seeds = {1, 2};
  cfg.output_dir = dir.string();
  cfg.jobs = 2;
  const auto policies = random_policies(8, 5);
  const auto cells = run_resilience_sweep(cfg, policies);
  CHECK(cells.size() == 8);
  for (const char* f : {"summary.csv", "grid.csv", "daily.csv"}) CHECK(fs::exists(dir / f));
  CHECK(std::distance(fs::directory_iterator(dir / "traces"), fs::directory_iterator{}) == 8);

  std::ifstream summary(dir / "summary.csv");
  std::string line;
  std::getline(summary, line);
  CHECK(line == kSummaryColumns);
  std::getline(summary, line);
  CHECK(line.rfind("ignorant,0.1,5,1,", 0) == 0);

  const auto report = verify_outputs(dir.string());
  INFO(report.problems.size());
  CHECK(report.ok());
  CHECK(report.traces_checked == 8);

  std::ifstream daily(dir / "daily.csv");
  const auto back = read_daily_csv(daily);
  REQUIRE(back.size() == cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    CHECK(back[k].final_cum_infections == cells[k].final_cum_infections);
    CHECK(back[k].final_cum_reward == cells[k].final_cum_reward);
  }

  // Tamper with one summary value: the verifier reports it.
  std::string text = slurp(dir / "summary.csv");
  const auto pos = text.find('\n', text.find('\n') + 1);
  std::string row = text.substr(text.find('\n') + 1, pos - text.find('\n') - 1);
  const auto comma = row.rfind(',');
  std::string tampered = row.substr(0, comma) + ",12345";
  text.replace(text.find(row), row.size(), tampered);
  std::ofstream(dir / "summary.csv", std::ios::binary) << text;
  CHECK_FALSE(verify_outputs(dir.string()).ok());
  CHECK_FALSE(verify_outputs((dir / "absent").string()).ok());
}

TEST_CASE("plots: naming, determinism and empty input") {
  std::vector<CellResult> cells;
  for (Style s : {Style::Cooperative, Style::Egocentric, Style::Ignorant})
    for (std::uint64_t seed : {1, 2}) {
      CellResult c;
      c.scenario = Scenario::single(s);
      c.seed = seed;
      for (int d = 0; d < 5; ++d)
        c.daily.push_back({d, d % 3, d + static_cast<int>(seed), 0.5 * d * seed});
      cells.push_back(c);
    }
  CellResult mix = cells[0];
  mix.scenario = Scenario::mixed(Style::Egocentric, 2);
  cells.push_back(mix);

  const auto a = scratch("plots_a"), b = scratch("plots_b");
  const auto files = emit_plots(cells, a.string());
  CHECK(fs::exists(a / "Compare_EachInfection_RT5_Inf0.10.svg"));
  CHECK(fs::exists(a / "Compare_EachReward_RT5_Inf0.10.svg"));
  CHECK(fs::exists(a / "Compare_RiderInfection_RT5_Inf0.10.svg"));
  emit_plots(cells, b.string());
  for (const auto& f : files) {
    const auto name = fs::path(f).filename();
    CHECK(slurp(a / name) == slurp(b / name));
  }
  const auto empty = scratch("plots_empty");
  CHECK(emit_plots({}, empty.string()).empty());
  CHECK_FALSE(fs::exists(empty / "Compare_EachInfection_RT5_Inf0.10.svg"));
}

TEST_CASE("json configuration") {
  const auto sim = sim_config_from_json(nlohmann::json{{"num_nodes", 12}, {"b", 0.3}});
  CHECK(sim.num_nodes == 12);
  CHECK(sim.b == 0.3);
  CHECK(sim.alpha == 0.125);
  CHECK_THROWS_AS(sim_config_from_json(nlohmann::json{{"nodes", 12}}), ConfigError);
  CHECK(sim_config_from_json(to_json(sim)) == sim);

  Td3Config t = Td3Config::egocentric_defaults();
  CHECK(td3_config_from_json(to_json(t), Td3Config{}) == t);

  const auto exp = experiment_config_from_json(nlohmann::json::parse(R"({
    "scenarios": ["single", "mixed"], "grid": "resilience", "k_values": [1, 4],
    "seeds": [3], "output_dir": "/tmp/x", "sim": {"episode_days": 10}})"));
  CHECK(exp.scenarios.size() == 3 + 2 * 2);
  CHECK(exp.grid.size() == 16);
  CHECK(exp.sim.episode_days == 10);
  CHECK(exp.policies_dir == "/tmp/x/policies");
  CHECK_THROWS_AS(experiment_config_from_json(nlohmann::json{{"scenarios", {"nobody"}}}),
                  ConfigError);

  const auto tf = training_config_from_json(nlohmann::json::object(), PolicyKind::Egocentric);
  CHECK(tf.td3.total_steps == 20000);
}

TEST_CASE("config dump matches the golden file") {
  std::ostringstream out;
  dump_defaults(out);
  std::ifstream in(std::string(DTCNS_GOLDEN_DIR) + "/config_dump.txt");
  REQUIRE(in);
  std::stringstream golden;
  golden << in.rdbuf();
  CHECK(out.str() == golden.str());
}

}
