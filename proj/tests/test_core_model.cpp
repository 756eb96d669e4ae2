#include <doctest.h>

#include "dtcns/errors.hpp"
#include "dtcns/network.hpp"

using namespace dtcns;

TEST_SUITE("core-model") {

TEST_CASE("new network has N nodes, no interactions and zero genomes") {
  SimConfig cfg;
  const auto net = new_network(cfg, 7);
  CHECK(net.num_nodes() == 30);
  for (const auto& node : net.nodes()) {
    CHECK(node.genome == PreferenceGenome{});
    CHECK(node.health == Health::Susceptible);
    CHECK(node.features[kHealthFeature] == 0.0);
    CHECK(node.features[kTraitFeature] >= 0.0);
    CHECK(node.features[kTraitFeature] <= 1.0);
    CHECK(node.capital_limit == 29);
  }
  for (NodeId i = 0; i < 30; ++i)
    for (NodeId j = 0; j < 30; ++j)
      if (i != j) {
        const auto& e = net.edge(i, j);
        CHECK_FALSE(e.interacted);
        CHECK(e.intensity == 0.0);
        CHECK_FALSE(e.bonded);
        CHECK(e.history.empty());
      }
}

TEST_CASE("single-node network has an empty edge table") {
  SimConfig cfg;
  cfg.num_nodes = 1;
  const auto net = new_network(cfg, 0);
  CHECK(net.num_nodes() == 1);
  CHECK_THROWS_AS(net.edge(0, 0), ContractViolation);
  CHECK(encounter_set(net, 0).empty());
}

TEST_CASE("same config and seed give identical networks") {
  SimConfig cfg;
  CHECK(new_network(cfg, 11) == new_network(cfg, 11));
  CHECK_FALSE(new_network(cfg, 11) == new_network(cfg, 12));
}

TEST_CASE("trait feature is spread over [0,1]") {
  SimConfig cfg;
  cfg.num_nodes = 2000;
  const auto net = new_network(cfg, 3);
  double mean = 0.0;
  for (const auto& n : net.nodes()) mean += n.features[kTraitFeature];
  mean /= cfg.num_nodes;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("invalid configurations are rejected") {
  SimConfig cfg;
  cfg.num_nodes = 0;
  CHECK_THROWS_AS(new_network(cfg, 1), ConfigError);
  cfg = {};
  cfg.eta = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.b = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.alpha = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.transmissibility = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.delta = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("tick discretization") {
  SimConfig cfg;
  CHECK(cfg.episode_ticks() == 3000);
  CHECK(cfg.recovery_ticks() == 150);
  cfg.recovery_days = 20;
  CHECK(cfg.recovery_ticks() == 600);
}

TEST_CASE("full mixing encounter sets") {
  SimConfig cfg;
  cfg.num_nodes = 3;
  const auto small = encounter_set(new_network(cfg, 1), 0);
  CHECK(small.size() == 6);
  for (const auto& [i, j] : small) CHECK(i != j);
  cfg.num_nodes = 30;
  CHECK(encounter_set(new_network(cfg, 1), 0).size() == 870);
}

TEST_CASE("Bernoulli encounters are symmetric and reproducible") {
  SimConfig cfg;
  cfg.num_nodes = 12;
  const auto net = new_network(cfg, 1);
  Rng a = make_stream(5, Stream::Encounter), b = make_stream(5, Stream::Encounter);
  const auto ea = encounter_set(net, 0, 0.3, a);
  CHECK(ea == encounter_set(net, 0, 0.3, b));
  CHECK(ea.size() % 2 == 0);
  for (const auto& [i, j] : ea)
    CHECK(std::find(ea.begin(), ea.end(), std::make_pair(j, i)) != ea.end());
  Rng c = make_stream(5, Stream::Encounter);
  CHECK(encounter_set(net, 0, 1.0, c).size() == 132);
}

TEST_CASE("edge history keeps only the bonding window") {
  EdgeState e;
  e.record(5, 0.3, 2);
  e.record(6, 0.4, 2);
  CHECK(e.history.size() == 2);
  e.record(8, 0.5, 2);
  CHECK(e.history.size() == 1);
  CHECK(e.interacted_within(8, 2));
  CHECK_FALSE(e.interacted_within(10, 2));
  CHECK(e.window_mean(8, 2) == 0.5);
  CHECK(e.window_samples(9, 2).size() == 1);
}

TEST_CASE("genome validity") {
  PreferenceGenome g;
  CHECK(g.valid());
  g.p[0] = 1;
  CHECK_FALSE(g.valid());
  g.w_p[0] = 0.4;
  CHECK(g.valid());
  g.h[1] = 2;
  g.w_h[1] = 0.5;
  CHECK_FALSE(g.valid());
}

}
