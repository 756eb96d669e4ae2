#include "dtcns/epidemic.hpp"

#include <cmath>
#include <string>

#include "dtcns/errors.hpp"

namespace dtcns {

EpidemicState EpidemicState::from_config(const SimConfig& config, std::vector<NodeId> seeds) {
  EpidemicState epi;
  epi.seeds = std::move(seeds);
  epi.transmissibility = config.transmissibility;
  epi.recovery_ticks = config.recovery_ticks();
  epi.permanent_recovery = config.permanent_recovery;
  return epi;
}

void seed_epidemic(TemporalNetwork& net, const EpidemicState& epi) {
  if (epi.transmissibility < 0.0 || epi.transmissibility > 1.0)
    throw ConfigError("transmissibility must lie in [0,1]");
  if (epi.recovery_ticks < 1) throw ConfigError("recovery time must span at least one tick");
  for (NodeId s : epi.seeds) {
    if (s < 0 || s >= net.num_nodes())
      throw ConfigError("epidemic seed " + std::to_string(s) + " is not a node id");
  }
  for (auto& node : net.nodes()) {
    node.health = Health::Susceptible;
    node.recovery_clock = 0;
    node.features[kHealthFeature] = 0.0;
  }
  for (NodeId s : epi.seeds) {
    auto& node = net.node(s);
    node.health = Health::Infected;
    node.recovery_clock = epi.recovery_ticks;
    node.features[kHealthFeature] = 1.0;
  }
}

int incident_exposures(const TemporalNetwork& net, NodeId i, bool partner_infected) {
  int k = 0;
  for (NodeId j = 0; j < net.num_nodes(); ++j) {
    if (j == i) continue;
    const auto& partner = net.node(j);
    const bool match = partner_infected ? partner.infected()
                                        : partner.health == Health::Susceptible;
    if (!match) continue;
    k += static_cast<int>(net.edge(i, j).interacted) + static_cast<int>(net.edge(j, i).interacted);
  }
  return k;
}

namespace {

double at_least_one(double zeta, int k) {
  return k == 0 ? 0.0 : 1.0 - std::pow(1.0 - zeta, k);
}

}  // namespace

double infection_probability(const TemporalNetwork& net, NodeId i, double zeta) {
  if (net.node(i).health != Health::Susceptible) return 0.0;
  return at_least_one(zeta, incident_exposures(net, i, true));
}

double spreading_risk(const TemporalNetwork& net, NodeId i, double zeta) {
  if (net.node(i).infected()) return at_least_one(zeta, incident_exposures(net, i, false));
  return infection_probability(net, i, zeta);
}

int step_epidemic(TemporalNetwork& net, const EpidemicState& epi, Rng& rng) {
  const int n = net.num_nodes();
  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  for (NodeId i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] =
      infection_probability(net, i, epi.transmissibility);

  for (auto& node : net.nodes()) {
    if (!node.infected()) continue;
    if (--node.recovery_clock <= 0) {
      node.recovery_clock = 0;
      node.health = epi.permanent_recovery ? Health::Recovered : Health::Susceptible;
      node.features[kHealthFeature] = 0.0;
    }
  }

  int infections = 0;
  for (NodeId i = 0; i < n; ++i) {
    auto& node = net.node(i);
    const double u = uniform01(rng);
    if (p[static_cast<std::size_t>(i)] > 0.0 && u < p[static_cast<std::size_t>(i)]) {
      node.health = Health::Infected;
      node.recovery_clock = epi.recovery_ticks;
      node.features[kHealthFeature] = 1.0;
      ++infections;
    }
  }
  return infections;
}

}  // namespace dtcns
