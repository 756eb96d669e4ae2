#pragma once

#include <vector>

#include "dtcns/network.hpp"
#include "dtcns/rng.hpp"

namespace dtcns {

/// Epidemic parameters for one run. Per-node health lives in NodeState.
/// Recovery returns a node to susceptibility unless `permanent_recovery` is
/// set, so the default process is S -> I -> S with a fixed infectious period.
struct EpidemicState {
  std::vector<NodeId> seeds;
  double transmissibility = 0.10;
  int recovery_ticks = 150;
  bool permanent_recovery = false;

  static EpidemicState from_config(const SimConfig& config, std::vector<NodeId> seeds);
};

/// Infects the listed nodes with a full recovery clock; all others become
/// susceptible. Throws ConfigError for unknown ids.
void seed_epidemic(TemporalNetwork& net, const EpidemicState& epi);

/// Directed interactions incident to i on the current tick whose partner is
/// infected (`partner_infected`) or susceptible. Both directions count.
int incident_exposures(const TemporalNetwork& net, NodeId i, bool partner_infected);

/// 1 - (1 - zeta)^k over this tick's incident interactions with infected partners.
double infection_probability(const TemporalNetwork& net, NodeId i, double zeta);

/// Healthy node: its infection probability. Infected node: probability of
/// transmitting to at least one susceptible contact this tick.
double spreading_risk(const TemporalNetwork& net, NodeId i, double zeta);

/// One Bernoulli draw per susceptible node, clock decrement for infected nodes.
/// Recoveries are applied before new infections. Returns the number of new
/// infections.
int step_epidemic(TemporalNetwork& net, const EpidemicState& epi, Rng& rng);

}  // namespace dtcns
