#include "dtcns/policy.hpp"

#include <algorithm>
#include <cmath>

#include "dtcns/epidemic.hpp"
#include "dtcns/errors.hpp"

namespace dtcns {

int observation_size(PolicyKind kind, int num_nodes) {
  return kind == PolicyKind::Cooperative ? kBlockSize * (num_nodes + 1) : 2 * kBlockSize;
}

void record_tick_exposures(TemporalNetwork& net) {
  const int n = net.num_nodes();
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const int contacts = static_cast<int>(net.edge(i, j).interacted) +
                           static_cast<int>(net.edge(j, i).interacted);
      if (contacts == 0) continue;
      auto& a = net.node(i);
      auto& b = net.node(j);
      if (b.infected()) a.epoch.exposures_to_infected += contacts;
      if (b.health == Health::Susceptible) a.epoch.exposures_to_healthy += contacts;
      if (a.infected()) b.epoch.exposures_to_infected += contacts;
      if (a.health == Health::Susceptible) b.epoch.exposures_to_healthy += contacts;
    }
  }
}

void roll_epoch(TemporalNetwork& net) {
  const int n = net.num_nodes();
  for (auto& node : net.nodes()) {
    node.last_epoch = node.epoch;
    node.epoch.reset(n);
    node.capital_spent = 0;
  }
}

std::vector<double> node_block(const TemporalNetwork& net, NodeId i, double zeta) {
  const auto& node = net.node(i);
  const int n = net.num_nodes();
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  auto share = [&](int count) { return std::clamp(count / denom, 0.0, 1.0); };
  const int exposures = node.infected() ? node.last_epoch.exposures_to_healthy
                                        : node.last_epoch.exposures_to_infected;
  const double risk =
      node.health == Health::Recovered ? 0.0 : 1.0 - std::pow(1.0 - zeta, exposures);
  return {static_cast<double>(node.beta()),
          std::clamp(node.features[kTraitFeature], 0.0, 1.0),
          share(node.last_epoch.out_interactions),
          share(node.last_epoch.in_interactions),
          share(node.last_epoch.bond_partners()),
          std::clamp(risk, 0.0, 1.0)};
}

std::vector<double> build_observation(PolicyKind kind, const TemporalNetwork& net, NodeId i,
                                      double zeta) {
  const int n = net.num_nodes();
  std::vector<double> obs = node_block(net, i, zeta);
  obs.reserve(static_cast<std::size_t>(observation_size(kind, n)));
  if (kind == PolicyKind::Cooperative) {
    for (NodeId j = 0; j < n; ++j) {
      const auto block = node_block(net, j, zeta);
      obs.insert(obs.end(), block.begin(), block.end());
    }
  } else {
    std::vector<double> mean(kBlockSize, 0.0);
    for (NodeId j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto block = node_block(net, j, zeta);
      for (int k = 0; k < kBlockSize; ++k) mean[static_cast<std::size_t>(k)] += block[static_cast<std::size_t>(k)];
    }
    if (n > 1)
      for (auto& m : mean) m /= static_cast<double>(n - 1);
    obs.insert(obs.end(), mean.begin(), mean.end());
  }
  return obs;
}

DecodedAction decode_action(std::span<const double> action, double deadzone, int num_nodes) {
  require(action.size() == static_cast<std::size_t>(kActionSize),
          "decode_action: wrong action length");
  DecodedAction out;
  auto decode = [&](double raw, int& pref, double& weight) {
    const double a = std::clamp(raw, -1.0, 1.0);
    if (std::abs(a) < deadzone || a == 0.0) {
      pref = 0;
      weight = 0.0;
    } else {
      pref = a > 0.0 ? 1 : -1;
      weight = std::abs(a);
    }
  };
  for (int k = 0; k < kNumFeatures; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    decode(action[ku], out.genome.p[ku], out.genome.w_p[ku]);
    decode(action[ku + kNumFeatures], out.genome.h[ku], out.genome.w_h[ku]);
  }
  const double x = std::clamp(action[kActionSize - 1], -1.0, 1.0);
  if (num_nodes <= 2) {
    out.capital_limit = std::max(0, num_nodes - 1);
  } else {
    out.capital_limit = static_cast<int>(std::lround(1.0 + std::abs(x) * (num_nodes - 2)));
  }
  return out;
}

std::vector<double> encode_action(const PreferenceGenome& genome, int capital_limit,
                                  int num_nodes) {
  std::vector<double> a(kActionSize, 0.0);
  for (int k = 0; k < kNumFeatures; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    a[ku] = genome.p[ku] * genome.w_p[ku];
    a[ku + kNumFeatures] = genome.h[ku] * genome.w_h[ku];
  }
  a[kActionSize - 1] =
      num_nodes > 2 ? static_cast<double>(capital_limit - 1) / (num_nodes - 2) : 0.0;
  return a;
}

PreferenceGenome ignorant_act(Rng& rng) {
  std::uniform_int_distribution<int> pref(-1, 1);
  auto weight = [&] {
    // uniform on (0,1]
    return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  };
  PreferenceGenome g;
  for (int k = 0; k < kNumFeatures; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    g.p[ku] = pref(rng);
    g.w_p[ku] = g.p[ku] != 0 ? weight() : 0.0;
    g.h[ku] = pref(rng);
    g.w_h[ku] = g.h[ku] != 0 ? weight() : 0.0;
  }
  return g;
}

double node_benefit(const TemporalNetwork& net, NodeId i, double zeta, double delta) {
  double bonds = 0.0;
  for (NodeId j = 0; j < net.num_nodes(); ++j) {
    if (j == i) continue;
    const auto& e = net.edge(i, j);
    if (e.bonded) bonds += e.bond_intensity;
  }
  if (bonds == 0.0) return 0.0;
  const double risk = spreading_risk(net, i, zeta);
  return net.node(i).infected() ? delta * bonds * (1.0 - risk) : bonds * (1.0 - risk);
}

double reward_cooperative(const TemporalNetwork& net, double zeta, double delta) {
  const int n = net.num_nodes();
  if (n == 0) return 0.0;
  double total = 0.0;
  for (NodeId i = 0; i < n; ++i) total += node_benefit(net, i, zeta, delta);
  return total / n;
}

double reward_egocentric(const TemporalNetwork& net, NodeId i, double zeta, double delta) {
  return node_benefit(net, i, zeta, delta);
}

double reward_ignorant(double constant) { return constant; }

}  // namespace dtcns
