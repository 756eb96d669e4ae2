#include "dtcns/network.hpp"

#include <algorithm>
#include <string>

#include "dtcns/errors.hpp"

namespace dtcns {

bool PreferenceGenome::valid() const {
  auto pref_ok = [](int v) { return v >= -1 && v <= 1; };
  auto pair_ok = [&](int pref, double w) {
    if (!pref_ok(pref) || w < 0.0 || w > 1.0) return false;
    return (pref == 0) == (w == 0.0);
  };
  if (p.size() != w_p.size() || h.size() != w_h.size() || p.size() != h.size()) return false;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!pair_ok(p[k], w_p[k]) || !pair_ok(h[k], w_h[k])) return false;
  }
  return pair_ok(c, w_c);
}

int EpochStats::bond_partners() const {
  return static_cast<int>(std::count(bonded_with.begin(), bonded_with.end(), 1));
}

void EpochStats::reset(int num_nodes) {
  out_interactions = 0;
  in_interactions = 0;
  exposures_to_infected = 0;
  exposures_to_healthy = 0;
  bonded_with.assign(static_cast<std::size_t>(num_nodes), 0);
}

void EdgeState::record(int t, double w, int window) {
  history.push_back({t, w});
  auto stale = [&](const InteractionSample& s) { return s.tick <= t - window; };
  history.erase(std::remove_if(history.begin(), history.end(), stale), history.end());
}

std::vector<InteractionSample> EdgeState::window_samples(int t, int window) const {
  std::vector<InteractionSample> out;
  for (const auto& s : history) {
    if (s.tick > t - window && s.tick <= t) out.push_back(s);
  }
  return out;
}

bool EdgeState::interacted_within(int t, int window) const {
  return std::any_of(history.begin(), history.end(), [&](const InteractionSample& s) {
    return s.tick > t - window && s.tick <= t;
  });
}

double EdgeState::window_mean(int t, int window) const {
  double sum = 0.0;
  int count = 0;
  for (const auto& s : history) {
    if (s.tick > t - window && s.tick <= t) {
      sum += s.intensity;
      ++count;
    }
  }
  return count ? sum / count : 0.0;
}

TemporalNetwork::TemporalNetwork(const SimConfig& config, std::vector<NodeState> nodes)
    : config_(config), nodes_(std::move(nodes)) {
  const auto n = nodes_.size();
  edges_.resize(n * n);
}

std::size_t TemporalNetwork::index(NodeId i, NodeId j) const {
  const int n = num_nodes();
  if (i < 0 || j < 0 || i >= n || j >= n) throw ContractViolation("edge: node id out of range");
  if (i == j) throw ContractViolation("edge: self-links do not exist");
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
}

NodeState& TemporalNetwork::node(NodeId i) {
  if (i < 0 || i >= num_nodes()) throw ContractViolation("node: id out of range");
  return nodes_[static_cast<std::size_t>(i)];
}

const NodeState& TemporalNetwork::node(NodeId i) const {
  if (i < 0 || i >= num_nodes()) throw ContractViolation("node: id out of range");
  return nodes_[static_cast<std::size_t>(i)];
}

EdgeState& TemporalNetwork::edge(NodeId i, NodeId j) { return edges_[index(i, j)]; }
const EdgeState& TemporalNetwork::edge(NodeId i, NodeId j) const { return edges_[index(i, j)]; }

int TemporalNetwork::infected_count() const {
  return static_cast<int>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const NodeState& n) { return n.infected(); }));
}

void TemporalNetwork::clear_tick_flags() {
  for (auto& e : edges_) {
    e.interacted = false;
    e.intensity = 0.0;
    e.bonded = false;
    e.bond_intensity = 0.0;
  }
}

bool TemporalNetwork::operator==(const TemporalNetwork& other) const {
  return tick == other.tick && config_ == other.config_ && nodes_ == other.nodes_ &&
         edges_ == other.edges_;
}

TemporalNetwork new_network(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng = make_stream(seed, Stream::Features);
  std::uniform_real_distribution<double> trait(0.0, 1.0);
  const int n = config.num_nodes;
  std::vector<NodeState> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& node = nodes[static_cast<std::size_t>(i)];
    node.id = i;
    node.features[kTraitFeature] = trait(rng);
    node.capital_limit = std::max(0, n - 1);
    node.epoch.reset(n);
    node.last_epoch.reset(n);
  }
  return TemporalNetwork(config, std::move(nodes));
}

std::vector<std::pair<NodeId, NodeId>> encounter_set(const TemporalNetwork& net, int /*tick*/) {
  const int n = net.num_nodes();
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(std::max(0, n - 1)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) pairs.emplace_back(i, j);
  return pairs;
}

std::vector<std::pair<NodeId, NodeId>> encounter_set(const TemporalNetwork& net, int tick,
                                                     double probability, Rng& rng) {
  if (probability >= 1.0) return encounter_set(net, tick);
  const int n = net.num_nodes();
  std::vector<std::uint8_t> met(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  std::bernoulli_distribution meet(probability);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (meet(rng)) {
        met[static_cast<std::size_t>(i * n + j)] = 1;
        met[static_cast<std::size_t>(j * n + i)] = 1;
      }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && met[static_cast<std::size_t>(i * n + j)]) pairs.emplace_back(i, j);
  return pairs;
}

}  // namespace dtcns
