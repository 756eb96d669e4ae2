#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dtcns/config.hpp"
#include "dtcns/rng.hpp"

namespace dtcns {

using NodeId = int;

/// Connection preferences of one node. Preferences take values in {-1,0,1};
/// a weight is zero exactly when its preference is zero.
struct PreferenceGenome {
  std::vector<int> p = std::vector<int>(kNumFeatures, 0);
  std::vector<double> w_p = std::vector<double>(kNumFeatures, 0.0);
  std::vector<int> h = std::vector<int>(kNumFeatures, 0);
  std::vector<double> w_h = std::vector<double>(kNumFeatures, 0.0);
  // Common-friend preference; carried for completeness, no score term uses it.
  int c = 0;
  double w_c = 0.0;

  bool valid() const;
  bool operator==(const PreferenceGenome&) const = default;
};

enum class Health : std::uint8_t { Susceptible, Infected, Recovered };

/// Interaction counters for one decision epoch.
struct EpochStats {
  int out_interactions = 0;
  int in_interactions = 0;
  int exposures_to_infected = 0;
  int exposures_to_healthy = 0;
  std::vector<std::uint8_t> bonded_with;  // per partner, 1 if bonded this epoch

  int bond_partners() const;
  void reset(int num_nodes);
  bool operator==(const EpochStats&) const = default;
};

struct NodeState {
  NodeId id = 0;
  Style style = Style::Cooperative;
  std::vector<double> features = std::vector<double>(kNumFeatures, 0.0);
  PreferenceGenome genome;
  Health health = Health::Susceptible;
  int recovery_clock = 0;
  int capital_spent = 0;
  int capital_limit = 0;
  double reward_accum = 0.0;
  EpochStats epoch;
  EpochStats last_epoch;

  bool infected() const { return health == Health::Infected; }
  /// Health flag as used by the formulas: 1 when infected, else 0.
  int beta() const { return infected() ? 1 : 0; }
  bool operator==(const NodeState&) const = default;
};

/// One (tick, intensity) sample of a directed interaction.
struct InteractionSample {
  int tick = 0;
  double intensity = 0.0;
  bool operator==(const InteractionSample&) const = default;
};

struct EdgeState {
  bool interacted = false;
  double intensity = 0.0;
  bool bonded = false;
  double bond_intensity = 0.0;
  // Interactions inside the bonding window, oldest first.
  std::vector<InteractionSample> history;

  /// Append an interaction and drop samples that left the window (t-window, t].
  void record(int tick, double w, int window);
  /// Samples with tick in (t-window, t].
  std::vector<InteractionSample> window_samples(int tick, int window) const;
  bool interacted_within(int tick, int window) const;
  /// Mean intensity of the window samples, 0 when there are none.
  double window_mean(int tick, int window) const;
  bool operator==(const EdgeState&) const = default;
};

/// Directed temporal network: N nodes and a dense N x N table of edge states.
/// Diagonal entries are never accessible.
class TemporalNetwork {
 public:
  TemporalNetwork() = default;
  TemporalNetwork(const SimConfig& config, std::vector<NodeState> nodes);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int tick = 0;

  const SimConfig& config() const { return config_; }
  SimConfig& mutable_config() { return config_; }

  NodeState& node(NodeId i);
  const NodeState& node(NodeId i) const;
  std::span<NodeState> nodes() { return nodes_; }
  std::span<const NodeState> nodes() const { return nodes_; }

  /// Throws ContractViolation for i == j or out-of-range ids.
  EdgeState& edge(NodeId i, NodeId j);
  const EdgeState& edge(NodeId i, NodeId j) const;

  int infected_count() const;
  /// Clears the per-tick interaction and bond flags of every edge.
  void clear_tick_flags();

  bool operator==(const TemporalNetwork& other) const;

 private:
  std::size_t index(NodeId i, NodeId j) const;

  SimConfig config_;
  std::vector<NodeState> nodes_;
  std::vector<EdgeState> edges_;
};

/// Fresh network: trait feature uniform on [0,1], zero genomes, no interactions,
/// every node susceptible with the default style Cooperative and capital N-1.
TemporalNetwork new_network(const SimConfig& config, std::uint64_t seed);

/// Ordered pairs (i, j), i != j, that meet on `tick`. Full mixing returns all
/// N(N-1) pairs in row-major order.
std::vector<std::pair<NodeId, NodeId>> encounter_set(const TemporalNetwork& net, int tick);
/// Bernoulli encounters: each unordered pair meets with `probability`, and a
/// meeting makes both directed pairs eligible.
std::vector<std::pair<NodeId, NodeId>> encounter_set(const TemporalNetwork& net, int tick,
                                                     double probability, Rng& rng);

}  // namespace dtcns
