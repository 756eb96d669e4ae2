#pragma once

#include <span>
#include <vector>

#include "dtcns/network.hpp"
#include "dtcns/rng.hpp"

namespace dtcns {

/// Features per node block: health, trait, out-share, in-share, bond share, risk.
inline constexpr int kBlockSize = 6;
/// Action layout: F preferential-attachment entries, F homophily entries, capital.
inline constexpr int kActionSize = 2 * kNumFeatures + 1;

enum class PolicyKind { Cooperative, Egocentric };

/// Observation length for a policy kind on an N-node network. The
/// cooperative collective mind sees the node's own block followed by the
/// blocks of all N nodes; an egocentric node sees its own block and the
/// element-wise mean block of everybody else.
int observation_size(PolicyKind kind, int num_nodes);

/// Folds this tick's interactions into each node's epoch exposure counters.
void record_tick_exposures(TemporalNetwork& net);

/// Closes the decision epoch: snapshots the counters that observations read
/// and resets capital and counters for the next epoch.
void roll_epoch(TemporalNetwork& net);

/// Per-node block built from the last completed epoch. Every entry is in [0,1].
std::vector<double> node_block(const TemporalNetwork& net, NodeId i, double zeta);
std::vector<double> build_observation(PolicyKind kind, const TemporalNetwork& net, NodeId i,
                                      double zeta);

struct DecodedAction {
  PreferenceGenome genome;
  int capital_limit = 0;
};

/// Entries are clamped to [-1,1]. |a| < deadzone decodes to a neutral
/// preference; otherwise preference sign(a) with weight |a|. The capital entry
/// x maps to round(1 + |x| (N - 2)).
DecodedAction decode_action(std::span<const double> action, double deadzone, int num_nodes);
/// Inverse of decode_action for genomes whose nonzero weights clear the deadzone.
std::vector<double> encode_action(const PreferenceGenome& genome, int capital_limit,
                                  int num_nodes);

/// Uniform preference in {-1,0,1} per entry; nonzero preferences get a
/// weight uniform on (0,1].
PreferenceGenome ignorant_act(Rng& rng);

/// Risk-discounted bond reward of node i on the current tick:
/// healthy: sum_j wB_ij (1 - risk), infected: delta * sum_j wB_ij (1 - risk).
double node_benefit(const TemporalNetwork& net, NodeId i, double zeta, double delta);
/// Shared reward of the collective mind: the mean node benefit.
double reward_cooperative(const TemporalNetwork& net, double zeta, double delta);
double reward_egocentric(const TemporalNetwork& net, NodeId i, double zeta, double delta);
double reward_ignorant(double constant);

}  // namespace dtcns
