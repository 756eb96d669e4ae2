#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dtcns/network.hpp"
#include "dtcns/rng.hpp"

namespace dtcns {

struct ScoreBreakdown {
  double homophily = 0.0;
  double pref_attach = 0.0;
  double noise = 0.0;
  double total = 0.0;
};

// Raw weighted sums, before clamping to [0,1].
double homophily_raw(std::span<const double> fi, std::span<const double> fj,
                     std::span<const int> h, std::span<const double> w_h);
double pref_attach_raw(std::span<const double> fj, std::span<const int> p,
                       std::span<const double> w_p);

/// Weighted feature-difference score of i towards j, clamped to [0,1].
/// Positive preferences reward dissimilarity, negative ones similarity.
double homophily_score(std::span<const double> fi, std::span<const double> fj,
                       std::span<const int> h, std::span<const double> w_h);
/// Weighted feature score of the target j, clamped to [0,1].
double pref_attach_score(std::span<const double> fj, std::span<const int> p,
                         std::span<const double> w_p);

/// total = (homophily + pref_attach) / 2 + noise.
ScoreBreakdown combine_score(double homophily, double pref_attach, double noise);

/// Score that i assigns to an interaction towards j. Draws one normal sample
/// from `rng` only when the pair encountered.
ScoreBreakdown interaction_score(const TemporalNetwork& net, NodeId i, NodeId j,
                                 bool encountered, double noise_sigma, Rng& rng);

/// eta^beta * base: raised by the penalty factor while the node is infected.
double threshold(const NodeState& node, double base, double eta);

/// 1 iff score > thresh and the node still has social capital; spends one
/// unit of capital on success.
bool decide_interaction(double score, double thresh, NodeState& node);

double interaction_intensity(double score, double thresh, bool interacted, double b,
                             double alpha);

/// Mean directed intensity in each direction, averaged. Zero when either
/// direction has no interaction inside the window.
double bond_intensity(std::span<const InteractionSample> hist_ij,
                      std::span<const InteractionSample> hist_ji);

/// Derives B and w^B for every unordered pair at `tick`. A pair is bonded when
/// one direction interacts at `tick` and the other direction interacted
/// anywhere in (tick - window, tick].
void update_bonds(TemporalNetwork& net, int tick, int window);

/// Phases 1-3 of a tick: score every encountered pair, let each node spend
/// capital on its candidates in descending score order, assign intensities and
/// append them to the edge histories. Returns the number of interactions.
int form_interactions(TemporalNetwork& net, int tick,
                      std::span<const std::pair<NodeId, NodeId>> encounters, Rng& noise_rng);

}  // namespace dtcns
