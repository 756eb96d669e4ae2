#include "dtcns/interaction.hpp"

#include <algorithm>
#include <cmath>

#include "dtcns/errors.hpp"

namespace dtcns {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double homophily_raw(std::span<const double> fi, std::span<const double> fj,
                     std::span<const int> h, std::span<const double> w_h) {
  require(fi.size() == fj.size() && fi.size() == h.size() && fi.size() == w_h.size(),
          "homophily_score: vector lengths differ");
  double raw = 0.0;
  for (std::size_t k = 0; k < fi.size(); ++k) raw += std::abs(fi[k] - fj[k]) * h[k] * w_h[k];
  return raw;
}

double pref_attach_raw(std::span<const double> fj, std::span<const int> p,
                       std::span<const double> w_p) {
  require(fj.size() == p.size() && fj.size() == w_p.size(),
          "pref_attach_score: vector lengths differ");
  double raw = 0.0;
  for (std::size_t k = 0; k < fj.size(); ++k) raw += fj[k] * p[k] * w_p[k];
  return raw;
}

double homophily_score(std::span<const double> fi, std::span<const double> fj,
                       std::span<const int> h, std::span<const double> w_h) {
  return clamp01(homophily_raw(fi, fj, h, w_h));
}

double pref_attach_score(std::span<const double> fj, std::span<const int> p,
                         std::span<const double> w_p) {
  return clamp01(pref_attach_raw(fj, p, w_p));
}

ScoreBreakdown combine_score(double homophily, double pref_attach, double noise) {
  return {homophily, pref_attach, noise, 0.5 * (homophily + pref_attach) + noise};
}

ScoreBreakdown interaction_score(const TemporalNetwork& net, NodeId i, NodeId j,
                                 bool encountered, double noise_sigma, Rng& rng) {
  require(i != j, "interaction_score: i == j");
  if (!encountered) return {};
  const auto& src = net.node(i);
  const auto& dst = net.node(j);
  const double hom = homophily_score(src.features, dst.features, src.genome.h, src.genome.w_h);
  const double pa = pref_attach_score(dst.features, src.genome.p, src.genome.w_p);
  double noise = 0.0;
  if (noise_sigma > 0.0) noise = std::normal_distribution<double>(0.0, noise_sigma)(rng);
  return combine_score(hom, pa, noise);
}

double threshold(const NodeState& node, double base, double eta) {
  return node.infected() ? eta * base : base;
}

bool decide_interaction(double score, double thresh, NodeState& node) {
  if (score > thresh && node.capital_spent < node.capital_limit) {
    ++node.capital_spent;
    return true;
  }
  return false;
}

double interaction_intensity(double score, double thresh, bool interacted, double b,
                             double alpha) {
  return interacted ? b + alpha * (score - thresh) : 0.0;
}

double bond_intensity(std::span<const InteractionSample> hist_ij,
                      std::span<const InteractionSample> hist_ji) {
  if (hist_ij.empty() || hist_ji.empty()) return 0.0;
  auto mean = [](std::span<const InteractionSample> h) {
    double s = 0.0;
    for (const auto& x : h) s += x.intensity;
    return s / static_cast<double>(h.size());
  };
  return 0.5 * (mean(hist_ij) + mean(hist_ji));
}

void update_bonds(TemporalNetwork& net, int tick, int window) {
  const int n = net.num_nodes();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      auto& ij = net.edge(i, j);
      auto& ji = net.edge(j, i);
      const bool bonded = (ij.interacted && ji.interacted_within(tick, window)) ||
                          (ji.interacted && ij.interacted_within(tick, window));
      double w = 0.0;
      if (bonded) {
        const double mij = ij.window_mean(tick, window);
        const double mji = ji.window_mean(tick, window);
        w = mij > 0.0 && mji > 0.0 ? 0.5 * (mij + mji) : 0.0;
      }
      ij.bonded = ji.bonded = bonded && w > 0.0;
      ij.bond_intensity = ji.bond_intensity = ij.bonded ? w : 0.0;
      if (ij.bonded) {
        net.node(i).epoch.bonded_with[static_cast<std::size_t>(j)] = 1;
        net.node(j).epoch.bonded_with[static_cast<std::size_t>(i)] = 1;
      }
    }
  }
}

int form_interactions(TemporalNetwork& net, int tick,
                      std::span<const std::pair<NodeId, NodeId>> encounters, Rng& noise_rng) {
  const auto& cfg = net.config();
  const int n = net.num_nodes();
  net.clear_tick_flags();

  struct Candidate {
    NodeId target;
    double score;
  };
  std::vector<std::vector<Candidate>> candidates(static_cast<std::size_t>(n));
  // Scores are drawn for every encounter in order so the noise stream advances
  // identically whatever the decisions turn out to be.
  std::normal_distribution<double> noise(0.0, cfg.noise_sigma > 0.0 ? cfg.noise_sigma : 1.0);
  for (const auto& [i, j] : encounters) {
    require(i != j, "form_interactions: self encounter");
    const auto& src = net.node(i);
    const auto& dst = net.node(j);
    const double hom = homophily_score(src.features, dst.features, src.genome.h, src.genome.w_h);
    const double pa = pref_attach_score(dst.features, src.genome.p, src.genome.w_p);
    const double eps = cfg.noise_sigma > 0.0 ? noise(noise_rng) : 0.0;
    candidates[static_cast<std::size_t>(i)].push_back({j, combine_score(hom, pa, eps).total});
  }

  int formed = 0;
  for (int i = 0; i < n; ++i) {
    auto& list = candidates[static_cast<std::size_t>(i)];
    std::stable_sort(list.begin(), list.end(),
                     [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
    auto& src = net.node(i);
    const double thresh = threshold(src, cfg.threshold_for(src.style), cfg.eta);
    for (const auto& c : list) {
      if (!decide_interaction(c.score, thresh, src)) {
        if (c.score <= thresh || src.capital_spent >= src.capital_limit) {
          // Sorted descending: nothing further can pass.
          break;
        }
        continue;
      }
      auto& e = net.edge(i, c.target);
      e.interacted = true;
      e.intensity = interaction_intensity(c.score, thresh, true, cfg.b, cfg.alpha);
      e.record(tick, e.intensity, cfg.bond_window_ticks);
      ++src.epoch.out_interactions;
      ++net.node(c.target).epoch.in_interactions;
      ++formed;
    }
  }
  return formed;
}

}  // namespace dtcns
