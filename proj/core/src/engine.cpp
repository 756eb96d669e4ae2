#include "dtcns/engine.hpp"

#include <cstdio>
#include <ostream>

#include "dtcns/errors.hpp"
#include "dtcns/interaction.hpp"
#include "dtcns/td3.hpp"

namespace dtcns {

std::vector<int> EpisodeTrace::daily_infected() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < ticks.size(); ++k) {
    const bool last_of_day = k + 1 == ticks.size() || ticks[k + 1].day != ticks[k].day;
    if (last_of_day) out.push_back(ticks[k].infected_now);
  }
  return out;
}

Environment::Environment(const SimConfig& config, std::vector<Style> styles, std::uint64_t seed,
                         std::vector<NodeId> epidemic_seeds)
    : net_(new_network(config, seed)),
      epidemic_(EpidemicState::from_config(config, std::move(epidemic_seeds))),
      noise_rng_(make_stream(seed, Stream::ScoreNoise)),
      epidemic_rng_(make_stream(seed, Stream::Epidemic)),
      encounter_rng_(make_stream(seed, Stream::Encounter)),
      ignorant_rng_(make_stream(seed, Stream::Ignorant)),
      last_benefit_(static_cast<std::size_t>(config.num_nodes), 0.0) {
  if (styles.size() != static_cast<std::size_t>(config.num_nodes))
    throw ConfigError("scenario assigns " + std::to_string(styles.size()) + " styles to " +
                      std::to_string(config.num_nodes) + " nodes");
  for (int i = 0; i < config.num_nodes; ++i) net_.node(i).style = styles[static_cast<std::size_t>(i)];
  seed_epidemic(net_, epidemic_);
  cum_infections_ = net_.infected_count();
}

void Environment::start_epoch() { roll_epoch(net_); }

std::vector<double> Environment::observe(NodeId i, PolicyKind kind) const {
  return build_observation(kind, net_, i, epidemic_.transmissibility);
}

void Environment::apply_action(NodeId i, std::span<const double> action) {
  const auto decoded = decode_action(action, config().deadzone, net_.num_nodes());
  auto& node = net_.node(i);
  node.genome = decoded.genome;
  node.capital_limit = decoded.capital_limit;
}

void Environment::apply_genome(NodeId i, const PreferenceGenome& genome) {
  require(genome.valid(), "apply_genome: invalid genome");
  net_.node(i).genome = genome;
}

void check_policies(const std::vector<Style>& styles, const PolicySet& policies) {
  for (Style s : styles) {
    if (s == Style::Cooperative && !policies.cooperative)
      throw ConfigError("missing cooperative policy file (run `dtcns train --style cop` first)");
    if (s == Style::Egocentric && !policies.egocentric)
      throw ConfigError("missing egocentric policy file (run `dtcns train --style ego` first)");
  }
}

void Environment::decide(const PolicySet& policies) {
  std::vector<std::pair<NodeId, std::vector<double>>> actions;
  // Observations are taken before any node changes its genome.
  for (NodeId i = 0; i < net_.num_nodes(); ++i) {
    const Style s = net_.node(i).style;
    if (s == Style::Cooperative) {
      actions.emplace_back(i, policies.cooperative->predict(observe(i, PolicyKind::Cooperative)));
    } else if (s == Style::Egocentric) {
      actions.emplace_back(i, policies.egocentric->predict(observe(i, PolicyKind::Egocentric)));
    }
  }
  for (const auto& [i, a] : actions) apply_action(i, a);
  for (NodeId i = 0; i < net_.num_nodes(); ++i)
    if (net_.node(i).style == Style::Ignorant) apply_genome(i, ignorant_act(ignorant_rng_));
}

TickRecord Environment::run_tick() {
  require(!done(), "run_tick: episode already finished");
  const auto& cfg = config();
  const int t = net_.tick;
  TickRecord rec;
  rec.tick = t;
  rec.day = t / cfg.ticks_per_day;

  const auto encounters = encounter_set(net_, t, cfg.encounter_probability, encounter_rng_);
  rec.interactions = form_interactions(net_, t, encounters, noise_rng_);
  update_bonds(net_, t, cfg.bond_window_ticks);
  record_tick_exposures(net_);

  const int n = net_.num_nodes();
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (net_.edge(i, j).bonded) ++rec.bonds;

  const double zeta = epidemic_.transmissibility;
  double total = 0.0;
  bool any_cooperative = false;
  for (NodeId i = 0; i < n; ++i) {
    const double benefit = node_benefit(net_, i, zeta, cfg.delta);
    last_benefit_[static_cast<std::size_t>(i)] = benefit;
    total += benefit;
    switch (net_.node(i).style) {
      case Style::Cooperative: any_cooperative = true; break;
      case Style::Egocentric: rec.reward_egocentric += benefit; break;
      case Style::Ignorant: rec.reward_ignorant += reward_ignorant(cfg.ignorant_constant); break;
    }
  }
  rec.reward_step = n > 0 ? total / n : 0.0;
  if (any_cooperative) rec.reward_cooperative = rec.reward_step;
  for (auto& node : net_.nodes()) {
    switch (node.style) {
      case Style::Cooperative: node.reward_accum += rec.reward_cooperative; break;
      case Style::Egocentric: node.reward_accum += last_benefit_[static_cast<std::size_t>(node.id)]; break;
      case Style::Ignorant: node.reward_accum += cfg.ignorant_constant; break;
    }
  }

  rec.new_infections = step_epidemic(net_, epidemic_, epidemic_rng_);
  cum_infections_ += rec.new_infections;
  cum_reward_ += rec.reward_step;
  rec.infected_now = net_.infected_count();
  rec.cum_infections = cum_infections_;
  rec.cum_reward = cum_reward_;
  ++net_.tick;
  return rec;
}

EpisodeTrace run_episode(const SimConfig& config, const std::vector<Style>& styles,
                         const PolicySet& policies, std::uint64_t seed) {
  check_policies(styles, policies);
  Environment env(config, styles, seed);
  EpisodeTrace trace;
  trace.ticks.reserve(static_cast<std::size_t>(config.episode_ticks()));
  while (!env.done()) {
    if (env.at_epoch_boundary()) {
      env.start_epoch();
      env.decide(policies);
    }
    trace.ticks.push_back(env.run_tick());
  }
  return trace;
}

void write_trace_csv(std::ostream& out, const EpisodeTrace& trace,
                     const std::string& provenance_header,
                     const std::string& provenance_values) {
  if (!provenance_header.empty()) out << provenance_header << ',';
  out << kTraceColumns << '\n';
  char buf[256];
  for (const auto& r : trace.ticks) {
    if (!provenance_values.empty()) out << provenance_values << ',';
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%d,%d,%.17g,%.17g\n", r.tick, r.day,
                  r.interactions, r.bonds, r.new_infections, r.infected_now, r.cum_infections,
                  r.reward_step, r.cum_reward);
    out << buf;
  }
}

}  // namespace dtcns
