#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtcns/dense_net.hpp"
#include "dtcns/epidemic.hpp"
#include "dtcns/network.hpp"
#include "dtcns/policy.hpp"

namespace dtcns {

struct TickRecord {
  int tick = 0;
  int day = 0;
  int interactions = 0;
  int bonds = 0;  // bonded unordered pairs
  int new_infections = 0;
  int infected_now = 0;
  int cum_infections = 0;
  // Total reward: mean risk-discounted bond reward over all nodes.
  double reward_step = 0.0;
  double cum_reward = 0.0;
  // Per-style step rewards: the shared cooperative reward (0 without
  // cooperative nodes), the summed egocentric rewards, the summed constants.
  double reward_cooperative = 0.0;
  double reward_egocentric = 0.0;
  double reward_ignorant = 0.0;

  bool operator==(const TickRecord&) const = default;
};

struct EpisodeTrace {
  std::vector<TickRecord> ticks;

  int final_cum_infections() const { return ticks.empty() ? 0 : ticks.back().cum_infections; }
  double final_cum_reward() const { return ticks.empty() ? 0.0 : ticks.back().cum_reward; }
  /// Infected count at the end of each day.
  std::vector<int> daily_infected() const;
  bool operator==(const EpisodeTrace&) const = default;
};

/// Frozen actors used during evaluation. A style present in the scenario
/// without its actor is a startup error.
struct PolicySet {
  std::optional<DenseNet> cooperative;
  std::optional<DenseNet> egocentric;
};

/// One episode of the temporal network. Per tick, in this order:
///   1. score every encountered ordered pair;
///   2. decide interactions against thresholds and social capital;
///   3. assign interaction intensities;
///   4. update bonds and bond intensities;
///   5. evaluate the step rewards on the tick's contacts and health;
///   6. step the epidemic (recoveries, then Bernoulli infections).
/// Decisions happen at epoch boundaries through start_epoch() and the
/// apply_* calls.
class Environment {
 public:
  Environment(const SimConfig& config, std::vector<Style> styles, std::uint64_t seed,
              std::vector<NodeId> epidemic_seeds = {0});

  const TemporalNetwork& network() const { return net_; }
  TemporalNetwork& network() { return net_; }
  const SimConfig& config() const { return net_.config(); }
  const EpidemicState& epidemic() const { return epidemic_; }
  int tick() const { return net_.tick; }
  bool done() const { return net_.tick >= config().episode_ticks(); }
  bool at_epoch_boundary() const { return net_.tick % config().rl_epoch_ticks == 0; }
  int cum_infections() const { return cum_infections_; }
  double cum_reward() const { return cum_reward_; }

  /// Closes the running epoch and resets capital.
  void start_epoch();

  std::vector<double> observe(NodeId i, PolicyKind kind) const;
  void apply_action(NodeId i, std::span<const double> action);
  void apply_genome(NodeId i, const PreferenceGenome& genome);

  /// Cooperative nodes query the shared actor, egocentric nodes their actor,
  /// ignorant nodes draw random genomes.
  void decide(const PolicySet& policies);

  TickRecord run_tick();

  /// Risk-discounted bond reward of node i on the last tick.
  double last_benefit(NodeId i) const { return last_benefit_[static_cast<std::size_t>(i)]; }

 private:
  TemporalNetwork net_;
  EpidemicState epidemic_;
  Rng noise_rng_, epidemic_rng_, encounter_rng_, ignorant_rng_;
  int cum_infections_ = 0;
  double cum_reward_ = 0.0;
  std::vector<double> last_benefit_;
};

/// Full episode under frozen policies: epidemic seeded at node 0 on tick 0,
/// a decision at every epoch boundary.
EpisodeTrace run_episode(const SimConfig& config, const std::vector<Style>& styles,
                         const PolicySet& policies, std::uint64_t seed);

void check_policies(const std::vector<Style>& styles, const PolicySet& policies);

inline constexpr const char* kTraceColumns =
    "tick,day,interactions,bonds,new_infections,infected_now,cum_infections,reward_step,"
    "cum_reward";

/// Writes one CSV line per tick. Reals use 17 significant digits so a trace
/// re-read from disk reproduces the recorded doubles.
void write_trace_csv(std::ostream& out, const EpisodeTrace& trace,
                     const std::string& provenance_header = {},
                     const std::string& provenance_values = {});

}  // namespace dtcns
