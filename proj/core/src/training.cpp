#include "dtcns/training.hpp"

#include <cstdio>
#include <ostream>

#include "dtcns/engine.hpp"
#include "dtcns/errors.hpp"

namespace dtcns {

namespace {

struct Accumulator {
  double critic = 0.0, actor = 0.0;
  int critic_n = 0, actor_n = 0;
  void add(const UpdateStats& s) {
    if (!s.performed) return;
    critic += s.critic_loss;
    ++critic_n;
    if (s.actor_updated) {
      actor += s.actor_loss;
      ++actor_n;
    }
  }
};

}  // namespace

TrainingResult train(const TrainingScenario& scenario, const Td3Config& cfg, std::uint64_t seed,
                     const TrainingProgress& progress) {
  scenario.sim.validate();
  cfg.validate();
  const int n = scenario.sim.num_nodes;
  const bool cooperative = scenario.kind == PolicyKind::Cooperative;
  if (!cooperative) {
    if (!scenario.cooperative_actor)
      throw ConfigError("egocentric training needs a trained cooperative policy");
    if (scenario.learner < 0 || scenario.learner >= n)
      throw ConfigError("egocentric learner is not a node id");
  }

  const int obs_dim = observation_size(scenario.kind, n);
  Rng init_rng = make_stream(seed, Stream::Init);
  Rng explore_rng = make_stream(seed, Stream::Exploration);
  Rng replay_rng = make_stream(seed, Stream::Replay);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Td3Agent agent(obs_dim, kActionSize, cfg, init_rng);
  ReplayBuffer buffer(static_cast<std::size_t>(cfg.buffer_capacity), obs_dim, kActionSize);

  std::vector<Style> styles(static_cast<std::size_t>(n), Style::Cooperative);
  if (!cooperative) styles[static_cast<std::size_t>(scenario.learner)] = Style::Egocentric;
  PolicySet frozen;
  if (!cooperative) frozen.cooperative = scenario.cooperative_actor;

  std::vector<NodeId> learners;
  if (cooperative)
    for (NodeId i = 0; i < n; ++i) learners.push_back(i);
  else
    learners.push_back(scenario.learner);
  const PolicyKind kind = scenario.kind;

  TrainingResult result;
  long env_steps = 0;
  long updates = 0;
  for (int episode = 0; env_steps < cfg.total_steps; ++episode) {
    Environment env(scenario.sim, styles, derive_seed(seed, static_cast<std::uint64_t>(episode)));
    env.start_epoch();
    std::vector<std::vector<double>> obs;
    for (NodeId i : learners) obs.push_back(env.observe(i, kind));

    double episode_return = 0.0;
    Accumulator acc;
    while (!env.done() && env_steps < cfg.total_steps) {
      // Frozen cooperative nodes decide from the same pre-decision state.
      if (!cooperative) {
        std::vector<std::pair<NodeId, std::vector<double>>> frozen_actions;
        for (NodeId i = 0; i < n; ++i)
          if (i != scenario.learner)
            frozen_actions.emplace_back(
                i, frozen.cooperative->predict(env.observe(i, PolicyKind::Cooperative)));
        for (const auto& [i, a] : frozen_actions) env.apply_action(i, a);
      }
      std::vector<std::vector<double>> actions;
      const bool warmup = env_steps < cfg.warmup_steps;
      for (std::size_t k = 0; k < learners.size(); ++k) {
        if (warmup) {
          std::vector<double> a(kActionSize);
          for (auto& x : a) x = uniform(explore_rng);
          actions.push_back(std::move(a));
        } else {
          actions.push_back(
              select_action(agent.actor(), obs[k], cfg.exploration_noise, explore_rng));
        }
        env.apply_action(learners[k], actions.back());
      }

      double reward = 0.0;
      const int epoch = env.config().rl_epoch_ticks;
      for (int t = 0; t < epoch && !env.done(); ++t) {
        const auto rec = env.run_tick();
        reward += cooperative ? rec.reward_step : env.last_benefit(scenario.learner);
      }
      episode_return += reward;
      ++env_steps;

      const bool done = env.done();
      env.start_epoch();
      for (std::size_t k = 0; k < learners.size(); ++k) {
        auto next = env.observe(learners[k], kind);
        buffer.push(obs[k], actions[k], cfg.reward_scale * reward, next, done);
        obs[k] = std::move(next);
      }
      if (buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
        ++updates;
        acc.add(agent.update(buffer, updates, replay_rng));
      }
    }

    TrainingCurveRow row;
    row.episode = episode;
    row.env_steps = env_steps;
    row.mean_return = episode_return;
    row.critic_loss = acc.critic_n ? acc.critic / acc.critic_n : 0.0;
    row.actor_loss = acc.actor_n ? acc.actor / acc.actor_n : 0.0;
    result.curve.push_back(row);
    if (progress) progress(row);
  }

  result.policy.kind = kind;
  result.policy.features = kNumFeatures;
  result.policy.nodes = n;
  result.policy.actor = agent.actor();
  return result;
}

void write_curve_csv(std::ostream& out, const std::vector<TrainingCurveRow>& curve) {
  out << kCurveColumns << '\n';
  char buf[256];
  for (const auto& r : curve) {
    std::snprintf(buf, sizeof buf, "%d,%ld,%.17g,%.17g,%.17g\n", r.episode, r.env_steps,
                  r.mean_return, r.critic_loss, r.actor_loss);
    out << buf;
  }
}

}  // namespace dtcns
