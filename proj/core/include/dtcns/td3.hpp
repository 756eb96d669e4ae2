#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dtcns/dense_net.hpp"
#include "dtcns/replay_buffer.hpp"
#include "dtcns/rng.hpp"

namespace dtcns {

/// TD3 hyperparameters. Learning rate, batch size, step budgets, discount and
/// the two noise levels are the reference settings; the rest are the usual
/// TD3 defaults.
struct Td3Config {
  double learning_rate = 0.01;
  int batch_size = 256;
  int total_steps = 50000;
  double discount = 0.99;
  double policy_noise = 0.2;
  double exploration_noise = 0.1;
  double target_noise_clip = 0.5;
  double tau = 0.005;
  int policy_delay = 2;
  int buffer_capacity = 100000;
  std::vector<int> hidden = {64, 64};
  OptimizerKind optimizer = OptimizerKind::Sgd;
  // Multiplies environment rewards before they enter the buffer.
  double reward_scale = 0.1;
  // Global gradient-norm clip; 0 disables.
  double max_grad_norm = 1.0;
  // Environment steps at the start of training that act uniformly at random.
  int warmup_steps = 1000;

  static Td3Config cooperative_defaults();
  static Td3Config egocentric_defaults();
  void validate() const;
  bool operator==(const Td3Config&) const = default;
};

/// y = r + gamma (1 - done) min(q1, q2).
double td3_target(double reward, bool done, double gamma, double q1_next, double q2_next);

/// clamp(actor(obs) + N(0, sigma^2) per coordinate, -1, 1).
std::vector<double> select_action(const DenseNet& actor, std::span<const double> obs,
                                  double explore_sigma, Rng& rng);

/// Gradient of the actor loss -mean_b Q(s_b, actor(s_b)) with respect to the
/// actor parameters. Leaves forward caches in both networks.
Gradients actor_gradient(DenseNet& actor, DenseNet& critic, const Eigen::MatrixXd& obs,
                         double* loss = nullptr);

struct UpdateStats {
  bool performed = false;  // false when the buffer held fewer than batch_size
  bool actor_updated = false;
  double critic_loss = 0.0;
  double actor_loss = 0.0;
};

/// Actor, twin critics and their target copies.
class Td3Agent {
 public:
  Td3Agent(int obs_dim, int act_dim, const Td3Config& cfg, Rng& init_rng);

  const DenseNet& actor() const { return actor_; }
  DenseNet& actor() { return actor_; }
  const DenseNet& actor_target() const { return actor_target_; }
  const DenseNet& critic1() const { return critic1_; }
  const DenseNet& critic2() const { return critic2_; }
  const DenseNet& critic1_target() const { return critic1_target_; }
  const DenseNet& critic2_target() const { return critic2_target_; }
  const Td3Config& config() const { return cfg_; }

  /// One TD3 iteration on a uniformly sampled batch. `step` is 1-based; the
  /// actor and all targets move only when step % policy_delay == 0.
  UpdateStats update(const ReplayBuffer& buffer, long step, Rng& rng);
  /// Same, on an explicit batch.
  UpdateStats update_on(const TransitionBatch& batch, long step, Rng& rng);

  /// Critic targets for a batch, using the target networks and clipped
  /// smoothing noise drawn from `rng`.
  Eigen::VectorXd critic_targets(const TransitionBatch& batch, Rng& rng) const;

 private:
  Eigen::MatrixXd critic_input(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& act) const;

  Td3Config cfg_;
  int obs_dim_;
  int act_dim_;
  DenseNet actor_, actor_target_;
  DenseNet critic1_, critic2_, critic1_target_, critic2_target_;
  Optimizer actor_opt_, critic1_opt_, critic2_opt_;
};

}  // namespace dtcns
