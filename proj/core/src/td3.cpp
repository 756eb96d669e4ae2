#include "dtcns/td3.hpp"

#include <algorithm>
#include <cmath>

#include "dtcns/errors.hpp"

namespace dtcns {

Td3Config Td3Config::cooperative_defaults() { return Td3Config{}; }

Td3Config Td3Config::egocentric_defaults() {
  Td3Config cfg;
  cfg.total_steps = 20000;
  return cfg;
}

void Td3Config::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid td3 config: ") + what);
  };
  check(learning_rate > 0.0, "learning_rate must be > 0");
  check(batch_size > 0, "batch_size must be > 0");
  check(total_steps >= 0, "total_steps must be >= 0");
  check(discount > 0.0 && discount < 1.0, "discount must lie in (0,1)");
  check(policy_noise >= 0.0 && exploration_noise >= 0.0, "noises must be >= 0");
  check(target_noise_clip >= 0.0, "target_noise_clip must be >= 0");
  check(tau >= 0.0 && tau <= 1.0, "tau must lie in [0,1]");
  check(policy_delay >= 1, "policy_delay must be >= 1");
  check(buffer_capacity >= batch_size, "buffer_capacity must be >= batch_size");
  check(reward_scale > 0.0, "reward_scale must be > 0");
  check(max_grad_norm >= 0.0, "max_grad_norm must be >= 0");
  check(warmup_steps >= 0, "warmup_steps must be >= 0");
  for (int h : hidden) check(h > 0, "hidden sizes must be positive");
}

double td3_target(double reward, bool done, double gamma, double q1_next, double q2_next) {
  return reward + gamma * (done ? 0.0 : 1.0) * std::min(q1_next, q2_next);
}

std::vector<double> select_action(const DenseNet& actor, std::span<const double> obs,
                                  double explore_sigma, Rng& rng) {
  auto a = actor.predict(obs);
  if (explore_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, explore_sigma);
    for (auto& x : a) x += noise(rng);
  }
  for (auto& x : a) x = std::clamp(x, -1.0, 1.0);
  return a;
}

Gradients actor_gradient(DenseNet& actor, DenseNet& critic, const Eigen::MatrixXd& obs,
                         double* loss) {
  const Eigen::MatrixXd act = actor.forward(obs);
  Eigen::MatrixXd x(obs.rows() + act.rows(), obs.cols());
  x.topRows(obs.rows()) = obs;
  x.bottomRows(act.rows()) = act;
  const Eigen::MatrixXd q = critic.forward(x);
  if (loss) *loss = -q.mean();
  Eigen::MatrixXd dx;
  critic.backward(Eigen::MatrixXd::Constant(1, q.cols(), -1.0 / static_cast<double>(q.cols())),
                  &dx);
  return actor.backward(dx.bottomRows(act.rows()));
}

namespace {

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> s{in};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(out);
  return s;
}

}  // namespace

Td3Agent::Td3Agent(int obs_dim, int act_dim, const Td3Config& cfg, Rng& init_rng)
    : cfg_(cfg), obs_dim_(obs_dim), act_dim_(act_dim) {
  cfg_.validate();
  actor_ = DenseNet(layer_sizes(obs_dim, cfg.hidden, act_dim), Activation::Relu, Activation::Tanh);
  critic1_ = DenseNet(layer_sizes(obs_dim + act_dim, cfg.hidden, 1), Activation::Relu,
                      Activation::Identity);
  critic2_ = critic1_;
  actor_.init_uniform(init_rng);
  critic1_.init_uniform(init_rng);
  critic2_.init_uniform(init_rng);
  actor_target_ = actor_;
  critic1_target_ = critic1_;
  critic2_target_ = critic2_;
  actor_opt_ = Optimizer(cfg.optimizer, cfg.learning_rate, cfg.max_grad_norm);
  critic1_opt_ = Optimizer(cfg.optimizer, cfg.learning_rate, cfg.max_grad_norm);
  critic2_opt_ = Optimizer(cfg.optimizer, cfg.learning_rate, cfg.max_grad_norm);
}

Eigen::MatrixXd Td3Agent::critic_input(const Eigen::MatrixXd& obs,
                                       const Eigen::MatrixXd& act) const {
  Eigen::MatrixXd x(obs_dim_ + act_dim_, obs.cols());
  x.topRows(obs_dim_) = obs;
  x.bottomRows(act_dim_) = act;
  return x;
}

Eigen::VectorXd Td3Agent::critic_targets(const TransitionBatch& batch, Rng& rng) const {
  const auto b = batch.obs.cols();
  Eigen::MatrixXd next_action = actor_target_.predict(batch.next_obs);
  std::normal_distribution<double> noise(0.0, cfg_.policy_noise);
  const double clip = cfg_.target_noise_clip;
  for (Eigen::Index c = 0; c < b; ++c)
    for (Eigen::Index r = 0; r < next_action.rows(); ++r) {
      const double eps = cfg_.policy_noise > 0.0 ? std::clamp(noise(rng), -clip, clip) : 0.0;
      next_action(r, c) = std::clamp(next_action(r, c) + eps, -1.0, 1.0);
    }
  const Eigen::MatrixXd x = critic_input(batch.next_obs, next_action);
  const Eigen::MatrixXd q1 = critic1_target_.predict(x);
  const Eigen::MatrixXd q2 = critic2_target_.predict(x);
  Eigen::VectorXd y(b);
  for (Eigen::Index c = 0; c < b; ++c)
    y(c) = td3_target(batch.reward(c), batch.done(c) > 0.5, cfg_.discount, q1(0, c), q2(0, c));
  return y;
}

UpdateStats Td3Agent::update(const ReplayBuffer& buffer, long step, Rng& rng) {
  if (buffer.size() < static_cast<std::size_t>(cfg_.batch_size)) return {};
  const auto batch = buffer.sample(static_cast<std::size_t>(cfg_.batch_size), rng);
  return update_on(batch, step, rng);
}

UpdateStats Td3Agent::update_on(const TransitionBatch& batch, long step, Rng& rng) {
  UpdateStats stats;
  stats.performed = true;
  const auto b = static_cast<double>(batch.obs.cols());
  const Eigen::VectorXd y = critic_targets(batch, rng);
  const Eigen::MatrixXd x = critic_input(batch.obs, batch.action);

  // Mean squared error per critic; gradient 2 (q - y) / B.
  auto fit = [&](DenseNet& critic, Optimizer& opt) {
    const Eigen::MatrixXd q = critic.forward(x);
    const Eigen::RowVectorXd err = q.row(0) - y.transpose();
    const Eigen::MatrixXd grad = (2.0 / b) * err;
    opt.step(critic, critic.backward(grad));
    return err.squaredNorm() / b;
  };
  stats.critic_loss = 0.5 * (fit(critic1_, critic1_opt_) + fit(critic2_, critic2_opt_));

  if (step % cfg_.policy_delay == 0) {
    // Actor maximizes Q1(s, actor(s)): loss = -mean Q1.
    actor_opt_.step(actor_, actor_gradient(actor_, critic1_, batch.obs, &stats.actor_loss));

    polyak_update(actor_target_, actor_, cfg_.tau);
    polyak_update(critic1_target_, critic1_, cfg_.tau);
    polyak_update(critic2_target_, critic2_, cfg_.tau);
    stats.actor_updated = true;
  }
  return stats;
}

}  // namespace dtcns
