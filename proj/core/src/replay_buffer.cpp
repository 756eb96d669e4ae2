#include "dtcns/replay_buffer.hpp"

#include <algorithm>
#include <unordered_set>

#include "dtcns/errors.hpp"

namespace dtcns {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int obs_dim, int act_dim)
    : capacity_(capacity), obs_dim_(obs_dim), act_dim_(act_dim) {
  require(capacity > 0 && obs_dim > 0 && act_dim > 0, "ReplayBuffer: sizes must be positive");
  obs_.resize(capacity * static_cast<std::size_t>(obs_dim));
  next_obs_.resize(capacity * static_cast<std::size_t>(obs_dim));
  action_.resize(capacity * static_cast<std::size_t>(act_dim));
  reward_.resize(capacity);
  done_.resize(capacity);
}

void ReplayBuffer::push(std::span<const double> obs, std::span<const double> action,
                        double reward, std::span<const double> next_obs, bool done) {
  require(obs.size() == static_cast<std::size_t>(obs_dim_) &&
              next_obs.size() == static_cast<std::size_t>(obs_dim_),
          "ReplayBuffer::push: observation size mismatch");
  require(action.size() == static_cast<std::size_t>(act_dim_),
          "ReplayBuffer::push: action size mismatch");
  const auto od = static_cast<std::size_t>(obs_dim_);
  const auto ad = static_cast<std::size_t>(act_dim_);
  std::transform(obs.begin(), obs.end(), obs_.begin() + head_ * od,
                 [](double v) { return static_cast<float>(v); });
  std::transform(next_obs.begin(), next_obs.end(), next_obs_.begin() + head_ * od,
                 [](double v) { return static_cast<float>(v); });
  std::transform(action.begin(), action.end(), action_.begin() + head_ * ad,
                 [](double v) { return static_cast<float>(v); });
  reward_[head_] = reward;
  done_[head_] = done ? 1 : 0;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, Rng& rng) const {
  require(batch <= size_, "ReplayBuffer::sample: batch larger than buffer");
  std::vector<std::size_t> out;
  out.reserve(batch);
  std::unordered_set<std::size_t> taken;
  for (std::size_t j = size_ - batch; j < size_; ++j) {
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    const std::size_t pick = taken.contains(t) ? j : t;
    taken.insert(pick);
    out.push_back(pick);
  }
  return out;
}

TransitionBatch ReplayBuffer::gather(std::span<const std::size_t> indices) const {
  const auto b = static_cast<Eigen::Index>(indices.size());
  TransitionBatch out{Eigen::MatrixXd(obs_dim_, b), Eigen::MatrixXd(act_dim_, b),
                      Eigen::VectorXd(b), Eigen::MatrixXd(obs_dim_, b), Eigen::VectorXd(b)};
  const auto od = static_cast<std::size_t>(obs_dim_);
  const auto ad = static_cast<std::size_t>(act_dim_);
  for (Eigen::Index c = 0; c < b; ++c) {
    const std::size_t idx = indices[static_cast<std::size_t>(c)];
    require(idx < size_, "ReplayBuffer::gather: index out of range");
    for (std::size_t r = 0; r < od; ++r) {
      out.obs(static_cast<Eigen::Index>(r), c) = obs_[idx * od + r];
      out.next_obs(static_cast<Eigen::Index>(r), c) = next_obs_[idx * od + r];
    }
    for (std::size_t r = 0; r < ad; ++r)
      out.action(static_cast<Eigen::Index>(r), c) = action_[idx * ad + r];
    out.reward(c) = reward_[idx];
    out.done(c) = done_[idx];
  }
  return out;
}

TransitionBatch ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
  const auto idx = sample_indices(batch, rng);
  return gather(idx);
}

}  // namespace dtcns
