#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dtcns/rng.hpp"

namespace dtcns {

struct TransitionBatch {
  Eigen::MatrixXd obs;       // obs_dim x batch
  Eigen::MatrixXd action;    // act_dim x batch
  Eigen::VectorXd reward;    // batch
  Eigen::MatrixXd next_obs;  // obs_dim x batch
  Eigen::VectorXd done;      // batch, 0 or 1
};

/// Fixed-capacity ring of transitions. Observations are stored in single
/// precision; the newest transition overwrites the oldest once full.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int obs_dim, int act_dim);

  void push(std::span<const double> obs, std::span<const double> action, double reward,
            std::span<const double> next_obs, bool done);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }

  /// `batch` distinct indices drawn uniformly (Floyd's algorithm).
  std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const;
  TransitionBatch gather(std::span<const std::size_t> indices) const;
  TransitionBatch sample(std::size_t batch, Rng& rng) const;

 private:
  std::size_t capacity_;
  int obs_dim_;
  int act_dim_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;
  std::vector<float> obs_, next_obs_, action_;
  std::vector<double> reward_;
  std::vector<std::uint8_t> done_;
};

}  // namespace dtcns
