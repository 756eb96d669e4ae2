#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dtcns/rng.hpp"

namespace dtcns {

enum class Activation { Identity, Relu, Tanh };

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
  bool operator==(const DenseLayer& o) const { return weight == o.weight && bias == o.bias; }
};

/// Parameter gradients, same shapes as the network layers.
struct Gradients {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::VectorXd> bias;

  void scale(double factor);
  double squared_norm() const;
};

/// Fully connected network. Hidden layers share one activation; the output
/// layer has its own (tanh for actors, identity for critics). Batches are
/// column-major: one sample per column.
class DenseNet {
 public:
  DenseNet() = default;
  DenseNet(std::vector<int> sizes, Activation hidden, Activation output);

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  void init_uniform(Rng& rng);

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }
  Activation hidden_activation() const { return hidden_; }
  Activation output_activation() const { return output_; }
  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  /// Forward pass that caches activations for a following backward().
  const Eigen::MatrixXd& forward(const Eigen::MatrixXd& x);
  /// Stateless forward pass.
  Eigen::MatrixXd predict(const Eigen::MatrixXd& x) const;
  std::vector<double> predict(std::span<const double> x) const;

  /// Reverse-mode gradients of sum_b L_b given dL/dY (out x batch) for the
  /// batch of the last forward(). If `input_grad` is non-null it receives
  /// dL/dX (in x batch).
  Gradients backward(const Eigen::MatrixXd& output_grad,
                     Eigen::MatrixXd* input_grad = nullptr) const;

  Gradients zero_gradients() const;
  std::size_t parameter_count() const;
  bool finite() const;

  bool operator==(const DenseNet& o) const {
    return sizes_ == o.sizes_ && hidden_ == o.hidden_ && output_ == o.output_ &&
           layers_ == o.layers_;
  }

 private:
  Activation activation_at(std::size_t layer) const {
    return layer + 1 == layers_.size() ? output_ : hidden_;
  }

  std::vector<int> sizes_;
  Activation hidden_ = Activation::Relu;
  Activation output_ = Activation::Identity;
  std::vector<DenseLayer> layers_;
  // Cached by forward(): inputs to every layer plus the final output.
  std::vector<Eigen::MatrixXd> activations_;
  bool has_cache_ = false;
};

/// target <- tau * online + (1 - tau) * target, parameter-wise.
void polyak_update(DenseNet& target, const DenseNet& online, double tau);

enum class OptimizerKind { Sgd, Adam };

class Optimizer {
 public:
  Optimizer() = default;
  Optimizer(OptimizerKind kind, double learning_rate, double max_grad_norm = 0.0);

  /// Descends along `grads`, clipping their global norm first when enabled.
  void step(DenseNet& net, Gradients grads);

 private:
  OptimizerKind kind_ = OptimizerKind::Sgd;
  double lr_ = 0.01;
  double max_grad_norm_ = 0.0;
  long steps_ = 0;
  Gradients m_, v_;
};

}  // namespace dtcns
