#include "dtcns/dense_net.hpp"

#include <cmath>

#include "dtcns/errors.hpp"

namespace dtcns {

namespace {

void apply(Activation a, Eigen::MatrixXd& z) {
  switch (a) {
    case Activation::Identity: break;
    case Activation::Relu: z = z.cwiseMax(0.0); break;
    case Activation::Tanh: z = z.array().tanh().matrix(); break;
  }
}

// Multiplies `grad` in place by the activation derivative, expressed through
// the activation output `y`.
void apply_derivative(Activation a, const Eigen::MatrixXd& y, Eigen::MatrixXd& grad) {
  switch (a) {
    case Activation::Identity: break;
    case Activation::Relu: grad = (y.array() > 0.0).select(grad, 0.0); break;
    case Activation::Tanh: grad = grad.cwiseProduct((1.0 - y.array().square()).matrix()); break;
  }
}

}  // namespace

void Gradients::scale(double factor) {
  for (auto& w : weight) w *= factor;
  for (auto& b : bias) b *= factor;
}

double Gradients::squared_norm() const {
  double s = 0.0;
  for (const auto& w : weight) s += w.squaredNorm();
  for (const auto& b : bias) s += b.squaredNorm();
  return s;
}

DenseNet::DenseNet(std::vector<int> sizes, Activation hidden, Activation output)
    : sizes_(std::move(sizes)), hidden_(hidden), output_(output) {
  require(sizes_.size() >= 2, "DenseNet: need at least input and output sizes");
  for (int s : sizes_) require(s > 0, "DenseNet: layer sizes must be positive");
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    layers_.push_back({Eigen::MatrixXd::Zero(sizes_[l + 1], sizes_[l]),
                       Eigen::VectorXd::Zero(sizes_[l + 1])});
  }
}

void DenseNet::init_uniform(Rng& rng) {
  for (auto& layer : layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.weight.cols()));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) layer.weight(r, c) = u(rng);
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = u(rng);
  }
  has_cache_ = false;
}

const Eigen::MatrixXd& DenseNet::forward(const Eigen::MatrixXd& x) {
  require(x.rows() == input_size(), "DenseNet::forward: input size mismatch");
  activations_.resize(layers_.size() + 1);
  activations_[0] = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].weight * activations_[l];
    z.colwise() += layers_[l].bias;
    apply(activation_at(l), z);
    activations_[l + 1] = std::move(z);
  }
  has_cache_ = true;
  return activations_.back();
}

Eigen::MatrixXd DenseNet::predict(const Eigen::MatrixXd& x) const {
  require(x.rows() == input_size(), "DenseNet::predict: input size mismatch");
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].weight * a;
    z.colwise() += layers_[l].bias;
    apply(activation_at(l), z);
    a = std::move(z);
  }
  return a;
}

std::vector<double> DenseNet::predict(std::span<const double> x) const {
  require(x.size() == static_cast<std::size_t>(input_size()),
          "DenseNet::predict: input size mismatch");
  Eigen::MatrixXd in(input_size(), 1);
  for (int i = 0; i < input_size(); ++i) in(i, 0) = x[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd out = predict(in);
  return std::vector<double>(out.data(), out.data() + out.size());
}

Gradients DenseNet::backward(const Eigen::MatrixXd& output_grad,
                             Eigen::MatrixXd* input_grad) const {
  require(has_cache_, "DenseNet::backward: called before forward");
  require(output_grad.rows() == output_size() &&
              output_grad.cols() == activations_.back().cols(),
          "DenseNet::backward: gradient shape mismatch");
  Gradients g = zero_gradients();
  Eigen::MatrixXd delta = output_grad;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    apply_derivative(activation_at(l), activations_[l + 1], delta);
    g.weight[l].noalias() = delta * activations_[l].transpose();
    g.bias[l] = delta.rowwise().sum();
    if (l > 0 || input_grad != nullptr) {
      Eigen::MatrixXd prev = layers_[l].weight.transpose() * delta;
      delta = std::move(prev);
    }
  }
  if (input_grad != nullptr) *input_grad = std::move(delta);
  return g;
}

Gradients DenseNet::zero_gradients() const {
  Gradients g;
  for (const auto& layer : layers_) {
    g.weight.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()));
    g.bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return g;
}

std::size_t DenseNet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_)
    n += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
  return n;
}

bool DenseNet::finite() const {
  for (const auto& layer : layers_)
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) return false;
  return true;
}

void polyak_update(DenseNet& target, const DenseNet& online, double tau) {
  require(target.sizes() == online.sizes(), "polyak_update: shape mismatch");
  auto& t = target.layers();
  const auto& o = online.layers();
  for (std::size_t l = 0; l < t.size(); ++l) {
    t[l].weight = tau * o[l].weight + (1.0 - tau) * t[l].weight;
    t[l].bias = tau * o[l].bias + (1.0 - tau) * t[l].bias;
  }
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate, double max_grad_norm)
    : kind_(kind), lr_(learning_rate), max_grad_norm_(max_grad_norm) {}

void Optimizer::step(DenseNet& net, Gradients grads) {
  if (max_grad_norm_ > 0.0) {
    const double norm = std::sqrt(grads.squared_norm());
    if (norm > max_grad_norm_) grads.scale(max_grad_norm_ / norm);
  }
  auto& layers = net.layers();
  if (kind_ == OptimizerKind::Sgd) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
      layers[l].weight -= lr_ * grads.weight[l];
      layers[l].bias -= lr_ * grads.bias[l];
    }
    return;
  }
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  if (m_.weight.empty()) {
    m_ = net.zero_gradients();
    v_ = net.zero_gradients();
  }
  ++steps_;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(steps_));
  auto adam = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
    param.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  for (std::size_t l = 0; l < layers.size(); ++l) {
    adam(layers[l].weight, m_.weight[l], v_.weight[l], grads.weight[l]);
    adam(layers[l].bias, m_.bias[l], v_.bias[l], grads.bias[l]);
  }
}

}  // namespace dtcns
