#include "quadrl/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace quadrl {

namespace {

void check_sizes(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw std::invalid_argument("mlp: need at least input and output layer");
  for (int s : sizes)
    if (s <= 0) throw std::invalid_argument("mlp: layer sizes must be positive");
}

}  // namespace

void MlpGrads::zero() {
  for (auto& w : weights) w.fill(0.0);
  for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

Mlp::Mlp(std::vector<int> layer_sizes, OutputActivation out_act, Rng& rng)
    : layer_sizes_(std::move(layer_sizes)), out_act_(out_act) {
  check_sizes(layer_sizes_);
  const int layers = static_cast<int>(layer_sizes_.size()) - 1;
  weights_.reserve(layers);
  biases_.reserve(layers);
  for (int k = 0; k < layers; ++k) {
    const int in = layer_sizes_[k];
    const int out = layer_sizes_[k + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Matrix w(out, in);
    for (double& v : w.data) v = rng.uniform(-bound, bound);
    Vec b(out);
    for (double& v : b) v = rng.uniform(-bound, bound);
    weights_.push_back(std::move(w));
    biases_.push_back(std::move(b));
  }
}

Mlp Mlp::zeros(std::vector<int> layer_sizes, OutputActivation out_act) {
  check_sizes(layer_sizes);
  Mlp net;
  net.layer_sizes_ = std::move(layer_sizes);
  net.out_act_ = out_act;
  const int layers = static_cast<int>(net.layer_sizes_.size()) - 1;
  for (int k = 0; k < layers; ++k) {
    net.weights_.emplace_back(net.layer_sizes_[k + 1], net.layer_sizes_[k]);
    net.biases_.emplace_back(net.layer_sizes_[k + 1], 0.0);
  }
  return net;
}

Vec Mlp::forward(std::span<const double> input) const {
  if (static_cast<int>(input.size()) != input_dim())
    throw std::invalid_argument("mlp: input length does not match first layer");
  MlpWorkspace ws;
  Matrix x(1, input_dim());
  std::copy(input.begin(), input.end(), x.data.begin());
  const Matrix& y = forward_batch(x, ws);
  return Vec(y.data);
}

const Matrix& Mlp::forward_batch(const Matrix& X, MlpWorkspace& ws) const {
  if (X.cols != input_dim())
    throw std::invalid_argument("mlp: batch width does not match first layer");
  const int layers = layer_count();
  ws.acts.resize(layers + 1);
  ws.acts[0] = X;
  for (int k = 0; k < layers; ++k) {
    linear_forward(ws.acts[k], weights_[k], biases_[k], ws.acts[k + 1]);
    Matrix& a = ws.acts[k + 1];
    if (k + 1 < layers) {
      for (double& v : a.data)
        if (v < 0.0) v = 0.0;
    } else if (out_act_ == OutputActivation::tanh_clamp) {
      for (double& v : a.data) v = std::tanh(v);
    }
  }
  return ws.acts.back();
}

void Mlp::backward_batch(const Matrix& cotangent, MlpWorkspace& ws, MlpGrads* grads,
                         Matrix* input_grad) const {
  const int layers = layer_count();
  if (cotangent.cols != output_dim() || cotangent.rows != ws.acts[0].rows)
    throw std::invalid_argument("mlp: cotangent shape does not match recorded forward");
  ws.cots.resize(layers + 1);

  // Cotangent with respect to the pre-activation of the output layer.
  Matrix* cur = &ws.cots[layers];
  *cur = cotangent;
  if (out_act_ == OutputActivation::tanh_clamp) {
    const Matrix& y = ws.acts[layers];
    for (std::size_t i = 0; i < cur->data.size(); ++i)
      cur->data[i] *= 1.0 - y.data[i] * y.data[i];
  }

  for (int k = layers - 1; k >= 0; --k) {
    if (grads) linear_param_grads(*cur, ws.acts[k], grads->weights[k], grads->biases[k]);
    const bool need_input = k > 0 || input_grad != nullptr;
    if (!need_input) break;
    Matrix* prev = &ws.cots[k];
    linear_input_grad(*cur, weights_[k], *prev);
    if (k > 0) {
      // ReLU mask of the activation feeding layer k.
      const Matrix& a = ws.acts[k];
      for (std::size_t i = 0; i < prev->data.size(); ++i)
        if (a.data[i] <= 0.0) prev->data[i] = 0.0;
    }
    cur = prev;
  }
  if (input_grad) *input_grad = ws.cots[0];
}

void Mlp::gradients(std::span<const double> input, std::span<const double> cotangent,
                    MlpGrads& grads, Vec* input_grad) const {
  if (static_cast<int>(cotangent.size()) != output_dim())
    throw std::invalid_argument("mlp: cotangent length does not match output layer");
  MlpWorkspace ws;
  Matrix x(1, input_dim());
  if (static_cast<int>(input.size()) != input_dim())
    throw std::invalid_argument("mlp: input length does not match first layer");
  std::copy(input.begin(), input.end(), x.data.begin());
  forward_batch(x, ws);
  Matrix g(1, output_dim());
  std::copy(cotangent.begin(), cotangent.end(), g.data.begin());
  Matrix dx;
  backward_batch(g, ws, &grads, input_grad ? &dx : nullptr);
  if (input_grad) *input_grad = dx.data;
}

MlpGrads Mlp::make_grads() const {
  MlpGrads g;
  for (int k = 0; k < layer_count(); ++k) {
    g.weights.emplace_back(weights_[k].rows, weights_[k].cols);
    g.biases.emplace_back(biases_[k].size(), 0.0);
  }
  return g;
}

std::vector<std::span<double>> Mlp::parameter_views() {
  std::vector<std::span<double>> v;
  for (int k = 0; k < layer_count(); ++k) {
    v.emplace_back(weights_[k].data);
    v.emplace_back(biases_[k]);
  }
  return v;
}

std::vector<std::span<const double>> Mlp::parameter_views() const {
  std::vector<std::span<const double>> v;
  for (int k = 0; k < layer_count(); ++k) {
    v.emplace_back(weights_[k].data);
    v.emplace_back(biases_[k]);
  }
  return v;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (int k = 0; k < layer_count(); ++k) n += weights_[k].size() + biases_[k].size();
  return n;
}

void Mlp::copy_parameters_from(const Mlp& other) {
  if (!same_shape(other)) throw std::invalid_argument("mlp: shape mismatch in parameter copy");
  for (int k = 0; k < layer_count(); ++k) {
    weights_[k].data = other.weights_[k].data;
    biases_[k] = other.biases_[k];
  }
}

bool Mlp::same_shape(const Mlp& other) const {
  return layer_sizes_ == other.layer_sizes_ && out_act_ == other.out_act_;
}

std::vector<std::span<const double>> grad_views(const MlpGrads& grads) {
  std::vector<std::span<const double>> v;
  for (std::size_t k = 0; k < grads.weights.size(); ++k) {
    v.emplace_back(grads.weights[k].data);
    v.emplace_back(grads.biases[k]);
  }
  return v;
}

}  // namespace quadrl
