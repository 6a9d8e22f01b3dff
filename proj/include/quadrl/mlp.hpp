#pragma once

#include <span>
#include <vector>

#include "quadrl/matrix.hpp"
#include "quadrl/rng.hpp"

namespace quadrl {

/// Output-layer activation. Hidden layers are always rectified-linear.
enum class OutputActivation { identity, tanh_clamp };

/// Per-parameter gradient accumulator with the same shapes as an Mlp.
struct MlpGrads {
  std::vector<Matrix> weights;
  std::vector<Vec> biases;

  void zero();
};

/// Scratch space for batched forward/backward. Owns the per-layer
/// activations so repeated updates do not allocate.
struct MlpWorkspace {
  std::vector<Matrix> acts;  // acts[0] = input, acts[k+1] = output of layer k
  std::vector<Matrix> cots;  // backward temporaries

  const Matrix& output() const { return acts.back(); }
};

/// Dense multilayer perceptron, 64-bit floats, hand-derived backprop.
class Mlp {
 public:
  Mlp() = default;

  /// Seeded init: weights and biases uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)],
  /// drawn layer by layer, weights row-major then bias.
  Mlp(std::vector<int> layer_sizes, OutputActivation out_act, Rng& rng);

  /// All parameters zero; handy for tests.
  static Mlp zeros(std::vector<int> layer_sizes, OutputActivation out_act);

  int input_dim() const { return layer_sizes_.front(); }
  int output_dim() const { return layer_sizes_.back(); }
  int layer_count() const { return static_cast<int>(weights_.size()); }
  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  OutputActivation output_activation() const { return out_act_; }

  std::vector<Matrix>& weights() { return weights_; }
  const std::vector<Matrix>& weights() const { return weights_; }
  std::vector<Vec>& biases() { return biases_; }
  const std::vector<Vec>& biases() const { return biases_; }

  /// Single input vector in, output vector out. Throws std::invalid_argument
  /// on dimension mismatch.
  Vec forward(std::span<const double> input) const;

  /// Batched forward; X is (n x input_dim). Activations are kept in ws for a
  /// following backward_batch. Returns ws.output(), (n x output_dim).
  const Matrix& forward_batch(const Matrix& X, MlpWorkspace& ws) const;

  /// Backprop of sum_i <cotangent_i, output_i> through the pass recorded in
  /// ws. Accumulates into grads when non-null; writes the gradient with
  /// respect to the input rows into input_grad when non-null.
  void backward_batch(const Matrix& cotangent, MlpWorkspace& ws, MlpGrads* grads,
                      Matrix* input_grad) const;

  /// Single-sample convenience: gradient of <cotangent, forward(input)> with
  /// respect to every weight, bias and the input vector.
  void gradients(std::span<const double> input, std::span<const double> cotangent,
                 MlpGrads& grads, Vec* input_grad = nullptr) const;

  MlpGrads make_grads() const;

  /// Flat views over parameters in serialization order (W0, b0, W1, b1, ...).
  std::vector<std::span<double>> parameter_views();
  std::vector<std::span<const double>> parameter_views() const;
  std::size_t parameter_count() const;

  /// Copies parameters from another net of identical shape.
  void copy_parameters_from(const Mlp& other);

  bool same_shape(const Mlp& other) const;

 private:
  std::vector<int> layer_sizes_;
  std::vector<Matrix> weights_;  // weights_[k]: layer_sizes_[k+1] x layer_sizes_[k]
  std::vector<Vec> biases_;
  OutputActivation out_act_ = OutputActivation::identity;
};

std::vector<std::span<const double>> grad_views(const MlpGrads& grads);

}  // namespace quadrl
