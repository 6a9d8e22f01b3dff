#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quadrl/matrix.hpp"

namespace quadrl {

/// Fixed-weight gated recurrent unit used as an observation-sequence encoder.
/// The weights are drawn once from a seeded uniform distribution and never
/// trained; only the hidden vector changes.
///
/// Per step, with x the observation and h the previous hidden:
///   z  = sigmoid(Wz x + Uz h + bz)
///   r  = sigmoid(Wr x + Ur h + br)
///   ht = tanh(Wh x + Uh (r . h) + bh)
///   h' = (1 - z) . h + z . ht
class GruEncoder {
 public:
  /// Weights uniform in [-1/sqrt(hidden_dim), +1/sqrt(hidden_dim)], drawn in
  /// a fixed order (z, r, candidate; input matrix, recurrent matrix, bias)
  /// from the given seed. Hidden starts at zero.
  GruEncoder(int input_dim, int hidden_dim, std::uint64_t seed);

  /// All gate weights and biases zero (h' = 0.5 h per step). Test fixture.
  static GruEncoder zeros(int input_dim, int hidden_dim);

  int input_dim() const { return input_dim_; }
  int hidden_dim() const { return hidden_dim_; }
  std::uint64_t seed() const { return seed_; }
  bool seeded() const { return seeded_; }

  void reset() { std::fill(hidden_.begin(), hidden_.end(), 0.0); }
  const Vec& hidden() const { return hidden_; }

  /// One unroll; updates and returns the hidden vector.
  const Vec& step(std::span<const double> obs);

  /// Resets the hidden vector, folds step over the sequence, returns the
  /// final hidden (zero vector for an empty sequence).
  Vec encode(std::span<const Vec> sequence);

  /// Raw weight bytes in a fixed order; used by checkpointing and the
  /// immutability checks.
  std::vector<const Vec*> weight_arrays() const;

 private:
  int input_dim_ = 0;
  int hidden_dim_ = 0;
  std::uint64_t seed_ = 0;
  bool seeded_ = true;
  Matrix w_update_in_, w_update_rec_;
  Matrix w_reset_in_, w_reset_rec_;
  Matrix w_cand_in_, w_cand_rec_;
  Vec b_update_, b_reset_, b_cand_;
  Vec hidden_;

  // step() scratch
  Vec gate_update_, gate_reset_, candidate_;
};

}  // namespace quadrl
