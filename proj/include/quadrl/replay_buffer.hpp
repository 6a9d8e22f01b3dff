#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quadrl/matrix.hpp"
#include "quadrl/rng.hpp"

namespace quadrl {

/// One GRU-encoded transition: z is hidden-state-plus-observation, z_next
/// its successor.
struct Transition {
  Vec z;
  Vec a;
  double r = 0.0;
  Vec z_next;
  bool done = false;
};

/// Sampled minibatch in matrix form, reused across updates.
struct TransitionBatch {
  Matrix z;       // n x z_dim
  Matrix a;       // n x a_dim
  Vec r;          // n
  Matrix z_next;  // n x z_dim
  std::vector<std::uint8_t> done;

  int size() const { return z.rows; }
};

/// Fixed-capacity ring of transitions, flat storage, no allocation after
/// construction. Sampling is uniform with replacement over the filled region.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int z_dim, int a_dim);

  /// Validates shapes and that action components lie in [-1, 1]; throws
  /// std::invalid_argument otherwise. At capacity the oldest slot is
  /// overwritten.
  void push(std::span<const double> z, std::span<const double> a, double r,
            std::span<const double> z_next, bool done);
  void push(const Transition& t);

  /// Fills out with n draws. Throws std::runtime_error when size() < n.
  void sample(int n, Rng& rng, TransitionBatch& out) const;

  Transition get(std::size_t slot) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t write_index() const { return write_; }
  int z_dim() const { return z_dim_; }
  int a_dim() const { return a_dim_; }

  /// Address of the backing store; lets tests confirm no reallocation.
  const double* storage_address() const { return z_.data(); }

 private:
  std::size_t capacity_;
  int z_dim_;
  int a_dim_;
  std::size_t write_ = 0;
  std::size_t size_ = 0;
  Vec z_, a_, z_next_;
  Vec r_;
  std::vector<std::uint8_t> done_;
};

}  // namespace quadrl
