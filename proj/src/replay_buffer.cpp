#include "quadrl/replay_buffer.hpp"

#include <cstring>
#include <stdexcept>

namespace quadrl {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int z_dim, int a_dim)
    : capacity_(capacity), z_dim_(z_dim), a_dim_(a_dim) {
  if (capacity == 0 || z_dim <= 0 || a_dim <= 0)
    throw std::invalid_argument("replay: capacity and dims must be positive");
  z_.assign(capacity * static_cast<std::size_t>(z_dim), 0.0);
  z_next_.assign(capacity * static_cast<std::size_t>(z_dim), 0.0);
  a_.assign(capacity * static_cast<std::size_t>(a_dim), 0.0);
  r_.assign(capacity, 0.0);
  done_.assign(capacity, 0);
}

void ReplayBuffer::push(std::span<const double> z, std::span<const double> a, double r,
                        std::span<const double> z_next, bool done) {
  if (static_cast<int>(z.size()) != z_dim_ || static_cast<int>(z_next.size()) != z_dim_)
    throw std::invalid_argument("replay: encoded-state length mismatch");
  if (static_cast<int>(a.size()) != a_dim_)
    throw std::invalid_argument("replay: action length mismatch");
  for (double v : a)
    if (v < -1.0 || v > 1.0) throw std::invalid_argument("replay: action component outside [-1, 1]");

  std::memcpy(z_.data() + write_ * z_dim_, z.data(), z.size() * sizeof(double));
  std::memcpy(z_next_.data() + write_ * z_dim_, z_next.data(), z_next.size() * sizeof(double));
  std::memcpy(a_.data() + write_ * a_dim_, a.data(), a.size() * sizeof(double));
  r_[write_] = r;
  done_[write_] = done ? 1 : 0;
  write_ = (write_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

void ReplayBuffer::push(const Transition& t) { push(t.z, t.a, t.r, t.z_next, t.done); }

void ReplayBuffer::sample(int n, Rng& rng, TransitionBatch& out) const {
  if (static_cast<std::size_t>(n) > size_)
    throw std::runtime_error("replay: not enough transitions to sample");
  out.z.resize(n, z_dim_);
  out.a.resize(n, a_dim_);
  out.z_next.resize(n, z_dim_);
  out.r.resize(n);
  out.done.resize(n);
  for (int i = 0; i < n; ++i) {
    const std::size_t s = rng.index(size_);
    std::memcpy(out.z.row(i), z_.data() + s * z_dim_, z_dim_ * sizeof(double));
    std::memcpy(out.z_next.row(i), z_next_.data() + s * z_dim_, z_dim_ * sizeof(double));
    std::memcpy(out.a.row(i), a_.data() + s * a_dim_, a_dim_ * sizeof(double));
    out.r[i] = r_[s];
    out.done[i] = done_[s];
  }
}

Transition ReplayBuffer::get(std::size_t slot) const {
  if (slot >= size_) throw std::out_of_range("replay: slot outside filled region");
  Transition t;
  t.z.assign(z_.begin() + slot * z_dim_, z_.begin() + (slot + 1) * z_dim_);
  t.z_next.assign(z_next_.begin() + slot * z_dim_, z_next_.begin() + (slot + 1) * z_dim_);
  t.a.assign(a_.begin() + slot * a_dim_, a_.begin() + (slot + 1) * a_dim_);
  t.r = r_[slot];
  t.done = done_[slot] != 0;
  return t;
}

}  // namespace quadrl
