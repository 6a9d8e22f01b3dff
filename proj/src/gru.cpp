#include "quadrl/gru.hpp"

#include <cmath>
#include <stdexcept>

#include "quadrl/rng.hpp"

namespace quadrl {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void fill_uniform(Matrix& m, Rng& rng, double bound) {
  for (double& v : m.data) v = rng.uniform(-bound, bound);
}

}  // namespace

GruEncoder::GruEncoder(int input_dim, int hidden_dim, std::uint64_t seed)
    : input_dim_(input_dim), hidden_dim_(hidden_dim), seed_(seed) {
  if (input_dim <= 0 || hidden_dim <= 0)
    throw std::invalid_argument("gru: dimensions must be positive");
  Rng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  auto init_gate = [&](Matrix& win, Matrix& wrec, Vec& b) {
    win.resize(hidden_dim, input_dim);
    wrec.resize(hidden_dim, hidden_dim);
    b.assign(hidden_dim, 0.0);
    fill_uniform(win, rng, bound);
    fill_uniform(wrec, rng, bound);
    for (double& v : b) v = rng.uniform(-bound, bound);
  };
  init_gate(w_update_in_, w_update_rec_, b_update_);
  init_gate(w_reset_in_, w_reset_rec_, b_reset_);
  init_gate(w_cand_in_, w_cand_rec_, b_cand_);
  hidden_.assign(hidden_dim, 0.0);
  gate_update_.resize(hidden_dim);
  gate_reset_.resize(hidden_dim);
  candidate_.resize(hidden_dim);
}

GruEncoder GruEncoder::zeros(int input_dim, int hidden_dim) {
  GruEncoder enc(input_dim, hidden_dim, 0);
  enc.seeded_ = false;
  for (Matrix* m : {&enc.w_update_in_, &enc.w_update_rec_, &enc.w_reset_in_, &enc.w_reset_rec_,
                    &enc.w_cand_in_, &enc.w_cand_rec_})
    m->fill(0.0);
  for (Vec* b : {&enc.b_update_, &enc.b_reset_, &enc.b_cand_})
    std::fill(b->begin(), b->end(), 0.0);
  return enc;
}

const Vec& GruEncoder::step(std::span<const double> obs) {
  if (static_cast<int>(obs.size()) != input_dim_)
    throw std::invalid_argument("gru: observation length does not match input_dim");
  const int h = hidden_dim_;
  for (int i = 0; i < h; ++i) {
    gate_update_[i] = sigmoid(b_update_[i] + dot(w_update_in_.row(i), obs.data(), input_dim_) +
                              dot(w_update_rec_.row(i), hidden_.data(), h));
    gate_reset_[i] = sigmoid(b_reset_[i] + dot(w_reset_in_.row(i), obs.data(), input_dim_) +
                             dot(w_reset_rec_.row(i), hidden_.data(), h));
  }
  for (int i = 0; i < h; ++i) {
    double rec = 0.0;
    const double* u = w_cand_rec_.row(i);
    for (int j = 0; j < h; ++j) rec += u[j] * gate_reset_[j] * hidden_[j];
    candidate_[i] = std::tanh(b_cand_[i] + dot(w_cand_in_.row(i), obs.data(), input_dim_) + rec);
  }
  for (int i = 0; i < h; ++i)
    hidden_[i] = (1.0 - gate_update_[i]) * hidden_[i] + gate_update_[i] * candidate_[i];
  return hidden_;
}

Vec GruEncoder::encode(std::span<const Vec> sequence) {
  reset();
  for (const Vec& obs : sequence) step(obs);
  return hidden_;
}

std::vector<const Vec*> GruEncoder::weight_arrays() const {
  return {&w_update_in_.data, &w_update_rec_.data, &b_update_,
          &w_reset_in_.data,  &w_reset_rec_.data,  &b_reset_,
          &w_cand_in_.data,   &w_cand_rec_.data,   &b_cand_};
}

}  // namespace quadrl
