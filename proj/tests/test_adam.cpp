#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "quadrl/adam.hpp"
#include "quadrl/rng.hpp"

using namespace quadrl;

namespace {

AdamState fresh_state(std::size_t n) {
  AdamState st;
  st.first_moment.push_back(Vec(n, 0.0));
  st.second_moment.push_back(Vec(n, 0.0));
  return st;
}

void step_one(Vec& params, const Vec& grads, AdamState& st, const AdamConfig& cfg) {
  std::span<double> p(params);
  std::span<const double> g(grads);
  adam_step(std::span<const std::span<double>>(&p, 1),
            std::span<const std::span<const double>>(&g, 1), st, cfg);
}

}  // namespace

TEST_CASE("adam with zero gradient leaves parameters unchanged") {
  Vec params{1.0, -2.0, 0.5};
  AdamState st = fresh_state(3);
  step_one(params, Vec{0.0, 0.0, 0.0}, st, AdamConfig{});
  CHECK(params == Vec{1.0, -2.0, 0.5});
  CHECK(st.step_count == 1);
}

TEST_CASE("adam first step moves by about learning_rate for unit gradient") {
  // Bias correction cancels on step one: delta = lr * g / (|g| + eps).
  Vec params{0.0};
  AdamState st = fresh_state(1);
  AdamConfig cfg;
  cfg.learning_rate = 0.1;
  step_one(params, Vec{1.0}, st, cfg);
  CHECK(params[0] == doctest::Approx(-0.1).epsilon(1e-6));
}

TEST_CASE("adam converges on a convex bowl") {
  // f(w) = w^2, df/dw = 2w, 100 steps from w = 1 at lr = 0.05.
  Vec w{1.0};
  AdamState st = fresh_state(1);
  AdamConfig cfg;
  cfg.learning_rate = 0.05;
  for (int i = 0; i < 100; ++i) step_one(w, Vec{2.0 * w[0]}, st, cfg);
  CHECK(std::abs(w[0]) < 0.1);
  CHECK(st.step_count == 100);
}

TEST_CASE("adam rejects shape mismatches") {
  Vec params{1.0, 2.0};
  AdamState st = fresh_state(3);
  AdamConfig cfg;
  std::span<double> p(params);
  Vec grads{0.0, 0.0};
  std::span<const double> g(grads);
  CHECK_THROWS_AS(adam_step(std::span<const std::span<double>>(&p, 1),
                            std::span<const std::span<const double>>(&g, 1), st, cfg),
                  std::invalid_argument);
}

TEST_CASE("adam second moments stay non-negative") {
  Rng rng(3);
  Vec params(16, 0.0);
  AdamState st = fresh_state(16);
  AdamConfig cfg;
  for (int step = 0; step < 50; ++step) {
    Vec grads(16);
    for (double& g : grads) g = rng.uniform(-3.0, 3.0);
    step_one(params, grads, st, cfg);
    for (double v : st.second_moment[0]) CHECK(v >= 0.0);
  }
}
