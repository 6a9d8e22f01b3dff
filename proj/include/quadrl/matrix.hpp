#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace quadrl {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles. Deliberately minimal: the network code
/// needs contiguous rows and nothing else.
struct Matrix {
  int rows = 0;
  int cols = 0;
  Vec data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  void resize(int r, int c) {
    rows = r;
    cols = c;
    data.assign(static_cast<std::size_t>(r) * c, 0.0);
  }

  double* row(int i) { return data.data() + static_cast<std::size_t>(i) * cols; }
  const double* row(int i) const { return data.data() + static_cast<std::size_t>(i) * cols; }

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  std::size_t size() const { return data.size(); }
  void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

inline double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

/// y += alpha * x
inline void axpy(double alpha, const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

/// Y = X * W^T + b, with X (n x in), W (out x in), Y (n x out).
inline void linear_forward(const Matrix& X, const Matrix& W, const Vec& b, Matrix& Y) {
  assert(X.cols == W.cols);
  Y.rows = X.rows;
  Y.cols = W.rows;
  Y.data.resize(static_cast<std::size_t>(Y.rows) * Y.cols);
  for (int i = 0; i < X.rows; ++i) {
    const double* xi = X.row(i);
    double* yi = Y.row(i);
    for (int o = 0; o < W.rows; ++o) yi[o] = b[o] + dot(xi, W.row(o), X.cols);
  }
}

/// dW += G^T * X and db += column sums of G, with G (n x out), X (n x in).
inline void linear_param_grads(const Matrix& G, const Matrix& X, Matrix& dW, Vec& db) {
  assert(G.rows == X.rows && dW.rows == G.cols && dW.cols == X.cols);
  for (int i = 0; i < G.rows; ++i) {
    const double* gi = G.row(i);
    const double* xi = X.row(i);
    for (int o = 0; o < G.cols; ++o) {
      const double g = gi[o];
      if (g != 0.0) axpy(g, xi, dW.row(o), X.cols);
      db[o] += g;
    }
  }
}

/// dX = G * W, with G (n x out), W (out x in), dX (n x in).
inline void linear_input_grad(const Matrix& G, const Matrix& W, Matrix& dX) {
  assert(G.cols == W.rows);
  dX.rows = G.rows;
  dX.cols = W.cols;
  dX.data.assign(static_cast<std::size_t>(dX.rows) * dX.cols, 0.0);
  for (int i = 0; i < G.rows; ++i) {
    const double* gi = G.row(i);
    double* di = dX.row(i);
    for (int o = 0; o < W.rows; ++o) {
      const double g = gi[o];
      if (g != 0.0) axpy(g, W.row(o), di, W.cols);
    }
  }
}

}  // namespace quadrl
