#pragma once

// Small dense kernels for the training hot paths. Plain loops with the
// contraction index innermost so the compiler can vectorize.

#include <cstddef>

namespace tug::kernels {

// Y (m x out) = X (m x in) * W^T (W is out x in) + b, rows independent.
inline void linear_forward(const double* X, const double* W, const double* b,
                           double* Y, std::size_t m, std::size_t in,
                           std::size_t out) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* x = X + i * in;
    double* y = Y + i * out;
    for (std::size_t j = 0; j < out; ++j) {
      const double* w = W + j * in;
      double s = b ? b[j] : 0.0;
      for (std::size_t k = 0; k < in; ++k) s += w[k] * x[k];
      y[j] = s;
    }
  }
}

// dW (out x in) += dY^T (m x out) * X (m x in); db (out) += colsum(dY)
// unless db is null (used when the bias grad is accumulated elsewhere).
inline void linear_backward_params(const double* X, const double* dY,
                                   double* dW, double* db, std::size_t m,
                                   std::size_t in, std::size_t out) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* x = X + i * in;
    const double* dy = dY + i * out;
    for (std::size_t j = 0; j < out; ++j) {
      const double g = dy[j];
      if (g == 0.0) continue;
      double* dw = dW + j * in;
      for (std::size_t k = 0; k < in; ++k) dw[k] += g * x[k];
      if (db) db[j] += g;
    }
  }
}

// dX (m x in) = dY (m x out) * W (out x in).
inline void linear_backward_input(const double* W, const double* dY,
                                  double* dX, std::size_t m, std::size_t in,
                                  std::size_t out) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* dy = dY + i * out;
    double* dx = dX + i * in;
    for (std::size_t k = 0; k < in; ++k) dx[k] = 0.0;
    for (std::size_t j = 0; j < out; ++j) {
      const double g = dy[j];
      if (g == 0.0) continue;
      const double* w = W + j * in;
      for (std::size_t k = 0; k < in; ++k) dx[k] += g * w[k];
    }
  }
}

inline void relu_inplace(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

// dZ = dH where H = relu(Z) was stored in `activated`; zero elsewhere.
inline void relu_backward_inplace(const double* activated, double* grad,
                                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (activated[i] <= 0.0) grad[i] = 0.0;
  }
}

}  // namespace tug::kernels
