#pragma once

#include <cmath>
#include <cstddef>

namespace adv {

// Shared by the tape forward pass and the no-tape eval path. Both must run
// these exact loops so that a value computed at collection time matches the
// tape recomputation bit for bit.
inline void affine_forward(const double* x, const double* w, const double* b,
                           double* y, std::size_t B, std::size_t I,
                           std::size_t O) {
  for (std::size_t r = 0; r < B; ++r)
    for (std::size_t o = 0; o < O; ++o) {
      double acc = b[o];
      const double* xr = x + r * I;
      const double* wr = w + o * I;
      for (std::size_t i = 0; i < I; ++i) acc += xr[i] * wr[i];
      y[r * O + o] = acc;
    }
}

inline double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

inline double stable_softplus(double x) {
  return std::log1p(std::exp(-std::fabs(x))) + (x > 0.0 ? x : 0.0);
}

// In-place row-wise log-softmax on a [B,N] matrix.
inline void log_softmax_rows(double* m, std::size_t B, std::size_t N) {
  for (std::size_t r = 0; r < B; ++r) {
    double* row = m + r * N;
    double mx = row[0];
    for (std::size_t j = 1; j < N; ++j) mx = row[j] > mx ? row[j] : mx;
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) acc += std::exp(row[j] - mx);
    double lse = mx + std::log(acc);
    for (std::size_t j = 0; j < N; ++j) row[j] -= lse;
  }
}

}  // namespace adv
