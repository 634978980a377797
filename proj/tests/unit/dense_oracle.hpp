#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "pfb/linalg.hpp"

namespace pfb::test {

using Dense = std::vector<std::vector<double>>;

// Gaussian elimination with partial pivoting; the oracle for the sparse solver.
inline std::vector<double> dense_solve(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    }
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

inline CsrMatrix to_csr(const Dense& a) {
  TripletBuffer buf;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[i][j] != 0.0) buf.add(static_cast<Index>(i), static_cast<Index>(j), a[i][j]);
    }
  }
  return compress(buf, static_cast<Index>(a.size()));
}

// Sparse diagonally dominant or saddle-point matrix [[M, B^T], [B, 0]].
inline Dense random_matrix(std::mt19937& rng, int kind) {
  std::uniform_int_distribution<int> size(1, 40);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution sparse(0.15);
  if (kind == 0) {
    const int n = size(rng);
    Dense a(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) {
        if (i != j && sparse(rng)) row += std::abs(a[i][j] = u(rng));
      }
      a[i][i] = (row + 1.0) * (u(rng) < 0 ? -1.0 : 1.0);
    }
    return a;
  }
  const int m = size(rng) + 2;
  const int k = std::uniform_int_distribution<int>(1, m / 2)(rng);
  Dense a(m + k, std::vector<double>(m + k, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < i; ++j) {
      if (sparse(rng)) a[i][j] = a[j][i] = 0.2 * u(rng);
    }
  }
  for (int i = 0; i < m; ++i) {
    double row = 0.0;
    for (int j = 0; j < m; ++j) row += std::abs(a[i][j]);
    a[i][i] = row + 1.0;
  }
  // Full-rank B: a shifted identity block plus random fill.
  for (int r = 0; r < k; ++r) {
    a[m + r][2 * r] = a[2 * r][m + r] = 1.0 + std::abs(u(rng));
    for (int j = 0; j < m; ++j) {
      if (j != 2 * r && sparse(rng)) a[m + r][j] = a[j][m + r] = 0.3 * u(rng);
    }
  }
  return a;
}

}  // namespace pfb::test
