#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pfb/linalg.hpp"

namespace pfb {

enum class Ordering {
  natural,  ///< factor columns in their given order
  amd,      ///< approximate minimum degree on the pattern of A + A^T
};

struct LuOptions {
  Ordering ordering = Ordering::amd;
  /// A diagonal candidate is kept when |a_kk| >= threshold * max_i |a_ik|.
  /// 1.0 gives strict partial pivoting.
  double pivot_threshold = 0.1;
  /// Row then column max-norm scaling before factorization.
  bool equilibrate = true;
  /// Pivots below this times ||A||_inf (after scaling) are treated as singular.
  double singular_tolerance = 1e-14;
};

/// Left-looking sparse LU factorization (Gilbert-Peierls) with threshold
/// partial pivoting, P R A C Q = L U. Handles the zero diagonal blocks of
/// saddle-point systems. The factors are reused across solves.
class SparseLu {
 public:
  /// Throws SingularMatrixError when no acceptable pivot exists for a column.
  explicit SparseLu(const CsrMatrix& a, LuOptions options = {});

  std::vector<double> solve(std::span<const double> b) const;
  void solve_in_place(std::span<double> x) const;

  Index size() const { return n_; }
  /// Stored entries in L and U.
  std::size_t factor_nnz() const { return l_val_.size() + u_val_.size(); }

 private:
  Index n_ = 0;
  std::vector<double> row_scale_, col_scale_;
  std::vector<Index> q_;     // column order: q_[k] = original column of pivot k
  std::vector<Index> prow_;  // prow_[k] = original row of pivot k
  std::vector<Index> l_ptr_, l_idx_, u_ptr_, u_idx_;
  std::vector<double> l_val_, u_val_;
};

}  // namespace pfb
