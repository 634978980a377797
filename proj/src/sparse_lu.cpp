#include "pfb/sparse_lu.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pfb/errors.hpp"

namespace pfb {

namespace {

struct CscMatrix {
  Index n = 0;
  std::vector<Index> ptr, idx;
  std::vector<double> val;
};

CscMatrix to_csc(const CsrMatrix& a) {
  CscMatrix c;
  c.n = a.n;
  c.ptr.assign(static_cast<std::size_t>(a.n) + 1, 0);
  for (Index col : a.col) ++c.ptr[col + 1];
  for (Index j = 0; j < a.n; ++j) c.ptr[j + 1] += c.ptr[j];
  c.idx.resize(a.nnz());
  c.val.resize(a.nnz());
  std::vector<Index> next(c.ptr.begin(), c.ptr.end() - 1);
  for (Index r = 0; r < a.n; ++r) {
    for (Index p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      const Index dst = next[a.col[p]]++;
      c.idx[dst] = r;
      c.val[dst] = a.val[p];
    }
  }
  return c;
}

// Maximum transversal: match[j] is a row with a structural nonzero in column
// j, all rows distinct. Diagonal entries are taken first, so matrices with a
// full diagonal keep it. Saddle-point systems get their zero diagonal blocks
// paired with off-diagonal entries, which lets the diagonal-preferring pivot
// rule follow the fill-reducing order.
std::vector<Index> max_transversal(const CscMatrix& a) {
  const Index n = a.n;
  std::vector<Index> match(n, -1), row_match(n, -1);
  for (Index j = 0; j < n; ++j) {
    for (Index p = a.ptr[j]; p < a.ptr[j + 1]; ++p) {
      if (a.idx[p] == j) {
        match[j] = j;
        row_match[j] = j;
        break;
      }
    }
  }
  std::vector<Index> visited(n, -1), cols(n), pos(n), via(n), look(n);
  for (Index j = 0; j < n; ++j) look[j] = a.ptr[j];
  for (Index start = 0; start < n; ++start) {
    if (match[start] >= 0) continue;
    Index depth = 0;
    cols[0] = start;
    visited[start] = start;
    pos[0] = a.ptr[start];
    Index free_row = -1;
    while (depth >= 0 && free_row < 0) {
      const Index j = cols[depth];
      // Cheap lookahead for an unmatched row of column j.
      for (; look[j] < a.ptr[j + 1]; ++look[j]) {
        if (row_match[a.idx[look[j]]] < 0) {
          free_row = a.idx[look[j]];
          break;
        }
      }
      if (free_row >= 0) break;
      bool pushed = false;
      for (; pos[depth] < a.ptr[j + 1]; ++pos[depth]) {
        const Index i = a.idx[pos[depth]];
        const Index next = row_match[i];
        if (visited[next] == start) continue;
        visited[next] = start;
        via[depth] = i;
        ++pos[depth];
        cols[++depth] = next;
        pos[depth] = a.ptr[next];
        pushed = true;
        break;
      }
      if (!pushed) --depth;
    }
    if (free_row < 0) throw SingularMatrixError("matrix is structurally singular");
    match[cols[depth]] = free_row;
    row_match[free_row] = cols[depth];
    for (Index d = depth - 1; d >= 0; --d) {
      match[cols[d]] = via[d];
      row_match[via[d]] = cols[d];
    }
  }
  return match;
}

// Fill-reducing column order from AMD on the pattern of B + B^T, where B is A
// with rows permuted so that B(j, j) = A(match[j], j).
std::vector<Index> amd_order(const CscMatrix& a, const std::vector<Index>& match) {
  std::vector<Index> row_to_col(a.n);
  for (Index j = 0; j < a.n; ++j) row_to_col[match[j]] = j;
  using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, Index>;
  SpMat m(a.n, a.n);
  std::vector<Eigen::Triplet<double, Index>> entries;
  entries.reserve(a.val.size());
  for (Index j = 0; j < a.n; ++j) {
    for (Index p = a.ptr[j]; p < a.ptr[j + 1]; ++p) {
      entries.emplace_back(row_to_col[a.idx[p]], j, 1.0);
    }
  }
  m.setFromTriplets(entries.begin(), entries.end());
  Eigen::AMDOrdering<Index> amd;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, Index> perm;
  amd(m, perm);
  return {perm.indices().data(), perm.indices().data() + a.n};
}

}  // namespace

SparseLu::SparseLu(const CsrMatrix& a, LuOptions options) : n_(a.n) {
  CscMatrix m = to_csc(a);
  const Index n = n_;

  row_scale_.assign(n, 1.0);
  col_scale_.assign(n, 1.0);
  if (options.equilibrate) {
    std::vector<double> rmax(n, 0.0);
    for (std::size_t p = 0; p < m.val.size(); ++p) {
      rmax[m.idx[p]] = std::max(rmax[m.idx[p]], std::abs(m.val[p]));
    }
    for (Index i = 0; i < n; ++i) {
      if (rmax[i] > 0.0) row_scale_[i] = 1.0 / rmax[i];
    }
    for (Index j = 0; j < n; ++j) {
      double cmax = 0.0;
      for (Index p = m.ptr[j]; p < m.ptr[j + 1]; ++p) {
        m.val[p] *= row_scale_[m.idx[p]];
        cmax = std::max(cmax, std::abs(m.val[p]));
      }
      if (cmax > 0.0) {
        col_scale_[j] = 1.0 / cmax;
        for (Index p = m.ptr[j]; p < m.ptr[j + 1]; ++p) m.val[p] *= col_scale_[j];
      }
    }
  }

  double anorm = 0.0;  // ||A||_inf of the scaled matrix
  {
    std::vector<double> rowsum(n, 0.0);
    for (std::size_t p = 0; p < m.val.size(); ++p) rowsum[m.idx[p]] += std::abs(m.val[p]);
    for (double s : rowsum) anorm = std::max(anorm, s);
  }
  const double tiny = options.singular_tolerance * anorm;

  const std::vector<Index> match = max_transversal(m);
  if (options.ordering == Ordering::amd && n > 0) {
    q_ = amd_order(m, match);
  } else {
    q_.resize(n);
    std::iota(q_.begin(), q_.end(), 0);
  }

  // pinv[i] = pivot step at which original row i was chosen, or -1.
  std::vector<Index> pinv(n, -1);
  std::vector<double> x(n, 0.0);
  std::vector<Index> xi(2 * static_cast<std::size_t>(n));
  std::vector<Index> mark(n, -1);
  l_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  u_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  l_idx_.reserve(4 * m.val.size() + n);
  l_val_.reserve(4 * m.val.size() + n);
  u_idx_.reserve(4 * m.val.size() + n);
  u_val_.reserve(4 * m.val.size() + n);

  for (Index k = 0; k < n; ++k) {
    l_ptr_[k] = static_cast<Index>(l_val_.size());
    u_ptr_[k] = static_cast<Index>(u_val_.size());
    const Index col = q_[k];

    // Nonzero pattern of L \ A(:, col): depth-first search from each entry of
    // A(:, col) through the columns of L computed so far. The reach is left in
    // xi[top..n) in topological order.
    Index top = n;
    Index* stack = xi.data() + n;
    for (Index p = m.ptr[col]; p < m.ptr[col + 1]; ++p) {
      const Index start = m.idx[p];
      if (mark[start] == k) continue;
      Index head = 0;
      xi[0] = start;
      while (head >= 0) {
        const Index j = xi[head];
        const Index jcol = pinv[j];
        if (mark[j] != k) {
          mark[j] = k;
          stack[head] = jcol < 0 ? 0 : l_ptr_[jcol] + 1;  // skip the unit diagonal
        }
        bool done = true;
        const Index end = jcol < 0 ? 0 : l_ptr_[jcol + 1];
        for (Index q = stack[head]; q < end; ++q) {
          const Index i = l_idx_[q];
          if (mark[i] == k) continue;
          stack[head] = q + 1;
          xi[++head] = i;
          done = false;
          break;
        }
        if (done) {
          --head;
          xi[--top] = j;
        }
      }
    }

    // Numeric sparse triangular solve.
    for (Index p = m.ptr[col]; p < m.ptr[col + 1]; ++p) x[m.idx[p]] = m.val[p];
    for (Index px = top; px < n; ++px) {
      const Index j = xi[px];
      const Index jcol = pinv[j];
      if (jcol < 0) continue;
      const double xj = x[j];
      for (Index q = l_ptr_[jcol] + 1; q < l_ptr_[jcol + 1]; ++q) x[l_idx_[q]] -= l_val_[q] * xj;
    }

    // Pivot selection, preferring the matched row of the column.
    Index ipiv = -1;
    double amax = -1.0;
    for (Index px = top; px < n; ++px) {
      const Index i = xi[px];
      if (pinv[i] < 0) {
        if (std::abs(x[i]) > amax) {
          amax = std::abs(x[i]);
          ipiv = i;
        }
      } else {
        u_idx_.push_back(pinv[i]);
        u_val_.push_back(x[i]);
      }
    }
    if (ipiv < 0 || amax <= tiny) {
      throw SingularMatrixError("matrix is numerically singular at pivot " + std::to_string(k) +
                                " of " + std::to_string(n));
    }
    const Index preferred = match[col];
    if (pinv[preferred] < 0 && mark[preferred] == k &&
        std::abs(x[preferred]) >= amax * options.pivot_threshold) {
      ipiv = preferred;
    }
    const double pivot = x[ipiv];
    u_idx_.push_back(k);
    u_val_.push_back(pivot);
    pinv[ipiv] = k;
    l_idx_.push_back(ipiv);
    l_val_.push_back(1.0);
    for (Index px = top; px < n; ++px) {
      const Index i = xi[px];
      if (pinv[i] < 0) {
        const double lv = x[i] / pivot;
        if (lv != 0.0) {
          l_idx_.push_back(i);
          l_val_.push_back(lv);
        }
      }
      x[i] = 0.0;
    }
  }
  l_ptr_[n] = static_cast<Index>(l_val_.size());
  u_ptr_[n] = static_cast<Index>(u_val_.size());
  for (Index& i : l_idx_) i = pinv[i];
  prow_.resize(n);
  for (Index i = 0; i < n; ++i) prow_[pinv[i]] = i;
}

void SparseLu::solve_in_place(std::span<double> b) const {
  if (b.size() != static_cast<std::size_t>(n_)) {
    throw InvalidArgument("right-hand side length does not match factorization");
  }
  std::vector<double> y(n_);
  for (Index k = 0; k < n_; ++k) y[k] = b[prow_[k]] * row_scale_[prow_[k]];
  for (Index j = 0; j < n_; ++j) {
    const double yj = y[j];
    if (yj == 0.0) continue;
    for (Index p = l_ptr_[j] + 1; p < l_ptr_[j + 1]; ++p) y[l_idx_[p]] -= l_val_[p] * yj;
  }
  for (Index j = n_ - 1; j >= 0; --j) {
    y[j] /= u_val_[u_ptr_[j + 1] - 1];
    const double yj = y[j];
    if (yj == 0.0) continue;
    for (Index p = u_ptr_[j]; p < u_ptr_[j + 1] - 1; ++p) y[u_idx_[p]] -= u_val_[p] * yj;
  }
  for (Index k = 0; k < n_; ++k) b[q_[k]] = y[k] * col_scale_[q_[k]];
}

std::vector<double> SparseLu::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

}  // namespace pfb
