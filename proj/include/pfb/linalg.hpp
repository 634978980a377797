#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "pfb/mesh.hpp"

namespace pfb {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Unordered (row, col, value) contributions; duplicates sum on compression.
class TripletBuffer {
 public:
  void add(Index row, Index col, double value) { entries_.push_back({row, col, value}); }
  void reserve(std::size_t n) { entries_.reserve(n); }
  std::span<const Triplet> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Triplet> entries_;
};

/// Square matrix in compressed sparse row layout. Canonical form: row pointers
/// monotone, column indices strictly increasing within a row, no stored zeros.
struct CsrMatrix {
  Index n = 0;
  std::vector<Index> row_ptr{0};
  std::vector<Index> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
  /// Stored value or 0.
  double at(Index row, Index column) const;
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  double norm_inf() const;
  bool is_canonical() const;
};

/// Sums duplicates in a canonical order (row, column, value) so the result does
/// not depend on the order of the buffer. Throws AssemblyError for indices
/// outside [0, n).
CsrMatrix compress(const TripletBuffer& buffer, Index n);

struct SparseSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;

  Index size() const { return matrix.n; }
};

/// Imposes x[dofs[i]] = values[i]: each constrained row becomes an identity row
/// and its column is eliminated into the right-hand side, preserving symmetry.
void constrain(SparseSystem& system, std::span<const Index> dofs, std::span<const double> values);

/// ||A x - b||_2.
double residual_norm(const SparseSystem& system, std::span<const double> x);

/// ||A x - b||_inf / (||A||_inf ||x||_inf + ||b||_inf).
double backward_error(const SparseSystem& system, std::span<const double> x);

/// Sparse LU with threshold partial pivoting; see SparseLu for details.
std::vector<double> solve_direct(const SparseSystem& system);

/// MatrixMarket "coordinate real general" dump, 1-based indices.
void write_matrix_market(const CsrMatrix& matrix, std::ostream& out);

double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);

}  // namespace pfb
