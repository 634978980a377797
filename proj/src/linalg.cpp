#include "pfb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "pfb/errors.hpp"
#include "pfb/output.hpp"
#include "pfb/sparse_lu.hpp"

namespace pfb {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::at(Index row, Index column) const {
  const auto first = col.begin() + row_ptr[row];
  const auto last = col.begin() + row_ptr[row + 1];
  const auto it = std::lower_bound(first, last, column);
  if (it == last || *it != column) return 0.0;
  return val[it - col.begin()];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (Index r = 0; r < n; ++r) {
    double s = 0.0;
    for (Index p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += val[p] * x[col[p]];
    y[r] = s;
  }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n);
  multiply(x, y);
  return y;
}

double CsrMatrix::norm_inf() const {
  double m = 0.0;
  for (Index r = 0; r < n; ++r) {
    double s = 0.0;
    for (Index p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += std::abs(val[p]);
    m = std::max(m, s);
  }
  return m;
}

bool CsrMatrix::is_canonical() const {
  if (row_ptr.size() != static_cast<std::size_t>(n) + 1 || row_ptr[0] != 0) return false;
  if (col.size() != val.size() || static_cast<std::size_t>(row_ptr[n]) != val.size()) return false;
  for (Index r = 0; r < n; ++r) {
    if (row_ptr[r + 1] < row_ptr[r]) return false;
    for (Index p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
      if (col[p] < 0 || col[p] >= n || val[p] == 0.0) return false;
      if (p > row_ptr[r] && col[p] <= col[p - 1]) return false;
    }
  }
  return true;
}

CsrMatrix compress(const TripletBuffer& buffer, Index n) {
  if (n < 0) throw AssemblyError("negative matrix dimension");
  const auto entries = buffer.entries();
  std::vector<Index> count(static_cast<std::size_t>(n) + 1, 0);
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw AssemblyError("entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                          ") outside a " + std::to_string(n) + "x" + std::to_string(n) +
                          " matrix");
    }
    ++count[t.row + 1];
  }
  for (Index r = 0; r < n; ++r) count[r + 1] += count[r];
  std::vector<std::pair<Index, double>> sorted(entries.size());
  {
    std::vector<Index> next(count.begin(), count.end() - 1);
    for (const Triplet& t : entries) sorted[next[t.row]++] = {t.col, t.value};
  }
  CsrMatrix m;
  m.n = n;
  m.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  m.col.reserve(entries.size());
  m.val.reserve(entries.size());
  for (Index r = 0; r < n; ++r) {
    const auto first = sorted.begin() + count[r];
    const auto last = sorted.begin() + count[r + 1];
    std::sort(first, last);
    for (auto it = first; it != last;) {
      const Index c = it->first;
      double sum = 0.0;
      for (; it != last && it->first == c; ++it) sum += it->second;
      if (sum != 0.0) {
        m.col.push_back(c);
        m.val.push_back(sum);
      }
    }
    m.row_ptr[r + 1] = static_cast<Index>(m.val.size());
  }
  return m;
}

void constrain(SparseSystem& system, std::span<const Index> dofs, std::span<const double> values) {
  if (dofs.size() != values.size()) throw InvalidArgument("constraint size mismatch");
  const Index n = system.size();
  std::vector<char> fixed(n, 0);
  std::vector<double> value(n, 0.0);
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    if (dofs[i] < 0 || dofs[i] >= n) throw InvalidArgument("constrained dof out of range");
    fixed[dofs[i]] = 1;
    value[dofs[i]] = values[i];
  }
  const CsrMatrix& a = system.matrix;
  CsrMatrix out;
  out.n = n;
  out.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  out.col.reserve(a.nnz());
  out.val.reserve(a.nnz());
  for (Index r = 0; r < n; ++r) {
    if (fixed[r]) {
      out.col.push_back(r);
      out.val.push_back(1.0);
      system.rhs[r] = value[r];
    } else {
      for (Index p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
        if (fixed[a.col[p]]) {
          system.rhs[r] -= a.val[p] * value[a.col[p]];
        } else {
          out.col.push_back(a.col[p]);
          out.val.push_back(a.val[p]);
        }
      }
    }
    out.row_ptr[r + 1] = static_cast<Index>(out.val.size());
  }
  system.matrix = std::move(out);
}

double residual_norm(const SparseSystem& system, std::span<const double> x) {
  std::vector<double> r = system.matrix.multiply(x);
  for (Index i = 0; i < system.size(); ++i) r[i] -= system.rhs[i];
  return norm2(r);
}

double backward_error(const SparseSystem& system, std::span<const double> x) {
  std::vector<double> r = system.matrix.multiply(x);
  for (Index i = 0; i < system.size(); ++i) r[i] -= system.rhs[i];
  const double denom = system.matrix.norm_inf() * norm_inf(x) + norm_inf(system.rhs);
  return denom > 0.0 ? norm_inf(r) / denom : norm_inf(r);
}

std::vector<double> solve_direct(const SparseSystem& system) {
  if (system.rhs.size() != static_cast<std::size_t>(system.size())) {
    throw InvalidArgument("right-hand side length does not match matrix");
  }
  return SparseLu(system.matrix).solve(system.rhs);
}

void write_matrix_market(const CsrMatrix& matrix, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.n << ' ' << matrix.n << ' ' << matrix.nnz() << '\n';
  for (Index r = 0; r < matrix.n; ++r) {
    for (Index p = matrix.row_ptr[r]; p < matrix.row_ptr[r + 1]; ++p) {
      out << r + 1 << ' ' << matrix.col[p] + 1 << ' ' << format_double(matrix.val[p]) << '\n';
    }
  }
}

}  // namespace pfb
