#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace pcanon {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;
using ZMat = std::vector<std::vector<mpz_class>>;

size_t rank_q(QMat m);
mpq_class determinant_q(QMat m);
std::optional<QMat> inverse_q(QMat m);
QMat multiply_q(const QMat& a, const QMat& b);
QMat transpose_q(const QMat& a);
// Basis of {x : m x = 0}.
std::vector<QVec> nullspace_q(QMat m, size_t ncols);
// Rank over F_p of an integer matrix; p = 0 means rank over Q.
size_t rank_mod_p(const ZMat& m, unsigned long p);

// Sparse row: (column, value) pairs sorted by column, no zeros.
using SparseRow = std::vector<std::pair<size_t, mpq_class>>;

// Incremental row echelon form over Q for large sparse systems.
class SparseEchelon {
 public:
  explicit SparseEchelon(size_t ncols) : ncols_(ncols) {}

  size_t columns() const { return ncols_; }
  size_t rank() const { return pivots_.size(); }
  // Reduces and stores the row; returns false when it was dependent.
  bool add(SparseRow row);
  // Reduces a row against the stored pivots without storing it.
  SparseRow reduce(SparseRow row) const;
  // Basis of the common kernel of all added rows.
  std::vector<SparseRow> nullspace() const;
  std::vector<size_t> pivot_columns() const;

 private:
  size_t ncols_;
  std::map<size_t, SparseRow> pivots_;  // pivot column -> row with leading 1
};

}  // namespace pcanon

namespace pcanon {

struct SparseKernel {
  std::vector<SparseRow> basis;     // reduced: basis[i] has a 1 at free_columns[i]
  std::vector<size_t> free_columns; // and 0 at every other free column
};

// Kernel of a sparse rational system. Elimination runs modulo 61-bit
// primes with rational reconstruction; the result is verified exactly over
// Q and falls back to exact elimination if no prime succeeds.
SparseKernel sparse_kernel(const std::vector<SparseRow>& rows, size_t ncols);

}  // namespace pcanon
