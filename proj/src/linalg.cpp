#include "pcanon/linalg.hpp"

#include <algorithm>
#include <functional>

#include "pcanon/errors.hpp"

namespace pcanon {

namespace {

// In-place reduction to row echelon form; returns pivot columns.
std::vector<size_t> echelon(QMat& m, size_t ncols) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < ncols && r < m.size(); ++c) {
    size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    mpq_class inv = 1 / m[r][c];
    for (size_t j = c; j < ncols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      mpq_class f = m[i][c];
      for (size_t j = c; j < ncols; ++j)
        if (m[r][j] != 0) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// a += f * b on sparse rows.
SparseRow axpy(const SparseRow& a, const mpq_class& f, const SparseRow& b) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, f * b[j].second);
      ++j;
    } else {
      mpq_class v = a[i].second + f * b[j].second;
      if (v != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

size_t rank_q(QMat m) {
  if (m.empty()) return 0;
  return echelon(m, m[0].size()).size();
}

mpq_class determinant_q(QMat m) {
  size_t n = m.size();
  mpq_class det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      mpq_class f = m[i][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

std::optional<QMat> inverse_q(QMat m) {
  size_t n = m.size();
  for (size_t i = 0; i < n; ++i) {
    m[i].resize(2 * n, 0);
    m[i][n + i] = 1;
  }
  auto piv = echelon(m, 2 * n);
  if (piv.size() < n || piv[n - 1] >= n) return std::nullopt;
  QMat inv(n, QVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
  return inv;
}

QMat multiply_q(const QMat& a, const QMat& b) {
  if (a.empty()) return {};
  size_t inner = b.size(), cols = b.empty() ? 0 : b[0].size();
  QMat c(a.size(), QVec(cols, 0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

QMat transpose_q(const QMat& a) {
  if (a.empty()) return {};
  QMat t(a[0].size(), QVec(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

std::vector<QVec> nullspace_q(QMat m, size_t ncols) {
  auto piv = echelon(m, ncols);
  std::vector<bool> is_pivot(ncols, false);
  for (size_t c : piv) is_pivot[c] = true;
  std::vector<QVec> basis;
  for (size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    QVec x(ncols, 0);
    x[f] = 1;
    for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -m[r][f];
    basis.push_back(std::move(x));
  }
  return basis;
}

size_t rank_mod_p(const ZMat& m, unsigned long p) {
  if (m.empty()) return 0;
  size_t cols = m[0].size();
  if (p == 0) {
    QMat q(m.size(), QVec(cols));
    for (size_t i = 0; i < m.size(); ++i)
      for (size_t j = 0; j < cols; ++j) q[i][j] = m[i][j];
    return rank_q(std::move(q));
  }
  std::vector<std::vector<unsigned long>> a(m.size(), std::vector<unsigned long>(cols));
  mpz_class r;
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < cols; ++j) {
      mpz_fdiv_r_ui(r.get_mpz_t(), m[i][j].get_mpz_t(), p);
      a[i][j] = r.get_ui();
    }
  auto inv = [p](unsigned long x) {
    // Fermat inverse; p is prime.
    unsigned long long res = 1, b = x, e = p - 2;
    while (e) {
      if (e & 1) res = res * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return static_cast<unsigned long>(res);
  };
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < a.size(); ++c) {
    size_t piv = rank;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    unsigned long iv = inv(a[rank][c]);
    for (size_t j = c; j < cols; ++j) a[rank][j] = static_cast<unsigned long long>(a[rank][j]) * iv % p;
    for (size_t i = rank + 1; i < a.size(); ++i) {
      unsigned long f = a[i][c];
      if (f == 0) continue;
      for (size_t j = c; j < cols; ++j)
        a[i][j] = (a[i][j] + static_cast<unsigned long long>(p - f) * a[rank][j]) % p;
    }
    ++rank;
  }
  return rank;
}

SparseRow SparseEchelon::reduce(SparseRow row) const {
  SparseRow done;
  // Eliminate pivot columns from the front; keep free entries aside.
  while (!row.empty()) {
    auto it = pivots_.find(row.front().first);
    if (it == pivots_.end()) {
      done.push_back(std::move(row.front()));
      row.erase(row.begin());
      // Remaining entries might still hit pivots; continue scanning.
      continue;
    }
    mpq_class f = -row.front().second;
    row = axpy(row, f, it->second);
  }
  return done;
}

bool SparseEchelon::add(SparseRow row) {
  for (const auto& [c, v] : row)
    if (c >= ncols_) throw InconsistencyError("sparse row column out of range");
  // Only the leading entry needs to avoid existing pivots.
  while (!row.empty()) {
    auto it = pivots_.find(row.front().first);
    if (it == pivots_.end()) break;
    mpq_class f = -row.front().second;
    row = axpy(row, f, it->second);
  }
  if (row.empty()) return false;
  mpq_class inv = 1 / row.front().second;
  for (auto& [c, v] : row) v *= inv;
  size_t c = row.front().first;
  pivots_.emplace(c, std::move(row));
  return true;
}

std::vector<size_t> SparseEchelon::pivot_columns() const {
  std::vector<size_t> out;
  for (const auto& [c, r] : pivots_) out.push_back(c);
  return out;
}

std::vector<SparseRow> SparseEchelon::nullspace() const {
  // Back substitution: fully reduce pivot rows, highest pivot first.
  std::map<size_t, SparseRow> reduced;
  for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
    SparseRow row = it->second;
    SparseRow out;
    out.push_back(row.front());
    SparseRow tail(row.begin() + 1, row.end());
    while (!tail.empty()) {
      auto r = reduced.find(tail.front().first);
      if (r == reduced.end()) {
        out.push_back(std::move(tail.front()));
        tail.erase(tail.begin());
        continue;
      }
      mpq_class f = -tail.front().second;
      SparseRow rest(r->second.begin() + 1, r->second.end());
      tail.erase(tail.begin());
      tail = axpy(tail, f, rest);
    }
    reduced.emplace(it->first, std::move(out));
  }
  // Each free column gives a kernel vector.
  std::map<size_t, SparseRow> by_free;
  std::vector<bool> is_pivot(ncols_, false);
  for (const auto& [c, r] : pivots_) is_pivot[c] = true;
  for (size_t f = 0; f < ncols_; ++f)
    if (!is_pivot[f]) by_free[f].emplace_back(f, 1);
  for (const auto& [c, row] : reduced)
    for (size_t k = 1; k < row.size(); ++k) by_free[row[k].first].emplace_back(c, -row[k].second);
  std::vector<SparseRow> basis;
  for (auto& [f, v] : by_free) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace pcanon

namespace pcanon {

namespace {

using u64 = unsigned long long;
using u128 = unsigned __int128;

struct ModRow {
  std::vector<std::pair<size_t, u64>> e;
};

u64 mul_mod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 pow_mod(u64 b, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mul_mod(r, b, p);
    b = mul_mod(b, b, p);
    e >>= 1;
  }
  return r;
}

u64 inv_mod(u64 a, u64 p) { return pow_mod(a, p - 2, p); }

std::optional<u64> to_mod(const mpq_class& x, u64 p) {
  mpz_class m = static_cast<unsigned long>(p), num = x.get_num(), den = x.get_den(), r;
  mpz_fdiv_r(num.get_mpz_t(), num.get_mpz_t(), m.get_mpz_t());
  mpz_fdiv_r(den.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  if (den == 0) return std::nullopt;
  u64 n = num.get_ui(), d = den.get_ui();
  return mul_mod(n, inv_mod(d, p), p);
}

// a - f * b over F_p.
std::vector<std::pair<size_t, u64>> axpy_mod(const std::vector<std::pair<size_t, u64>>& a, u64 f,
                                             const std::vector<std::pair<size_t, u64>>& b, u64 p) {
  std::vector<std::pair<size_t, u64>> out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  u64 nf = (p - f) % p;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, mul_mod(nf, b[j].second, p));
      ++j;
    } else {
      u64 v = (a[i].second + mul_mod(nf, b[j].second, p)) % p;
      if (v) out.emplace_back(a[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

// Rational with |num|, den <= sqrt(p / 2) congruent to x, if any.
std::optional<mpq_class> reconstruct(u64 x, u64 p) {
  mpz_class r0 = static_cast<unsigned long>(p), r1 = static_cast<unsigned long>(x), t0 = 0, t1 = 1;
  mpz_class bound = sqrt(mpz_class(static_cast<unsigned long>(p / 2)));
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  mpq_class q(r1, t1);
  q.canonicalize();
  return q;
}

std::optional<SparseKernel> modular_kernel(const std::vector<SparseRow>& rows, size_t ncols, u64 p) {
  // Forward elimination with a dense accumulator; the heap yields the
  // smallest live column so that pivot rows stay in echelon order.
  std::vector<std::vector<std::pair<size_t, u64>>> pivot(ncols);
  std::vector<bool> has_pivot(ncols, false);
  std::vector<u64> acc(ncols, 0);
  std::vector<size_t> heap;
  auto push = [&](size_t c) {
    heap.push_back(c);
    std::push_heap(heap.begin(), heap.end(), std::greater<>());
  };
  for (const auto& row : rows) {
    heap.clear();
    for (const auto& [c, v] : row) {
      auto m = to_mod(v, p);
      if (!m) return std::nullopt;
      if (*m == 0) continue;
      if (acc[c] == 0) push(c);
      acc[c] = (acc[c] + *m) % p;
    }
    std::vector<std::pair<size_t, u64>> fresh;
    size_t last = ncols;
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), std::greater<>());
      size_t c = heap.back();
      heap.pop_back();
      if (c == last) continue;
      u64 f = acc[c];
      if (f == 0) continue;
      last = c;
      if (!fresh.empty() || !has_pivot[c]) {
        fresh.emplace_back(c, f);
        acc[c] = 0;
        continue;
      }
      u64 nf = p - f;
      acc[c] = 0;
      const auto& pr = pivot[c];
      for (size_t k = 1; k < pr.size(); ++k) {
        auto [col, v] = pr[k];
        if (acc[col] == 0) push(col);
        acc[col] = (acc[col] + mul_mod(nf, v, p)) % p;
      }
    }
    if (fresh.empty()) continue;
    u64 inv = inv_mod(fresh.front().second, p);
    for (auto& [c, v] : fresh) v = mul_mod(v, inv, p);
    size_t c = fresh.front().first;
    has_pivot[c] = true;
    pivot[c] = std::move(fresh);
  }
  // One back-solve per free column.
  std::vector<size_t> free_cols, pivot_cols;
  for (size_t c = 0; c < ncols; ++c) (has_pivot[c] ? pivot_cols : free_cols).push_back(c);
  SparseKernel k;
  std::vector<u64> x(ncols, 0);
  for (size_t f : free_cols) {
    std::fill(x.begin(), x.end(), 0);
    x[f] = 1;
    for (auto it = pivot_cols.rbegin(); it != pivot_cols.rend(); ++it) {
      u64 s = 0;
      const auto& pr = pivot[*it];
      for (size_t j = 1; j < pr.size(); ++j)
        if (x[pr[j].first]) s = (s + mul_mod(pr[j].second, x[pr[j].first], p)) % p;
      x[*it] = s ? p - s : 0;
    }
    SparseRow v;
    for (size_t c = 0; c < ncols; ++c) {
      if (!x[c]) continue;
      auto q = reconstruct(x[c], p);
      if (!q) return std::nullopt;
      v.emplace_back(c, *q);
    }
    k.free_columns.push_back(f);
    k.basis.push_back(std::move(v));
  }
  return k;
}

bool verify_kernel(const std::vector<SparseRow>& rows, const SparseKernel& k, size_t ncols) {
  // Column -> (basis index, value) for a sparse product rows * basis.
  std::vector<std::vector<std::pair<size_t, const mpq_class*>>> by_col(ncols);
  for (size_t b = 0; b < k.basis.size(); ++b)
    for (const auto& [c, v] : k.basis[b]) by_col[c].emplace_back(b, &v);
  std::map<size_t, mpq_class> acc;
  for (const auto& row : rows) {
    acc.clear();
    for (const auto& [c, v] : row)
      for (const auto& [b, x] : by_col[c]) acc[b] += v * *x;
    for (const auto& [b, s] : acc)
      if (s != 0) return false;
  }
  return true;
}

}  // namespace

SparseKernel sparse_kernel(const std::vector<SparseRow>& rows, size_t ncols) {
  mpz_class p = mpz_class(1) << 61;
  for (int attempt = 0; attempt < 3; ++attempt) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    auto k = modular_kernel(rows, ncols, p.get_ui());
    if (k && verify_kernel(rows, *k, ncols)) return *k;
    p += mpz_class(1) << (40 + attempt);
  }
  SparseEchelon se(ncols);
  for (const auto& r : rows) se.add(r);
  SparseKernel k;
  k.basis = se.nullspace();
  auto piv = se.pivot_columns();
  for (size_t c = 0; c < ncols; ++c)
    if (!std::binary_search(piv.begin(), piv.end(), c)) k.free_columns.push_back(c);
  return k;
}

}  // namespace pcanon
