#pragma once

#include <gmpxx.h>

#include <map>
#include <vector>

#include "pcanon/multipoly.hpp"

namespace pcanon {

// Dense matrices over Q or over the polynomial ring, sharing one code path
// for symbolic and specialised bimodule computations.
template <class T>
using Mat = std::vector<std::vector<T>>;

template <class T>
struct Scalar;

template <>
struct Scalar<mpq_class> {
  static mpq_class from(const mpq_class& c) { return c; }
  static bool is_zero(const mpq_class& x) { return x == 0; }
};

template <>
struct Scalar<MultiPoly> {
  static MultiPoly from(const mpq_class& c) { return MultiPoly::constant(c); }
  static bool is_zero(const MultiPoly& x) { return x.is_zero(); }
};

template <class T>
Mat<T> mat_zero(size_t rows, size_t cols) {
  return Mat<T>(rows, std::vector<T>(cols, Scalar<T>::from(0)));
}

template <class T>
Mat<T> mat_identity(size_t n) {
  Mat<T> m = mat_zero<T>(n, n);
  for (size_t i = 0; i < n; ++i) m[i][i] = Scalar<T>::from(1);
  return m;
}

template <class T>
Mat<T> mat_mul(const Mat<T>& a, const Mat<T>& b) {
  size_t cols = b.empty() ? 0 : b[0].size();
  Mat<T> c = mat_zero<T>(a.size(), cols);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k) {
      if (Scalar<T>::is_zero(a[i][k])) continue;
      for (size_t j = 0; j < cols; ++j)
        if (!Scalar<T>::is_zero(b[k][j])) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

template <class T>
void mat_add_scaled(Mat<T>& a, const Mat<T>& b, const mpq_class& c) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j)
      if (!Scalar<T>::is_zero(b[i][j])) a[i][j] += b[i][j] * c;
}

// p(M_0, ..., M_{r-1}) for pairwise commuting square matrices M_k.
template <class T>
Mat<T> eval_at_matrices(const MultiPoly& p, const std::vector<Mat<T>>& gens) {
  size_t n = gens.empty() ? 1 : gens[0].size();
  Mat<T> out = mat_zero<T>(n, n);
  std::map<MultiPoly::Mono, Mat<T>> powers;
  powers.emplace(0, mat_identity<T>(n));
  auto power = [&](auto&& self, MultiPoly::Mono m) -> const Mat<T>& {
    auto it = powers.find(m);
    if (it != powers.end()) return it->second;
    size_t k = 0;
    while (MultiPoly::exponent(m, k) == 0) ++k;
    Mat<T> r = mat_mul(self(self, m - MultiPoly::unit(k)), gens.at(k));
    return powers.emplace(m, std::move(r)).first->second;
  };
  for (const auto& [m, c] : p.terms()) mat_add_scaled(out, power(power, m), c);
  return out;
}

}  // namespace pcanon
