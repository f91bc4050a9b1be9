#pragma once
// Independent reference computations used only by tests. None of these share
// code paths with the library algorithms they check.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "pcanon/coxeter.hpp"
#include "pcanon/hecke.hpp"
#include "pcanon/laurent.hpp"

namespace oracle {

using pcanon::CartanMatrix;
using pcanon::Gen;
using pcanon::LaurentPoly;
using pcanon::Word;

// Group elements as integer matrices of the reflection representation on
// the root lattice; words are explored breadth first so the first word
// reaching a matrix has minimal length, and among those the ShortLex least.
struct BruteGroup {
  using Mat = std::vector<std::vector<long>>;
  CartanMatrix a;
  std::map<Mat, Word> first_word;  // matrix -> ShortLex least reduced word
  std::vector<Mat> gens;

  Mat identity() const {
    size_t n = a.rank();
    Mat m(n, std::vector<long>(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
  }
  Mat mul(const Mat& x, const Mat& y) const {
    size_t n = a.rank();
    Mat r(n, std::vector<long>(n, 0));
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k)
        if (x[i][k])
          for (size_t j = 0; j < n; ++j) r[i][j] += x[i][k] * y[k][j];
    return r;
  }
  Mat of_word(const Word& w) const {
    Mat m = identity();
    for (Gen g : w) m = mul(m, gens[g]);
    return m;
  }

  BruteGroup(const CartanMatrix& cm, size_t max_len) : a(cm) {
    size_t n = a.rank();
    for (size_t s = 0; s < n; ++s) {
      // column t holds s(alpha_t) = alpha_t - a_st alpha_s
      Mat m = identity();
      for (size_t t = 0; t < n; ++t) m[s][t] -= a(s, t);
      gens.push_back(m);
    }
    // Words enumerated in ShortLex order, so the first hit is the normal form.
    std::vector<Word> level{{}};
    first_word[identity()] = {};
    for (size_t len = 1; len <= max_len; ++len) {
      std::vector<Word> next;
      for (const auto& w : level)
        for (size_t s = 0; s < n; ++s) {
          Word x = w;
          x.push_back(static_cast<Gen>(s));
          Mat m = of_word(x);
          if (!first_word.count(m)) {
            first_word[m] = x;
            next.push_back(x);
          }
        }
      std::sort(next.begin(), next.end());
      level = next;
    }
  }

  // Normal form by matrix lookup (valid when the word's element is short).
  Word normal_form(const Word& w) const { return first_word.at(of_word(w)); }
};

// Subword criterion for the Bruhat order.
inline bool bruhat_by_subwords(const pcanon::CoxeterGroup& W, const pcanon::Element& x,
                               const pcanon::Element& y) {
  const Word& yw = y.word();
  size_t n = yw.size();
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    Word sub;
    for (size_t i = 0; i < n; ++i)
      if (mask >> i & 1) sub.push_back(yw[i]);
    if (W.normal_form(sub) == x) return true;
  }
  return false;
}

// KL basis by solving h_z - bar(h_z) = sum_{y > z} bar(h_y) r_{z,y}
// top-down on the Bruhat interval, with R-polynomials from the bar involution
// computed by inverting generators one at a time.
class BarFixedPointKL {
 public:
  explicit BarFixedPointKL(const pcanon::CoxeterGroup& W) : W_(W) {}

  // bar(H_w) expressed in the standard basis, via bar(H_s) = H_s + v - v^-1.
  std::map<Word, LaurentPoly> bar_std(const pcanon::Element& w) const {
    std::map<Word, LaurentPoly> cur{{{}, LaurentPoly(1)}};
    for (Gen s : w.word()) {
      std::map<Word, LaurentPoly> next;
      for (const auto& [x, c] : cur) {
        pcanon::Element xe = W_.normal_form(x);
        pcanon::Element xs = W_.mul_gen(xe, s);
        // H_x H_s
        next[xs.word()] += c;
        if (xs.length() < xe.length()) next[x] += c * (LaurentPoly::v(-1) - LaurentPoly::v(1));
        // + (v - v^-1) H_x
        next[x] += c * (LaurentPoly::v(1) - LaurentPoly::v(-1));
      }
      cur.clear();
      for (auto& [k, c] : next)
        if (!c.is_zero()) cur[k] = c;
    }
    return cur;
  }

  std::map<Word, LaurentPoly> kl(const pcanon::Element& w) const {
    std::vector<pcanon::Element> below = W_.bruhat_interval_below(w);
    std::map<Word, std::map<Word, LaurentPoly>> r;  // r[y][z] = coeff of H_z in bar(H_y)
    for (const auto& y : below) r[y.word()] = bar_std(y);
    std::map<Word, LaurentPoly> h;
    h[w.word()] = 1;
    for (auto it = below.rbegin(); it != below.rend(); ++it) {
      const auto& z = *it;
      if (z == w) continue;
      LaurentPoly rhs;
      for (const auto& [y, hy] : h) {
        auto f = r[y].find(z.word());
        if (f != r[y].end()) rhs += hy.bar() * f->second;
      }
      // h_z - bar(h_z) = rhs with h_z in vZ[v]: keep the positive part.
      LaurentPoly hz;
      for (const auto& [e, c] : rhs.terms())
        if (e > 0) hz.add_term(e, c);
      if (!hz.is_zero()) h[z.word()] = hz;
    }
    return h;
  }

 private:
  const pcanon::CoxeterGroup& W_;
};

// Classical antispherical canonical basis computed directly in the
// antispherical module with the rules N_y (H_s + v) = N_ys + v N_y (ys > y,
// ys minimal), N_ys + v^-1 N_y (ys < y), 0 otherwise.
class AntisphericalOracle {
 public:
  AntisphericalOracle(const pcanon::CoxeterGroup& W, std::vector<Gen> J) : W_(W), J_(std::move(J)) {}

  using Vec = std::map<pcanon::Element, LaurentPoly>;

  Vec act(const Vec& n, Gen s) const {
    Vec out;
    for (const auto& [y, c] : n) {
      pcanon::Element ys = W_.mul_gen(y, s);
      if (!W_.is_min_coset_rep(ys, J_)) continue;
      out[ys] += c;
      out[y] += c * LaurentPoly::v(ys.length() > y.length() ? 1 : -1);
    }
    clean(out);
    return out;
  }

  const Vec& canonical(const pcanon::Element& w) const {
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
    Vec result;
    if (w.is_identity()) {
      result[w] = 1;
    } else {
      Gen s = w.word().back();
      pcanon::Element ws = W_.mul_gen(w, s);
      result = act(canonical(ws), s);
      // Remove constant terms below the top, highest first.
      while (true) {
        const pcanon::Element* bad = nullptr;
        for (auto jt = result.rbegin(); jt != result.rend(); ++jt)
          if (!(jt->first == w) && jt->second.coeff(0) != 0) {
            bad = &jt->first;
            break;
          }
        if (!bad) break;
        pcanon::Element y = *bad;
        mpz_class c = result[y].coeff(0);
        for (const auto& [z, d] : canonical(y)) result[z] -= d * LaurentPoly(c);
        clean(result);
      }
    }
    return memo_[w] = result;
  }

 private:
  static void clean(Vec& v) {
    for (auto it = v.begin(); it != v.end();) it = it->second.is_zero() ? v.erase(it) : std::next(it);
  }
  const pcanon::CoxeterGroup& W_;
  std::vector<Gen> J_;
  mutable std::map<pcanon::Element, Vec> memo_;
};

// Donkin's tensor product theorem for SL2 in characteristic p: for
// 0 <= r <= p-1 and m >= 0, T(p-1+r+pm) = T(p-1+r) ⊗ T(m)^[1], with
// ch T(p-1) = chi(p-1) and ch T(p-1+r) = chi(p-1+r) + chi(p-1-r) for r >= 1.
// Below p-1, T(n) = Δ(n). Returns the character as weight -> multiplicity.
inline std::map<long, long> sl2_char_tilting(long n, long p) {
  std::map<long, long> ch;
  auto add_weyl = [](long m, std::map<long, long>& into) {
    for (long k = -m; k <= m; k += 2) into[k] += 1;
  };
  if (n < p - 1) {
    add_weyl(n, ch);
    return ch;
  }
  long r = (n - (p - 1)) % p, m = (n - (p - 1)) / p;
  std::map<long, long> base;
  add_weyl(p - 1 + r, base);
  if (r >= 1) add_weyl(p - 1 - r, base);
  if (m == 0) return base;
  std::map<long, long> twist = sl2_char_tilting(m, p);
  for (const auto& [w1, m1] : base)
    for (const auto& [w2, m2] : twist) ch[w1 + p * w2] += m1 * m2;
  return ch;
}

// Decompose a W-invariant character into Weyl characters chi(m), m >= 0.
inline std::map<long, long> sl2_nabla_multiplicities(std::map<long, long> ch) {
  std::map<long, long> out;
  while (!ch.empty()) {
    long top = ch.rbegin()->first;
    long mult = ch.rbegin()->second;
    if (mult == 0) {
      ch.erase(top);
      continue;
    }
    out[top] += mult;
    for (long k = -top; k <= top; k += 2) {
      ch[k] -= mult;
      if (ch[k] == 0) ch.erase(k);
    }
  }
  return out;
}

}  // namespace oracle
