#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pcanon/coxeter.hpp"
#include "pcanon/laurent.hpp"
#include "pcanon/linalg.hpp"
#include "pcanon/matrix.hpp"
#include "pcanon/multipoly.hpp"
#include "pcanon/realization.hpp"

namespace pcanon {

using PolyMat = Mat<MultiPoly>;

// Bott-Samelson bimodule B_w = B_{s1} (x)_R ... (x)_R B_{sn} over R = Sym(V*).
// Left basis: 1 (x) c_1 (x) ... (x) c_n with c_i in {1, delta_i}; bit i of
// the basis index is set when c_i = delta_i. Right multiplication by x_k
// sends b_i to sum_l right[k][i][l] b_l.
struct BSBimodule {
  Word expr;
  std::vector<int> degrees;
  std::vector<PolyMat> right;

  size_t size() const { return degrees.size(); }
};

// Graded left R-module map given on left bases: b_i -> sum_j matrix[i][j] c_j.
// Composition g o f has matrix F * G.
struct BimoduleMap {
  Word source;
  Word target;
  int degree = 0;
  PolyMat matrix;

  friend bool operator==(const BimoduleMap&, const BimoduleMap&) = default;
};

enum class GeneratorKind { Poly, StartDot, EndDot, Split, Merge, Braid };

// Exact computations with Bott-Samelson bimodules for a realization over Q.
// Thread safe; bimodules and braid maps are memoised.
class SoergelCalculus {
 public:
  explicit SoergelCalculus(Realization r);

  const Realization& realization() const { return r_; }
  const CoxeterSystem& system() const { return r_.coxeter(); }
  size_t nvars() const { return r_.rank(); }

  const MultiPoly& root(Gen s) const { return roots_[s]; }
  const MultiPoly& half_root(Gen s) const { return deltas_[s]; }
  MultiPoly act(Gen s, const MultiPoly& f) const;
  // Action of the product s_1 ... s_k (rightmost first).
  MultiPoly act(const Word& x, const MultiPoly& f) const;
  MultiPoly demazure(Gen s, const MultiPoly& f) const;

  std::shared_ptr<const BSBimodule> bimodule(const Word& expr) const;
  // Right action matrices with every entry evaluated at `point` in V.
  std::vector<QMat> specialized_right(const Word& expr, const QVec& point) const;

  BimoduleMap identity(const Word& expr) const;
  BimoduleMap compose(const BimoduleMap& f, const BimoduleMap& g) const;  // g o f
  // id_a (x) f (x) id_c.
  BimoduleMap tensor(const Word& a, const BimoduleMap& f, const Word& c) const;
  // Left multiplication by f on B_expr.
  BimoduleMap multiply_by(const MultiPoly& f, const Word& expr) const;

  BimoduleMap poly_map(const MultiPoly& f) const;
  BimoduleMap start_dot(Gen s) const;  // R -> B_s, degree 1
  BimoduleMap end_dot(Gen s) const;    // B_s -> R, degree 1
  BimoduleMap split(Gen s) const;      // B_s -> B_s B_s, degree -1
  BimoduleMap merge(Gen s) const;      // B_s B_s -> B_s, degree -1
  // j_{s,t}: B_{sts...} -> B_{tst...} (m_st letters), degree 0, sending
  // 1 (x) ... (x) 1 to 1 (x) ... (x) 1. Throws InconsistencyError when the
  // degree-0 Hom space is not one-dimensional.
  BimoduleMap braid(Gen s, Gen t) const;
  BimoduleMap generator(GeneratorKind kind, Gen s, Gen t = 0, const MultiPoly& f = {}) const;

  // Right linearity and homogeneity of the stated degree.
  bool is_bimodule_map(const BimoduleMap& f) const;

  // Basis of the degree-d bimodule maps B_v -> B_w.
  std::vector<BimoduleMap> hom_space(const Word& v, const Word& w, int d) const;
  // Graded rank of Hom(B_v, B_w) as a free left R-module: for each degree,
  // dim Hom_d minus the dimension of R_+ Hom in degree d.
  LaurentPoly hom_graded_rank(const Word& v, const Word& w) const;

 private:
  template <class T>
  std::vector<Mat<T>> extend_right(const std::vector<Mat<T>>& rho, Gen s) const;

  Realization r_;
  std::vector<MultiPoly> vars_;
  std::vector<MultiPoly> roots_;
  std::vector<MultiPoly> deltas_;
  std::vector<std::vector<MultiPoly>> images_;  // images_[s][k] = s(x_k)
  // For slot s and variable k: the splittings x_k = P + Q delta and
  // delta x_k = P' + Q' delta with P, Q, P', Q' s-invariant.
  std::vector<std::vector<std::array<MultiPoly, 4>>> splits_;

  mutable std::mutex mutex_;
  mutable std::map<Word, std::shared_ptr<const BSBimodule>> bimodules_;
  mutable std::map<std::pair<Gen, Gen>, BimoduleMap> braids_;
};

// Alternating word s, t, s, ... of length m.
Word alternating(Gen s, Gen t, int m);

}  // namespace pcanon
