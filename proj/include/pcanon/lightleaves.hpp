#pragma once

#include <map>
#include <utility>
#include <vector>

#include "pcanon/coxeter.hpp"
#include "pcanon/linalg.hpp"
#include "pcanon/soergel.hpp"

namespace pcanon {

// One generator applied at position `pos` of the current word, tensored with
// identities on both sides. Braid steps replace alternating(s, t, m_st) by
// alternating(t, s, m_st).
struct LeafStep {
  GeneratorKind kind = GeneratorKind::EndDot;
  size_t pos = 0;
  Gen s = 0;
  Gen t = 0;

  friend bool operator==(const LeafStep&, const LeafStep&) = default;
};

// Light leaf of a 01-subexpression e of `source`, a map B_source -> B_target
// of degree `defect` where target is the ShortLex word of the endpoint.
struct LightLeaf {
  std::vector<bool> subexpression;
  Element endpoint;
  int defect = 0;
  Word source;
  Word target;
  std::vector<LeafStep> steps;
};

// Word obtained from `word` by applying `step`.
Word apply_step(const Word& word, const LeafStep& step, const CoxeterSystem& sys);

// Braid moves turning the reduced word `from` into `to` (same element),
// found by breadth-first search with a fixed neighbour order.
std::vector<LeafStep> rex_moves(const CoxeterSystem& sys, const Word& from, const Word& to);

// Leaves of all subexpressions of w ending at x, in increasing order of the
// subexpression read as a binary number (bit i = letter i).
std::vector<LightLeaf> light_leaves(const CoxeterGroup& W, const Word& w, const Element& x);
// Leaves of every subexpression of w, in the same order.
std::vector<LightLeaf> all_light_leaves(const CoxeterGroup& W, const Word& w);

// Upside-down leaf B_target -> B_source.
LightLeaf flip(const LightLeaf& leaf);

// The step list as a bimodule map (symbolic, for small expressions).
BimoduleMap realize_steps(const SoergelCalculus& calc, const Word& source, const std::vector<LeafStep>& steps);
BimoduleMap leaf_map(const SoergelCalculus& calc, const LightLeaf& leaf);

// Point of V with alpha_s = 1 for every s; it lies in the interior of the
// fundamental chamber, so distinct group elements move it to distinct points.
QVec regular_point(const Realization& r);

// Localisation of B_expr at the regular point: the right action splits into
// lines on which x_k acts by (x . x_k)(point), one per subexpression.
struct StandardDecomposition {
  Word expr;
  QVec point;
  std::vector<std::pair<std::vector<bool>, Element>> subexpressions;
  std::map<Element, size_t> multiplicity;
  // Idempotents commuting with the specialised right action; they sum to 1.
  std::map<Element, QMat> projector;
};

StandardDecomposition standard_decomposition(const SoergelCalculus& calc, const CoxeterGroup& W, const Word& expr);

// Intersection forms of a reduced expression w at every x below it. The
// form at (x, d) pairs leaves of defect d (rows) against upside-down leaves
// of defect -d (columns): the entry is the scalar by which
// LL_row o flip(LL_col) acts on the Q_x line of B_x. Entries are rational;
// `integral` clears denominators by a power of 2 and throws
// InconsistencyError on any other denominator.
class IntersectionForms {
 public:
  IntersectionForms(const SoergelCalculus& calc, const CoxeterGroup& W, Word w);

  const Word& expression() const { return w_; }
  // Endpoints with at least one leaf, in ShortLex order.
  std::vector<Element> endpoints() const;
  // Degrees d at x with a leaf of defect d or -d.
  std::vector<int> degrees(const Element& x) const;
  QMat form(const Element& x, int d) const;
  ZMat integral(const Element& x, int d) const;
  // Sum over d of rank_p(form(x, d)) v^d; p = 0 means rank over Q.
  LaurentPoly graded_rank(const Element& x, unsigned long p) const;

 private:
  Word w_;
  std::map<Element, std::vector<LightLeaf>> leaves_;
  std::map<std::pair<Element, int>, QMat> forms_;
};

// 2^k * m with the least k making every entry integral.
ZMat clear_two_power(const QMat& m);

}  // namespace pcanon
