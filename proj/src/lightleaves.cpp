#include "pcanon/lightleaves.hpp"

#include <algorithm>
#include <deque>
#include <array>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_map>

#include "pcanon/errors.hpp"

namespace pcanon {

namespace {

size_t source_length(const LeafStep& step, const CoxeterSystem& sys) {
  switch (step.kind) {
    case GeneratorKind::EndDot: return 1;
    case GeneratorKind::StartDot: return 0;
    case GeneratorKind::Split: return 1;
    case GeneratorKind::Merge: return 2;
    case GeneratorKind::Braid: return static_cast<size_t>(sys.order(step.s, step.t));
    case GeneratorKind::Poly: break;
  }
  throw InputError("polynomial steps do not occur in light leaves");
}

Word local_target(const LeafStep& step, const CoxeterSystem& sys) {
  switch (step.kind) {
    case GeneratorKind::EndDot: return {};
    case GeneratorKind::StartDot: return {step.s};
    case GeneratorKind::Split: return {step.s, step.s};
    case GeneratorKind::Merge: return {step.s};
    case GeneratorKind::Braid: return alternating(step.t, step.s, sys.order(step.s, step.t));
    case GeneratorKind::Poly: break;
  }
  throw InputError("polynomial steps do not occur in light leaves");
}

BimoduleMap local_map(const SoergelCalculus& calc, const LeafStep& step) {
  switch (step.kind) {
    case GeneratorKind::EndDot: return calc.end_dot(step.s);
    case GeneratorKind::StartDot: return calc.start_dot(step.s);
    case GeneratorKind::Split: return calc.split(step.s);
    case GeneratorKind::Merge: return calc.merge(step.s);
    case GeneratorKind::Braid: return calc.braid(step.s, step.t);
    case GeneratorKind::Poly: break;
  }
  throw InputError("polynomial steps do not occur in light leaves");
}

LeafStep flipped(const LeafStep& step) {
  LeafStep out = step;
  switch (step.kind) {
    case GeneratorKind::EndDot: out.kind = GeneratorKind::StartDot; break;
    case GeneratorKind::StartDot: out.kind = GeneratorKind::EndDot; break;
    case GeneratorKind::Split: out.kind = GeneratorKind::Merge; break;
    case GeneratorKind::Merge: out.kind = GeneratorKind::Split; break;
    case GeneratorKind::Braid: std::swap(out.s, out.t); break;
    case GeneratorKind::Poly: throw InputError("polynomial steps do not occur in light leaves");
  }
  return out;
}

}  // namespace

Word apply_step(const Word& word, const LeafStep& step, const CoxeterSystem& sys) {
  size_t len = source_length(step, sys);
  if (step.pos + len > word.size()) throw InputError("leaf step outside the word");
  Word out(word.begin(), word.begin() + step.pos);
  Word mid = local_target(step, sys);
  out.insert(out.end(), mid.begin(), mid.end());
  out.insert(out.end(), word.begin() + step.pos + len, word.end());
  return out;
}

std::vector<LeafStep> rex_moves(const CoxeterSystem& sys, const Word& from, const Word& to) {
  if (from == to) return {};
  std::map<Word, std::pair<Word, LeafStep>> parent;
  std::deque<Word> queue{from};
  parent.emplace(from, std::make_pair(Word{}, LeafStep{}));
  while (!queue.empty()) {
    Word cur = std::move(queue.front());
    queue.pop_front();
    for (size_t pos = 0; pos < cur.size(); ++pos) {
      Gen s = cur[pos];
      if (pos + 1 >= cur.size() || cur[pos + 1] == s) continue;
      Gen t = cur[pos + 1];
      int m = sys.order(s, t);
      if (m == CoxeterSystem::kInfinity || pos + m > cur.size()) continue;
      Word alt = alternating(s, t, m);
      if (!std::equal(alt.begin(), alt.end(), cur.begin() + pos)) continue;
      LeafStep step{GeneratorKind::Braid, pos, s, t};
      Word next = apply_step(cur, step, sys);
      if (parent.count(next)) continue;
      parent.emplace(next, std::make_pair(cur, step));
      if (next == to) {
        std::vector<LeafStep> path;
        for (Word w = next; w != from; w = parent.at(w).first) path.push_back(parent.at(w).second);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(std::move(next));
    }
  }
  throw InconsistencyError("no braid-move path between " + sys.format_word(from) + " and " + sys.format_word(to));
}

namespace {

LightLeaf build_leaf(const CoxeterGroup& W, const Word& w, unsigned long bits) {
  const CoxeterSystem& sys = W.system();
  LightLeaf leaf;
  leaf.source = w;
  Element cur = W.identity();
  Word cur_word;  // reduced word for cur, occupying the front of the full word
  Word full = w;
  auto push = [&](const LeafStep& step) {
    full = apply_step(full, step, sys);
    leaf.steps.push_back(step);
  };
  auto move_to = [&](const Word& target) {
    for (const LeafStep& step : rex_moves(sys, cur_word, target)) push(step);
    cur_word = target;
  };
  for (size_t i = 0; i < w.size(); ++i) {
    Gen s = w[i];
    bool take = (bits >> i) & 1;
    leaf.subexpression.push_back(take);
    size_t pos = cur_word.size();
    if (!W.is_right_descent(cur, s)) {
      if (take) {
        cur_word.push_back(s);
        cur = W.mul_gen(cur, s);
      } else {
        push({GeneratorKind::EndDot, pos, s, s});
        leaf.defect += 1;
      }
      continue;
    }
    Word target = W.mul_gen(cur, s).word();
    target.push_back(s);
    move_to(target);
    push({GeneratorKind::Merge, pos - 1, s, s});
    if (take) {
      push({GeneratorKind::EndDot, pos - 1, s, s});
      cur_word.pop_back();
      cur = W.mul_gen(cur, s);
    } else {
      leaf.defect -= 1;
    }
  }
  move_to(cur.word());
  leaf.endpoint = cur;
  leaf.target = cur.word();
  if (full != leaf.target) throw InconsistencyError("light leaf does not end at the ShortLex word");
  return leaf;
}

}  // namespace

std::vector<LightLeaf> all_light_leaves(const CoxeterGroup& W, const Word& w) {
  if (w.size() >= 8 * sizeof(unsigned long)) throw InputError("expression too long for light leaves");
  std::vector<LightLeaf> out;
  for (unsigned long bits = 0; bits < (1UL << w.size()); ++bits) out.push_back(build_leaf(W, w, bits));
  return out;
}

std::vector<LightLeaf> light_leaves(const CoxeterGroup& W, const Word& w, const Element& x) {
  std::vector<LightLeaf> out;
  for (auto& leaf : all_light_leaves(W, w))
    if (leaf.endpoint == x) out.push_back(std::move(leaf));
  return out;
}

LightLeaf flip(const LightLeaf& leaf) {
  LightLeaf out = leaf;
  std::swap(out.source, out.target);
  out.steps.clear();
  for (auto it = leaf.steps.rbegin(); it != leaf.steps.rend(); ++it) out.steps.push_back(flipped(*it));
  return out;
}

BimoduleMap realize_steps(const SoergelCalculus& calc, const Word& source, const std::vector<LeafStep>& steps) {
  const CoxeterSystem& sys = calc.system();
  BimoduleMap f = calc.identity(source);
  Word cur = source;
  for (const LeafStep& step : steps) {
    size_t len = source_length(step, sys);
    Word a(cur.begin(), cur.begin() + step.pos), c(cur.begin() + step.pos + len, cur.end());
    f = calc.compose(f, calc.tensor(a, local_map(calc, step), c));
    cur = apply_step(cur, step, sys);
  }
  return f;
}

BimoduleMap leaf_map(const SoergelCalculus& calc, const LightLeaf& leaf) {
  return realize_steps(calc, leaf.source, leaf.steps);
}

QVec regular_point(const Realization& r) {
  size_t n = r.rank(), g = r.generators();
  QMat rows;
  for (Gen s = 0; s < g; ++s) {
    QVec row = r.root(s);
    row.push_back(-1);
    rows.push_back(std::move(row));
  }
  for (const QVec& k : nullspace_q(rows, n + 1))
    if (k[n] != 0) {
      QVec p(k.begin(), k.begin() + static_cast<long>(n));
      for (auto& x : p) x /= k[n];
      return p;
    }
  throw InputError("no point with alpha_s = 1 for all s: roots are dependent");
}

namespace {

// (x . x_k)(point) for every coordinate k.
QVec character(const SoergelCalculus& calc, const Element& x, const QVec& point) {
  QVec out;
  for (size_t k = 0; k < calc.nvars(); ++k) out.push_back(calc.act(x.word(), MultiPoly::variable(k)).evaluate(point));
  return out;
}

}  // namespace

StandardDecomposition standard_decomposition(const SoergelCalculus& calc, const CoxeterGroup& W, const Word& expr) {
  StandardDecomposition sd;
  sd.expr = expr;
  sd.point = regular_point(calc.realization());
  for (unsigned long bits = 0; bits < (1UL << expr.size()); ++bits) {
    std::vector<bool> e;
    Word sub;
    for (size_t i = 0; i < expr.size(); ++i) {
      e.push_back((bits >> i) & 1);
      if (e.back()) sub.push_back(expr[i]);
    }
    Element x = W.normal_form(sub);
    sd.subexpressions.emplace_back(std::move(e), x);
    ++sd.multiplicity[x];
  }
  auto rho = calc.specialized_right(expr, sd.point);
  size_t n = size_t{1} << expr.size();
  // A generic combination of the coordinates separates the characters.
  std::map<Element, mpq_class> value;
  for (long c = 1;; ++c) {
    value.clear();
    std::set<mpq_class> seen;
    for (const auto& [x, mult] : sd.multiplicity) {
      QVec ch = character(calc, x, sd.point);
      mpq_class v = 0, w = 1;
      for (const auto& y : ch) {
        v += w * y;
        w *= c + 1;
      }
      value[x] = v;
      seen.insert(v);
    }
    if (seen.size() == value.size()) {
      QMat a = mat_zero<mpq_class>(n, n);
      mpq_class w = 1;
      for (size_t k = 0; k < calc.nvars(); ++k) {
        mat_add_scaled(a, rho[k], w);
        w *= c + 1;
      }
      for (const auto& [x, vx] : value) {
        QMat p = mat_identity<mpq_class>(n);
        for (const auto& [y, vy] : value) {
          if (y == x) continue;
          QMat shifted = a;
          for (size_t i = 0; i < n; ++i) shifted[i][i] -= vy;
          p = mat_mul(p, shifted);
          for (auto& row : p)
            for (auto& e : row) e /= vx - vy;
        }
        sd.projector[x] = std::move(p);
      }
      break;
    }
  }
  return sd;
}

namespace {

using SparseVec = std::unordered_map<size_t, mpq_class>;

size_t low_bits(size_t n) { return (size_t{1} << n) - 1; }

// Localisation of Bott-Samelson bimodules at a regular point xi. Over Q
// with the left action specialised at xi, B_s1...B_sm splits into lines on
// which the right action is scalar; the scalars form a point of V. The line
// basis is built letter by letter: Q_q (x) B_s has two eigenlines, the
// first with point q and the second with point s(q). Line k of a word has
// bit i set when letter i took the second eigenline. A light-leaf step is a
// bimodule map, so in line bases it is id (x) L(q) (x) id, where q is the
// point of the prefix line and L(q) only connects lines with equal points.
class Localizer {
 public:
  struct Entry {
    size_t to;
    mpq_class value;
  };
  struct Local {
    std::vector<std::vector<Entry>> by_source;
    std::vector<std::vector<Entry>> by_target;
  };

  Localizer(const SoergelCalculus& calc, QVec xi) : calc_(calc) { intern(std::move(xi)); }

  const QVec& point(int id) const { return points_[id]; }

  std::optional<int> find(const QVec& q) const {
    auto it = ids_.find(q);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  // Point of the line with bits `bits` in the first n letters of `word`.
  int walk(const Word& word, size_t bits, size_t n) {
    int q = 0;
    for (size_t i = 0; i < n; ++i)
      if ((bits >> i) & 1) q = split(q, word[i]).twisted;
    return q;
  }

  const Local& step(const LeafStep& step, int q) {
    auto key = std::make_tuple(step.kind, step.s, step.t, q);
    auto it = steps_.find(key);
    if (it != steps_.end()) return it->second;
    auto gk = std::make_tuple(step.kind, step.s, step.t);
    auto git = maps_.find(gk);
    if (git == maps_.end()) git = maps_.emplace(gk, local_map(calc_, step)).first;
    const BimoduleMap& g = git->second;
    size_t ns = g.matrix.size(), nt = size_t{1} << g.target.size();
    QMat gq = mat_zero<mpq_class>(ns, nt);
    for (size_t mu = 0; mu < ns; ++mu)
      for (size_t nu = 0; nu < nt; ++nu)
        if (!g.matrix[mu][nu].is_zero()) gq[mu][nu] = g.matrix[mu][nu].evaluate(points_[q]);
    std::vector<int> ps, pt;
    QMat es = eigenbasis(q, g.source, ps), et = eigenbasis(q, g.target, pt);
    auto inv = inverse_q(et);
    if (!inv) throw InconsistencyError("line basis is singular");
    QMat l = multiply_q(multiply_q(es, gq), *inv);
    Local loc;
    loc.by_source.resize(ns);
    loc.by_target.resize(nt);
    for (size_t e = 0; e < ns; ++e)
      for (size_t f = 0; f < nt; ++f) {
        if (l[e][f] == 0) continue;
        if (ps[e] != pt[f]) throw InconsistencyError("bimodule map mixes lines of different weights");
        loc.by_source[e].push_back({f, l[e][f]});
        loc.by_target[f].push_back({e, l[e][f]});
      }
    return steps_.emplace(key, std::move(loc)).first->second;
  }

 private:
  struct Split {
    std::array<QVec, 2> rows;  // eigenlines in the basis 1, delta_s
    int twisted = 0;
  };

  int intern(QVec q) {
    auto it = ids_.find(q);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(points_.size());
    points_.push_back(q);
    ids_.emplace(std::move(q), id);
    return id;
  }

  const Split& split(int q, Gen s) {
    auto key = std::make_pair(q, s);
    auto it = splits_.find(key);
    if (it != splits_.end()) return it->second;
    std::vector<QMat> a = calc_.specialized_right({s}, points_[q]);
    // A generic combination of the coordinates has the two points as
    // distinct eigenvalues.
    QMat c = mat_zero<mpq_class>(2, 2);
    mpq_class w = 1;
    for (const QMat& ak : a) {
      mat_add_scaled(c, ak, w);
      w *= 7;
    }
    Split sp;
    std::array<QVec, 2> pts;
    for (int k = 0; k < 2; ++k) {
      mpq_class lambda = 0, wk = 1;
      if (k == 0) {
        for (const auto& x : points_[q]) {
          lambda += wk * x;
          wk *= 7;
        }
      } else {
        mpq_class lambda0 = 0;
        for (const auto& x : points_[q]) {
          lambda0 += wk * x;
          wk *= 7;
        }
        lambda = c[0][0] + c[1][1] - lambda0;
        if (lambda == lambda0) throw InconsistencyError("localisation point is not regular");
      }
      QMat shifted = transpose_q(c);
      for (int i = 0; i < 2; ++i) shifted[i][i] -= lambda;
      auto ker = nullspace_q(shifted, 2);
      if (ker.size() != 1) throw InconsistencyError("right action is not diagonalisable at the point");
      QVec r = ker[0];
      size_t j = r[0] != 0 ? 0 : 1;
      mpq_class lead = r[j];
      for (auto& x : r) x /= lead;
      for (const QMat& ak : a) {
        mpq_class val = r[0] * ak[0][j] + r[1] * ak[1][j];
        for (size_t i = 0; i < 2; ++i)
          if (r[0] * ak[0][i] + r[1] * ak[1][i] != val * r[i])
            throw InconsistencyError("eigenline is not common to the right action");
        pts[k].push_back(val);
      }
      sp.rows[k] = std::move(r);
    }
    if (pts[0] != points_[q]) throw InconsistencyError("first eigenline does not keep the point");
    sp.twisted = intern(std::move(pts[1]));
    return splits_.emplace(key, std::move(sp)).first->second;
  }

  // Rows are the lines of Q_q (x) B_word in the standard basis.
  QMat eigenbasis(int q, const Word& word, std::vector<int>& pts) {
    QMat e{{mpq_class(1)}};
    pts.assign(1, q);
    for (size_t k = 0; k < word.size(); ++k) {
      size_t n = e.size();
      QMat next = mat_zero<mpq_class>(2 * n, 2 * n);
      std::vector<int> np(2 * n);
      for (size_t i = 0; i < n; ++i) {
        const Split& sp = split(pts[i], word[k]);
        for (size_t b2 = 0; b2 < 2; ++b2) {
          np[i | (b2 << k)] = b2 ? sp.twisted : pts[i];
          for (size_t j = 0; j < n; ++j) {
            if (e[i][j] == 0) continue;
            for (size_t b = 0; b < 2; ++b) next[i | (b2 << k)][j | (b << k)] = sp.rows[b2][b] * e[i][j];
          }
        }
      }
      e = std::move(next);
      pts = std::move(np);
    }
    return e;
  }

  const SoergelCalculus& calc_;
  std::vector<QVec> points_;
  std::map<QVec, int> ids_;
  std::map<std::pair<int, Gen>, Split> splits_;
  std::map<std::tuple<GeneratorKind, Gen, Gen>, BimoduleMap> maps_;
  std::map<std::tuple<GeneratorKind, Gen, Gen, int>, Local> steps_;
};

// Image of the element v of B_word under the step.
SparseVec push(Localizer& loc, const SparseVec& v, const Word& word, const LeafStep& step, size_t ls, size_t lt) {
  SparseVec out;
  size_t pos = step.pos;
  for (const auto& [idx, val] : v) {
    size_t x = idx & low_bits(pos), e = (idx >> pos) & low_bits(ls), c = idx >> (pos + ls);
    const auto& l = loc.step(step, loc.walk(word, x, pos));
    for (const auto& [f, m] : l.by_source[e]) out[x | (f << pos) | (c << (pos + lt))] += val * m;
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// Pull back the functional c on the target of the step.
SparseVec pull(Localizer& loc, const SparseVec& c, const Word& word, const LeafStep& step, size_t ls, size_t lt) {
  SparseVec out;
  size_t pos = step.pos;
  for (const auto& [idx, val] : c) {
    size_t x = idx & low_bits(pos), f = (idx >> pos) & low_bits(lt), rest = idx >> (pos + lt);
    const auto& l = loc.step(step, loc.walk(word, x, pos));
    for (const auto& [e, m] : l.by_target[f]) out[x | (e << pos) | (rest << (pos + ls))] += m * val;
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace

IntersectionForms::IntersectionForms(const SoergelCalculus& calc, const CoxeterGroup& W, Word w) : w_(std::move(w)) {
  if (!W.is_reduced(w_)) throw InputError("intersection forms need a reduced expression");
  const CoxeterSystem& sys = W.system();
  for (auto& leaf : all_light_leaves(W, w_)) leaves_[leaf.endpoint].push_back(std::move(leaf));
  Localizer loc(calc, regular_point(calc.realization()));
  for (const auto& [x, leaves] : leaves_) {
    const Word& xw = x.word();
    // The line of B_x with the character of x; unique since xw is reduced.
    std::optional<int> target = loc.find(character(calc, x, loc.point(0)));
    std::optional<size_t> line;
    for (size_t bits = 0; bits < (size_t{1} << xw.size()); ++bits)
      if (target && loc.walk(xw, bits, xw.size()) == *target) {
        if (line) throw InconsistencyError("standard line of B_x is not one-dimensional");
        line = bits;
      }
    if (!line) throw InconsistencyError("B_x has no line with the character of x");
    // Images of the line under flip(LL) and pullbacks of its coordinate
    // functional under LL, for every leaf.
    std::vector<SparseVec> rows, cols;
    for (const LightLeaf& leaf : leaves) {
      LightLeaf fl = flip(leaf);
      SparseVec r{{*line, mpq_class(1)}};
      Word cur = fl.source;
      for (const LeafStep& step : fl.steps) {
        Word next = apply_step(cur, step, sys);
        r = push(loc, r, cur, step, source_length(step, sys), next.size() + source_length(step, sys) - cur.size());
        cur = std::move(next);
      }
      rows.push_back(std::move(r));
      std::vector<Word> words{leaf.source};
      for (const LeafStep& step : leaf.steps) words.push_back(apply_step(words.back(), step, sys));
      SparseVec c{{*line, mpq_class(1)}};
      for (size_t i = leaf.steps.size(); i-- > 0;) {
        size_t ls = source_length(leaf.steps[i], sys);
        c = pull(loc, c, words[i], leaf.steps[i], ls, words[i + 1].size() + ls - words[i].size());
      }
      cols.push_back(std::move(c));
    }
    std::set<int> defects;
    for (const LightLeaf& leaf : leaves) defects.insert(leaf.defect);
    for (int d : defects) {
      QMat form;
      for (size_t i = 0; i < leaves.size(); ++i) {
        if (leaves[i].defect != d) continue;
        QVec entries;
        for (size_t j = 0; j < leaves.size(); ++j) {
          if (leaves[j].defect != -d) continue;
          mpq_class s = 0;
          const SparseVec& small = rows[j].size() < cols[i].size() ? rows[j] : cols[i];
          const SparseVec& big = rows[j].size() < cols[i].size() ? cols[i] : rows[j];
          for (const auto& [k, val] : small) {
            auto it = big.find(k);
            if (it != big.end()) s += val * it->second;
          }
          entries.push_back(std::move(s));
        }
        form.push_back(std::move(entries));
      }
      forms_[{x, d}] = std::move(form);
    }
  }
}

std::vector<Element> IntersectionForms::endpoints() const {
  std::vector<Element> out;
  for (const auto& [x, leaves] : leaves_) out.push_back(x);
  return out;
}

std::vector<int> IntersectionForms::degrees(const Element& x) const {
  std::set<int> out;
  auto it = leaves_.find(x);
  if (it == leaves_.end()) return {};
  for (const LightLeaf& leaf : it->second) {
    out.insert(leaf.defect);
    out.insert(-leaf.defect);
  }
  return {out.begin(), out.end()};
}

QMat IntersectionForms::form(const Element& x, int d) const {
  auto it = forms_.find({x, d});
  return it == forms_.end() ? QMat{} : it->second;
}

ZMat IntersectionForms::integral(const Element& x, int d) const { return clear_two_power(form(x, d)); }

LaurentPoly IntersectionForms::graded_rank(const Element& x, unsigned long p) const {
  LaurentPoly out;
  for (int d : degrees(x)) {
    ZMat m = integral(x, d);
    if (m.empty() || m[0].empty()) continue;
    size_t r = rank_mod_p(m, p);
    if (r) out += LaurentPoly::monomial(static_cast<long>(r), d);
  }
  return out;
}

ZMat clear_two_power(const QMat& m) {
  mpz_class scale = 1;
  for (const auto& row : m)
    for (const auto& x : row) {
      mpz_class den = x.get_den();
      while (mpz_divisible_2exp_p(den.get_mpz_t(), 1)) {
        den >>= 1;
      }
      if (den != 1) throw InconsistencyError("intersection form entry with an odd denominator: " + x.get_str());
      mpz_class full = x.get_den();
      if (full > scale) scale = full;
    }
  ZMat out;
  for (const auto& row : m) {
    std::vector<mpz_class> r;
    for (const auto& x : row) {
      mpq_class y = x * scale;
      r.push_back(y.get_num());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace pcanon
