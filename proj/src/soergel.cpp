#include "pcanon/soergel.hpp"

#include <algorithm>
#include <optional>
#include <tuple>

#include "pcanon/errors.hpp"

namespace pcanon {

Word alternating(Gen s, Gen t, int m) {
  Word w;
  for (int i = 0; i < m; ++i) w.push_back(i % 2 == 0 ? s : t);
  return w;
}

SoergelCalculus::SoergelCalculus(Realization r) : r_(std::move(r)) {
  if (r_.ring().kind() != CoefficientRing::Kind::Q) throw InputError("bimodule computations run over Q");
  size_t n = r_.rank();
  if (n > MultiPoly::kMaxVars) throw InputError("realization rank too large for bimodule computations");
  for (size_t k = 0; k < n; ++k) vars_.push_back(MultiPoly::variable(k));
  size_t gens = r_.generators();
  images_.resize(gens);
  splits_.resize(gens);
  for (Gen s = 0; s < gens; ++s) {
    roots_.push_back(MultiPoly::linear(r_.root(s)));
    if (roots_.back().is_zero()) throw InputError("bimodule computations need alpha_s != 0");
    deltas_.push_back(roots_.back() * mpq_class(1, 2));
    for (size_t k = 0; k < n; ++k) images_[s].push_back(vars_[k] - roots_[s] * r_.coroot(s)[k]);
  }
  for (Gen s = 0; s < gens; ++s)
    for (size_t k = 0; k < n; ++k) {
      MultiPoly f = vars_[k], g = deltas_[s] * vars_[k];
      splits_[s].push_back({(f + act(s, f)) * mpq_class(1, 2), demazure(s, f), (g + act(s, g)) * mpq_class(1, 2),
                            demazure(s, g)});
    }
}

MultiPoly SoergelCalculus::act(Gen s, const MultiPoly& f) const { return f.substitute(images_[s]); }

MultiPoly SoergelCalculus::act(const Word& x, const MultiPoly& f) const {
  MultiPoly g = f;
  for (auto it = x.rbegin(); it != x.rend(); ++it) g = act(*it, g);
  return g;
}

MultiPoly SoergelCalculus::demazure(Gen s, const MultiPoly& f) const {
  return (f - act(s, f)).divide_by_linear(roots_[s]);
}

template <class T>
std::vector<Mat<T>> SoergelCalculus::extend_right(const std::vector<Mat<T>>& rho, Gen s) const {
  size_t n = rho.empty() ? 1 : rho[0].size();
  std::vector<Mat<T>> out;
  for (size_t k = 0; k < nvars(); ++k) {
    Mat<T> m = mat_zero<T>(2 * n, 2 * n);
    for (int blk = 0; blk < 4; ++blk) {
      Mat<T> b = eval_at_matrices<T>(splits_[s][k][blk], rho);
      size_t ro = (blk / 2) * n, co = (blk % 2) * n;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m[ro + i][co + j] = std::move(b[i][j]);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::shared_ptr<const BSBimodule> SoergelCalculus::bimodule(const Word& expr) const {
  {
    std::lock_guard lock(mutex_);
    auto it = bimodules_.find(expr);
    if (it != bimodules_.end()) return it->second;
  }
  for (Gen s : expr)
    if (s >= system().rank()) throw InputError("expression letter out of range");
  auto b = std::make_shared<BSBimodule>();
  b->expr = expr;
  if (expr.empty()) {
    b->degrees = {0};
    for (size_t k = 0; k < nvars(); ++k) b->right.push_back({{vars_[k]}});
  } else {
    Word prefix(expr.begin(), expr.end() - 1);
    auto base = bimodule(prefix);
    b->right = extend_right<MultiPoly>(base->right, expr.back());
    for (int c : {-1, 1})
      for (int d : base->degrees) b->degrees.push_back(d + c);
  }
  std::lock_guard lock(mutex_);
  return bimodules_.emplace(expr, std::move(b)).first->second;
}

std::vector<QMat> SoergelCalculus::specialized_right(const Word& expr, const QVec& point) const {
  std::vector<QMat> rho;
  for (size_t k = 0; k < nvars(); ++k) rho.push_back({{point.at(k)}});
  for (Gen s : expr) rho = extend_right<mpq_class>(rho, s);
  return rho;
}

BimoduleMap SoergelCalculus::identity(const Word& expr) const {
  return {expr, expr, 0, mat_identity<MultiPoly>(size_t{1} << expr.size())};
}

BimoduleMap SoergelCalculus::compose(const BimoduleMap& f, const BimoduleMap& g) const {
  if (f.target != g.source) throw InputError("compose: target and source differ");
  return {f.source, g.target, f.degree + g.degree, mat_mul(f.matrix, g.matrix)};
}

BimoduleMap SoergelCalculus::tensor(const Word& a, const BimoduleMap& f, const Word& c) const {
  auto ba = bimodule(a);
  size_t na = ba->size(), ns = f.matrix.size(), nt = f.matrix.empty() ? 0 : f.matrix[0].size();
  size_t nc = size_t{1} << c.size();
  size_t la = a.size(), ls = f.source.size(), lt = f.target.size();
  BimoduleMap out;
  out.source = a;
  out.source.insert(out.source.end(), f.source.begin(), f.source.end());
  out.source.insert(out.source.end(), c.begin(), c.end());
  out.target = a;
  out.target.insert(out.target.end(), f.target.begin(), f.target.end());
  out.target.insert(out.target.end(), c.begin(), c.end());
  out.degree = f.degree;
  out.matrix = mat_zero<MultiPoly>(na * ns * nc, na * nt * nc);
  for (size_t mu = 0; mu < ns; ++mu)
    for (size_t nu = 0; nu < nt; ++nu) {
      if (f.matrix[mu][nu].is_zero()) continue;
      PolyMat m = eval_at_matrices<MultiPoly>(f.matrix[mu][nu], ba->right);
      for (size_t x = 0; x < na; ++x)
        for (size_t y = 0; y < na; ++y) {
          if (m[x][y].is_zero()) continue;
          for (size_t g = 0; g < nc; ++g)
            out.matrix[x | (mu << la) | (g << (la + ls))][y | (nu << la) | (g << (la + lt))] = m[x][y];
        }
    }
  return out;
}

BimoduleMap SoergelCalculus::multiply_by(const MultiPoly& f, const Word& expr) const {
  if (!f.is_homogeneous()) throw InputError("polynomial map must be homogeneous");
  BimoduleMap m = identity(expr);
  for (auto& row : m.matrix)
    for (auto& x : row)
      if (!x.is_zero()) x = f;
  m.degree = f.is_zero() ? 0 : 2 * f.degree();
  return m;
}

BimoduleMap SoergelCalculus::poly_map(const MultiPoly& f) const { return multiply_by(f, {}); }

BimoduleMap SoergelCalculus::start_dot(Gen s) const {
  return {{}, {s}, 1, {{deltas_[s], MultiPoly::constant(1)}}};
}

BimoduleMap SoergelCalculus::end_dot(Gen s) const {
  return {{s}, {}, 1, {{MultiPoly::constant(1)}, {deltas_[s]}}};
}

BimoduleMap SoergelCalculus::split(Gen s) const {
  BimoduleMap m{{s}, {s, s}, -1, mat_zero<MultiPoly>(2, 4)};
  m.matrix[0][0] = MultiPoly::constant(1);
  m.matrix[1][2] = MultiPoly::constant(1);
  return m;
}

BimoduleMap SoergelCalculus::merge(Gen s) const {
  BimoduleMap m{{s, s}, {s}, -1, mat_zero<MultiPoly>(4, 2)};
  m.matrix[1][0] = MultiPoly::constant(1);
  m.matrix[3][1] = MultiPoly::constant(1);
  return m;
}

// Closed form for the braid map. Let W' be the dihedral group of s, t and
// Tr = d_{w0} : R -> R^{W'}. The map
//   phi(f_0 x f_1 x ... x f_m) = d_{s_m}(... d_{s_2}(d_{s_1}(f_0) f_1) ...) f_m
// is right R-linear and left R^{W'}-linear, so with dual bases g_u, g*_u of R
// over R^{W'} the rule b -> sum_u g*_u c_bot' phi(g_u b) is a bimodule map
// sending c_bot to c_bot'. It has degree 0, so it is j.
static std::optional<BimoduleMap> braid_closed_form(const SoergelCalculus& calc, const Word& v, const Word& w) {
  auto b = calc.bimodule(v), c = calc.bimodule(w);
  size_t n = b->size(), nv = calc.nvars();
  unsigned m = static_cast<unsigned>(v.size());
  auto trace = [&](MultiPoly f) {
    for (Gen x : v) f = calc.demazure(x, f);
    return f;
  };
  // Basis d_x(prod of positive roots) indexed by the elements of W'.
  MultiPoly prod = MultiPoly::constant(1);
  for (unsigned i = 0; i < m; ++i) prod = prod * calc.act(Word(v.begin(), v.begin() + i), calc.root(v[i]));
  std::vector<MultiPoly> g{prod};
  for (unsigned len = 1; len <= m; ++len)
    for (Gen first : {v[0], v[1]}) {
      if (len == m && first != v[0]) continue;
      MultiPoly f = prod;
      for (unsigned i = 0; i < len; ++i) f = calc.demazure(i % 2 == 0 ? first : (first == v[0] ? v[1] : v[0]), f);
      g.push_back(f);
    }
  // Dual basis: Tr(g_u g*_x) = [u == x], solved degree by degree.
  std::vector<MultiPoly> dual;
  for (size_t x = 0; x < g.size(); ++x) {
    int deg = static_cast<int>(m) - g[x].degree();
    if (deg < 0) return std::nullopt;
    auto monos = MultiPoly::monomials_of_degree(nv, static_cast<unsigned>(deg));
    std::map<std::pair<size_t, MultiPoly::Mono>, QVec> eqs;
    for (size_t u = 0; u < g.size(); ++u)
      for (size_t k = 0; k < monos.size(); ++k) {
        MultiPoly tr = trace(g[u] * MultiPoly::monomial(monos[k]));
        for (const auto& [mono, val] : tr.terms()) {
          auto& row = eqs[{u, mono}];
          row.resize(monos.size() + 1, 0);
          row[k] += val;
        }
      }
    QMat rows;
    for (size_t u = 0; u < g.size(); ++u) {
      auto it = eqs.find({u, 0});
      QVec row = it == eqs.end() ? QVec(monos.size() + 1, 0) : it->second;
      row.back() -= u == x ? 1 : 0;
      rows.push_back(std::move(row));
    }
    for (auto& [key, row] : eqs)
      if (key.second != 0) rows.push_back(std::move(row));
    auto ker = nullspace_q(rows, monos.size() + 1);
    if (ker.size() != 1 || ker[0].back() == 0) return std::nullopt;
    MultiPoly d;
    for (size_t k = 0; k < monos.size(); ++k) d.add_term(monos[k], ker[0][k] / ker[0].back());
    dual.push_back(std::move(d));
  }
  // Row 0 of rho_w(f) for monomials f, i.e. the coordinates of c_bot' f.
  using Row = std::vector<MultiPoly>;
  std::map<MultiPoly::Mono, Row> rows;
  Row unit(n);
  unit[0] = MultiPoly::constant(1);
  rows.emplace(0, unit);
  auto row_of = [&](MultiPoly::Mono mono) -> const Row& {
    auto it = rows.find(mono);
    if (it != rows.end()) return it->second;
    std::vector<MultiPoly::Mono> chain{mono};
    while (!rows.count(chain.back())) {
      size_t k = 0;
      while (MultiPoly::exponent(chain.back(), k) == 0) ++k;
      chain.push_back(chain.back() - MultiPoly::unit(k));
    }
    for (size_t i = chain.size() - 1; i-- > 0;) {
      MultiPoly::Mono cur = chain[i], prev = chain[i + 1];
      size_t k = 0;
      while (MultiPoly::exponent(cur, k) == MultiPoly::exponent(prev, k)) ++k;
      const Row& r = rows.at(prev);
      Row out(n);
      for (size_t a = 0; a < n; ++a) {
        if (r[a].is_zero()) continue;
        for (size_t col = 0; col < n; ++col)
          if (!c->right[k][a][col].is_zero()) out[col] += r[a] * c->right[k][a][col];
      }
      rows.emplace(cur, std::move(out));
    }
    return rows.at(mono);
  };
  BimoduleMap j{v, w, 0, mat_zero<MultiPoly>(n, n)};
  for (size_t l = 0; l < n; ++l)
    for (size_t u = 0; u < g.size(); ++u) {
      MultiPoly f = g[u];
      for (unsigned i = 0; i < m; ++i) {
        f = calc.demazure(v[i], f);
        if (l >> i & 1) f = f * calc.half_root(v[i]);
      }
      for (const auto& [mono, val] : f.terms()) {
        const Row& r = row_of(mono);
        for (size_t col = 0; col < n; ++col)
          if (!r[col].is_zero()) j.matrix[l][col] += dual[u] * r[col] * val;
      }
    }
  for (size_t col = 0; col < n; ++col)
    if (j.matrix[0][col] != MultiPoly::constant(col == 0 ? 1 : 0)) return std::nullopt;
  if (!calc.is_bimodule_map(j)) return std::nullopt;
  return j;
}

BimoduleMap SoergelCalculus::braid(Gen s, Gen t) const {
  {
    std::lock_guard lock(mutex_);
    auto it = braids_.find({s, t});
    if (it != braids_.end()) return it->second;
  }
  if (s == t) throw InputError("braid map needs two distinct generators");
  int m = system().order(s, t);
  if (m == CoxeterSystem::kInfinity) throw InputError("braid map needs m_st finite");
  Word v = alternating(s, t, m), w = alternating(t, s, m);
  std::optional<BimoduleMap> j = braid_closed_form(*this, v, w);
  if (!j) {
    auto basis = hom_space(v, w, 0);
    if (basis.size() != 1)
      throw InconsistencyError("degenerate Hom space for the braid map: dimension " + std::to_string(basis.size()));
    j = std::move(basis[0]);
    mpq_class c = j->matrix[0][0].constant_term();
    if (c == 0) throw InconsistencyError("braid map does not preserve the bottom generator");
    for (auto& row : j->matrix)
      for (auto& x : row) x *= 1 / c;
  }
  std::lock_guard lock(mutex_);
  return braids_.emplace(std::make_pair(s, t), std::move(*j)).first->second;
}

BimoduleMap SoergelCalculus::generator(GeneratorKind kind, Gen s, Gen t, const MultiPoly& f) const {
  switch (kind) {
    case GeneratorKind::Poly:
      return poly_map(f);
    case GeneratorKind::StartDot:
      return start_dot(s);
    case GeneratorKind::EndDot:
      return end_dot(s);
    case GeneratorKind::Split:
      return split(s);
    case GeneratorKind::Merge:
      return merge(s);
    case GeneratorKind::Braid:
      return braid(s, t);
  }
  throw InputError("unknown generator kind");
}

bool SoergelCalculus::is_bimodule_map(const BimoduleMap& f) const {
  auto b = bimodule(f.source), c = bimodule(f.target);
  if (f.matrix.size() != b->size()) return false;
  for (const auto& row : f.matrix)
    if (row.size() != c->size()) return false;
  for (size_t i = 0; i < b->size(); ++i)
    for (size_t j = 0; j < c->size(); ++j) {
      const MultiPoly& x = f.matrix[i][j];
      if (x.is_zero()) continue;
      int twice = b->degrees[i] + f.degree - c->degrees[j];
      if (twice < 0 || twice % 2 != 0 || !x.is_homogeneous() || 2 * x.degree() != twice) return false;
    }
  for (size_t k = 0; k < nvars(); ++k)
    if (mat_mul(b->right[k], f.matrix) != mat_mul(f.matrix, c->right[k])) return false;
  return true;
}

namespace {

// Unknowns of a degree-d Hom system: entry (i, j) is a combination of the
// monomials of degree (deg b_i + d - deg c_j) / 2.
struct HomLayout {
  size_t rows = 0, cols = 0, unknowns = 0;
  std::vector<std::vector<long>> offset;  // -1 when the entry must vanish
  std::vector<std::vector<const std::vector<MultiPoly::Mono>*>> monos;
  std::map<unsigned, std::vector<MultiPoly::Mono>> by_degree;

  long index(size_t i, size_t j, MultiPoly::Mono m) const {
    if (offset[i][j] < 0) return -1;
    const auto& ms = *monos[i][j];
    auto it = std::lower_bound(ms.begin(), ms.end(), m);
    if (it == ms.end() || *it != m) return -1;
    return offset[i][j] + (it - ms.begin());
  }
};

HomLayout make_layout(const BSBimodule& b, const BSBimodule& c, int d, size_t nvars) {
  HomLayout l;
  l.rows = b.size();
  l.cols = c.size();
  l.offset.assign(l.rows, std::vector<long>(l.cols, -1));
  l.monos.assign(l.rows, std::vector<const std::vector<MultiPoly::Mono>*>(l.cols, nullptr));
  for (size_t i = 0; i < l.rows; ++i)
    for (size_t j = 0; j < l.cols; ++j) {
      int twice = b.degrees[i] + d - c.degrees[j];
      if (twice < 0 || twice % 2 != 0) continue;
      unsigned e = twice / 2;
      auto it = l.by_degree.find(e);
      if (it == l.by_degree.end()) it = l.by_degree.emplace(e, MultiPoly::monomials_of_degree(nvars, e)).first;
      l.offset[i][j] = static_cast<long>(l.unknowns);
      l.monos[i][j] = &it->second;
      l.unknowns += it->second.size();
    }
  return l;
}

struct HomSolution {
  HomLayout layout;
  std::vector<SparseRow> basis;
  std::vector<size_t> free_columns;
};

}  // namespace

static HomSolution solve_hom(const SoergelCalculus& calc, const Word& v, const Word& w, int d) {
  auto b = calc.bimodule(v), c = calc.bimodule(w);
  HomSolution sol{make_layout(*b, *c, d, calc.nvars()), {}, {}};
  const HomLayout& l = sol.layout;
  if (l.unknowns == 0) return sol;
  std::vector<SparseRow> rows;
  std::map<MultiPoly::Mono, std::map<size_t, mpq_class>> eq;
  auto accumulate = [&](const MultiPoly& coeff, size_t i, size_t j, int sign) {
    if (l.offset[i][j] < 0) return;
    const auto& ms = *l.monos[i][j];
    for (const auto& [m, c] : coeff.terms())
      for (size_t u = 0; u < ms.size(); ++u) {
        mpq_class& slot = eq[m + ms[u]][l.offset[i][j] + u];
        if (sign > 0)
          slot += c;
        else
          slot -= c;
      }
  };
  for (size_t k = 0; k < calc.nvars(); ++k) {
    const PolyMat& rb = b->right[k];
    const PolyMat& rc = c->right[k];
    for (size_t i = 0; i < l.rows; ++i)
      for (size_t j = 0; j < l.cols; ++j) {
        // (rho_v(x_k) F - F rho_w(x_k))_{ij} = 0
        eq.clear();
        for (size_t m = 0; m < l.rows; ++m)
          if (!rb[i][m].is_zero()) accumulate(rb[i][m], m, j, +1);
        for (size_t m = 0; m < l.cols; ++m)
          if (!rc[m][j].is_zero()) accumulate(rc[m][j], i, m, -1);
        for (auto& [mono, row] : eq) {
          SparseRow sr;
          for (auto& [col, val] : row)
            if (val != 0) sr.emplace_back(col, std::move(val));
          if (!sr.empty()) rows.push_back(std::move(sr));
        }
      }
  }
  SparseKernel k = sparse_kernel(rows, l.unknowns);
  sol.basis = std::move(k.basis);
  sol.free_columns = std::move(k.free_columns);
  return sol;
}

std::vector<BimoduleMap> SoergelCalculus::hom_space(const Word& v, const Word& w, int d) const {
  HomSolution sol = solve_hom(*this, v, w, d);
  const HomLayout& l = sol.layout;
  // Column index -> (i, j, monomial).
  std::vector<std::tuple<size_t, size_t, MultiPoly::Mono>> where(l.unknowns);
  for (size_t i = 0; i < l.rows; ++i)
    for (size_t j = 0; j < l.cols; ++j) {
      if (l.offset[i][j] < 0) continue;
      const auto& ms = *l.monos[i][j];
      for (size_t u = 0; u < ms.size(); ++u) where[l.offset[i][j] + u] = {i, j, ms[u]};
    }
  std::vector<BimoduleMap> out;
  for (const auto& vec : sol.basis) {
    BimoduleMap f{v, w, d, mat_zero<MultiPoly>(l.rows, l.cols)};
    for (const auto& [col, val] : vec) {
      auto [i, j, m] = where[col];
      f.matrix[i][j].add_term(m, val);
    }
    out.push_back(std::move(f));
  }
  return out;
}

LaurentPoly SoergelCalculus::hom_graded_rank(const Word& v, const Word& w) const {
  int bound = static_cast<int>(v.size() + w.size());
  LaurentPoly rank;
  std::optional<HomSolution> prev;  // solution in degree d - 2
  for (int d = -bound; d <= bound; ++d) {
    if ((static_cast<int>(v.size() + w.size()) + d) % 2 != 0) continue;
    HomSolution cur = solve_hom(*this, v, w, d);
    size_t dim = cur.basis.size();
    size_t lowered = 0;
    if (prev && !prev->basis.empty() && dim > 0) {
      // x_k * F for F in Hom_{d-2}, in coordinates of the reduced basis of
      // Hom_d (its values on the free columns).
      std::map<size_t, size_t> free_pos;
      for (size_t i = 0; i < cur.free_columns.size(); ++i) free_pos[cur.free_columns[i]] = i;
      const HomLayout& pl = prev->layout;
      std::vector<std::tuple<size_t, size_t, MultiPoly::Mono>> where(pl.unknowns);
      for (size_t i = 0; i < pl.rows; ++i)
        for (size_t j = 0; j < pl.cols; ++j) {
          if (pl.offset[i][j] < 0) continue;
          const auto& ms = *pl.monos[i][j];
          for (size_t u = 0; u < ms.size(); ++u) where[pl.offset[i][j] + u] = {i, j, ms[u]};
        }
      QMat lowered_rows;
      for (const auto& vec : prev->basis)
        for (size_t k = 0; k < nvars(); ++k) {
          QVec row(dim, 0);
          for (const auto& [col, val] : vec) {
            auto [i, j, m] = where[col];
            long idx = cur.layout.index(i, j, m + MultiPoly::unit(k));
            if (idx < 0) throw InconsistencyError("degree bookkeeping in Hom space");
            auto fp = free_pos.find(static_cast<size_t>(idx));
            if (fp != free_pos.end()) row[fp->second] += val;
          }
          lowered_rows.push_back(std::move(row));
        }
      lowered = rank_q(std::move(lowered_rows));
    }
    if (dim > lowered) rank.add_term(d, static_cast<long>(dim - lowered));
    prev = std::move(cur);
  }
  return rank;
}

}  // namespace pcanon
