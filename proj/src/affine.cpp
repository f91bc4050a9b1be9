#include "pcanon/affine.hpp"

#include <numeric>

#include "pcanon/errors.hpp"

namespace pcanon {

AffineMap AffineMap::identity(size_t n) {
  AffineMap g;
  g.M.assign(n, std::vector<long>(n, 0));
  for (size_t i = 0; i < n; ++i) g.M[i][i] = 1;
  g.b.assign(n, 0);
  return g;
}

AffineMap AffineMap::then(const AffineMap& outer) const {
  size_t n = b.size();
  AffineMap r;
  r.M.assign(n, std::vector<long>(n, 0));
  r.b = outer.b;
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < n; ++k) {
      if (outer.M[i][k] == 0) continue;
      r.b[i] += outer.M[i][k] * b[k];
      for (size_t j = 0; j < n; ++j) r.M[i][j] += outer.M[i][k] * M[k][j];
    }
  }
  return r;
}

std::vector<long> AffineMap::apply(const std::vector<long>& x) const {
  std::vector<long> y = b;
  for (size_t i = 0; i < y.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j) y[i] += M[i][j] * x[j];
  return y;
}

namespace {

CoxeterSystem ordered_affine_system(const CartanMatrix& finite, const std::vector<std::string>& order) {
  CartanMatrix aff = finite.affinization();
  if (order.empty()) return CoxeterSystem(aff);
  std::vector<size_t> perm;
  for (const auto& lab : order) {
    auto i = aff.index_of(lab);
    if (!i) throw InputError("unknown generator '" + lab + "' in ordering");
    perm.push_back(*i);
  }
  return CoxeterSystem(aff.reordered(perm));
}

}  // namespace

AffineWeylGroup::AffineWeylGroup(const CartanMatrix& finite, const std::vector<std::string>& order)
    : finite_(finite), roots_(finite), group_(ordered_affine_system(finite, order)) {
  if (finite_.components().size() != 1)
    throw InputError("affine Weyl group needs an indecomposable finite root system");
  const CartanMatrix& aff = group_.system().gcm();
  CartanMatrix base = finite_.affinization();
  role_.assign(aff.rank(), -1);
  finite_gens_.assign(finite_.rank(), 0);
  for (size_t g = 0; g < aff.rank(); ++g) {
    size_t orig = *base.index_of(aff.labels()[g]);
    if (orig == 0) {
      affine_gen_ = static_cast<Gen>(g);
    } else {
      role_[g] = static_cast<int>(orig - 1);
      finite_gens_[orig - 1] = static_cast<Gen>(g);
    }
  }
}

std::vector<long> AffineWeylGroup::coroot_to_coords(const std::vector<long>& c) const {
  size_t n = finite_rank();
  std::vector<long> x(n, 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) x[i] += c[k] * finite_(k, i);
  return x;
}

AffineMap AffineWeylGroup::generator_map(Gen s) const {
  size_t n = finite_rank();
  AffineMap g = AffineMap::identity(n);
  if (role_.at(s) >= 0) {
    size_t j = role_[s];
    // x_i -> x_i - a_ji x_j
    for (size_t i = 0; i < n; ++i) g.M[i][j] -= finite_(j, i);
    return g;
  }
  const IntVec& theta = roots_.highest_root();
  std::vector<long> tv = coroot_to_coords(roots_.highest_root_coroot());
  // x -> x - (<x, theta> - 1) theta^vee
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) g.M[i][j] -= tv[i] * theta[j];
  g.b = tv;
  return g;
}

AffineMap AffineWeylGroup::to_affine_map(const Element& w) const {
  AffineMap g = AffineMap::identity(finite_rank());
  for (auto it = w.word().rbegin(); it != w.word().rend(); ++it) g = g.then(generator_map(*it));
  return g;
}

Element AffineWeylGroup::from_affine_map(const AffineMap& g) const {
  size_t n = finite_rank();
  long h = roots_.coxeter_number();
  const IntVec& theta = roots_.highest_root();
  std::vector<long> tv = coroot_to_coords(roots_.highest_root_coroot());
  // Scaled image of the interior point rho/h.
  std::vector<long> X(n, 0);
  for (size_t i = 0; i < n; ++i) {
    X[i] = h * g.b[i];
    for (size_t j = 0; j < n; ++j) X[i] += g.M[i][j];
  }
  Word word;
  for (size_t steps = 0;; ++steps) {
    if (steps > 1000000) throw ResourceError("alcove walk did not terminate");
    bool moved = false;
    for (size_t j = 0; j < n; ++j) {
      if (X[j] < 0) {
        long xj = X[j];
        for (size_t i = 0; i < n; ++i) X[i] -= finite_(j, i) * xj;
        word.push_back(finite_gens_[j]);
        moved = true;
        break;
      }
    }
    if (moved) continue;
    long t = 0;
    for (size_t j = 0; j < n; ++j) t += theta[j] * X[j];
    if (t > h) {
      for (size_t i = 0; i < n; ++i) X[i] -= (t - h) * tv[i];
      word.push_back(affine_gen_);
      continue;
    }
    break;
  }
  Element w = group_.normal_form(word);
  if (!(to_affine_map(w) == g)) throw InputError("affine map is not an element of the affine Weyl group");
  return w;
}

AffineWeylGroup::Decomposition AffineWeylGroup::decompose(const Element& x) const {
  AffineMap g = to_affine_map(x);
  AffineMap lin = g;
  std::fill(lin.b.begin(), lin.b.end(), 0);
  Element w = from_affine_map(lin);
  AffineMap winv = to_affine_map(group_.inverse(w));
  size_t n = finite_rank();
  std::vector<long> lam(n, 0);  // x-coordinates of lambda = w^{-1} b
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) lam[i] += winv.M[i][j] * g.b[j];
  // Solve sum_k c_k a_ki = lam_i.
  std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n + 1));
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < n; ++k) m[i][k] = finite_(k, i);
    m[i][n] = lam[i];
  }
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (m[piv][c] == 0) ++piv;
    std::swap(m[piv], m[c]);
    for (size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      mpq_class f = m[i][c] / m[c][c];
      for (size_t k = c; k <= n; ++k) m[i][k] -= f * m[c][k];
    }
  }
  std::vector<long> coroot(n);
  for (size_t i = 0; i < n; ++i) {
    mpq_class v = m[i][n] / m[i][i];
    if (v.get_den() != 1) throw InconsistencyError("translation part is not in the coroot lattice");
    coroot[i] = mpz_class(v.get_num()).get_si();
  }
  return {w, coroot};
}

Element AffineWeylGroup::compose(const Element& finite_part, const std::vector<long>& translation) const {
  for (Gen g : finite_part.word())
    if (g == affine_gen_) throw InputError("finite part must lie in W_f");
  AffineMap g = to_affine_map(finite_part);
  std::vector<long> lam = coroot_to_coords(translation);
  size_t n = finite_rank();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) g.b[i] += g.M[i][j] * lam[j];
  return from_affine_map(g);
}

}  // namespace pcanon
