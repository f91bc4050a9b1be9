#include "pcanon/tilting.hpp"

#include <algorithm>
#include <cctype>
#include <exception>
#include <set>
#include <string>

#include "pcanon/errors.hpp"

namespace pcanon {

RootDatumF::RootDatumF(const CartanMatrix& g) : cartan(g), roots(g) {
  if (g.components().size() != 1) throw InputError("root datum needs an indecomposable finite root system");
}

RootDatumF RootDatumF::named(std::string_view type) {
  std::string t(type);
  std::string up = t;
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  auto rank_after = [&](size_t prefix) {
    try {
      size_t used = 0;
      long n = std::stol(up.substr(prefix), &used);
      if (used != up.size() - prefix) throw std::invalid_argument("trailing");
      return n;
    } catch (const std::exception&) {
      throw InputError("unknown group '" + t + "'");
    }
  };
  if (up.rfind("SL", 0) == 0) {
    long n = rank_after(2);
    if (n < 2) throw InputError("SL_n needs n >= 2");
    return RootDatumF(CartanMatrix::named("A" + std::to_string(n - 1)));
  }
  if (up.rfind("SP", 0) == 0) {
    long n = rank_after(2);
    if (n < 4 || n % 2) throw InputError("Sp_n needs even n >= 4");
    return RootDatumF(CartanMatrix::named("C" + std::to_string(n / 2)));
  }
  return RootDatumF(CartanMatrix::named(t));
}

bool RootDatumF::is_dominant(const Weight& mu) const {
  return std::all_of(mu.begin(), mu.end(), [](long x) { return x >= 0; });
}

long RootDatumF::depth(const Weight& mu) const {
  const IntVec& c = roots.highest_root_coroot();
  long d = 0;
  for (size_t i = 0; i < rank(); ++i) d += c[i] * mu.at(i);
  return d;
}

AffineWeylGroup RootDatumF::affine_weyl_group(const std::vector<std::string>& order) const {
  return AffineWeylGroup(cartan.transposed(), order);
}

Weight dot_action(const AffineWeylGroup& W, const Element& x, unsigned long p, const Weight& mu) {
  AffineMap g = W.to_affine_map(x);
  size_t n = W.finite_rank();
  if (mu.size() != n) throw InputError("weight has the wrong rank");
  Weight shifted(n);
  for (size_t i = 0; i < n; ++i) shifted[i] = mu[i] + 1;
  Weight out(n);
  for (size_t i = 0; i < n; ++i) {
    long y = static_cast<long>(p) * g.b[i] - 1;
    for (size_t j = 0; j < n; ++j) y += g.M[i][j] * shifted[j];
    out[i] = y;
  }
  return out;
}

Weight dot_action(const AffineWeylGroup& W, const Element& finite_part, const std::vector<long>& lambda,
                  unsigned long p, const Weight& mu) {
  for (Gen g : finite_part.word())
    if (g == W.affine_generator()) throw InputError("finite part must lie in W_f");
  size_t n = W.finite_rank();
  if (mu.size() != n || lambda.size() != n) throw InputError("weight has the wrong rank");
  std::vector<long> lam = W.coroot_to_coords(lambda);
  Weight arg(n);
  for (size_t i = 0; i < n; ++i) arg[i] = mu[i] + static_cast<long>(p) * lam[i] + 1;
  AffineMap g = W.to_affine_map(finite_part);
  Weight out = g.apply(arg);
  for (long& y : out) y -= 1;
  return out;
}

mpz_class weyl_dimension(const RootDatumF& datum, const Weight& lambda) {
  if (lambda.size() != datum.rank() || !datum.is_dominant(lambda))
    throw InputError("Weyl dimension needs a dominant weight");
  mpq_class d = 1;
  for (const IntVec& c : datum.roots.positive_coroots()) {
    long num = 0, den = 0;
    for (size_t i = 0; i < datum.rank(); ++i) {
      num += c[i] * (lambda[i] + 1);
      den += c[i];
    }
    d *= mpq_class(num, den);
  }
  d.canonicalize();
  if (d.get_den() != 1) throw InconsistencyError("Weyl dimension is not an integer");
  return d.get_num();
}

TiltingCharacters::TiltingCharacters(const RootDatumF& datum, unsigned long p, Exec exec,
                                     const std::vector<std::string>& order)
    : datum_(datum), p_(p), exec_(exec), affine_(datum.affine_weyl_group(order)) {
  check_characteristic(p);
  if (p == 0 || static_cast<long>(p) <= datum_.coxeter_number())
    throw InputError("tilting characters need a prime p > h = " + std::to_string(datum_.coxeter_number()));
  basis_ = std::make_unique<PCanonicalBasis>(affine_.group().system().gcm(), exec);
}

std::vector<DominantElement> TiltingCharacters::dominant_f_elements(long bound) const {
  const CoxeterGroup& W = affine_.group();
  const std::vector<Gen>& f = finite_generators();
  Weight zero(datum_.rank(), 0);
  // Prefixes of elements of ^f W stay in ^f W, and going up inside ^f W
  // only adds positive roots to w . 0, so the search can prune by depth.
  std::vector<DominantElement> out;
  std::vector<Element> layer{W.identity()};
  while (!layer.empty()) {
    std::set<Element> next;
    for (const Element& w : layer) {
      Weight lam = dot(w, zero);
      if (!datum_.is_dominant(lam)) throw InconsistencyError("w . 0 is not dominant for w in ^f W");
      if (datum_.depth(lam) > bound) continue;
      out.push_back({w, lam});
      for (Gen s = 0; s < W.rank(); ++s) {
        if (W.is_right_descent(w, s)) continue;
        Element ws = W.mul_gen(w, s);
        if (W.is_min_coset_rep(ws, f)) next.insert(ws);
      }
    }
    layer.assign(next.begin(), next.end());
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.w < b.w; });
  return out;
}

unsigned long TiltingCharacters::multiplicity(const Element& w, const Element& y) const {
  mpz_class n = basis_->antispherical_pkl(y, w, p_, finite_generators()).at_one();
  if (n < 0 || !n.fits_ulong_p()) throw InconsistencyError("tilting multiplicity out of range");
  return n.get_ui();
}

std::vector<TiltingCharacterRow> TiltingCharacters::table(long bound) const {
  std::vector<DominantElement> dom = dominant_f_elements(bound);
  size_t max_len = 0;
  for (const auto& d : dom) max_len = std::max(max_len, d.w.length());
  // Fill the p-canonical basis stratum by stratum first; the rows are cheap.
  basis_->entries_up_to(p_, max_len);
  std::vector<TiltingCharacterRow> rows(dom.size());
  std::vector<std::exception_ptr> errors(dom.size());
  Weight zero(datum_.rank(), 0);
  long n = static_cast<long>(dom.size());
#pragma omp parallel for schedule(dynamic) if (exec_ == Exec::Parallel)
  for (long i = 0; i < n; ++i) {
    try {
      TiltingCharacterRow& row = rows[i];
      row.w = dom[i].w;
      row.highest_weight = dom[i].lambda;
      row.dimension = 0;
      AntisphericalElement image = basis_->antispherical_image(row.w, p_, finite_generators());
      for (const auto& [y, c] : image.value.terms()) {
        mpz_class m = c.at_one();
        if (m < 0 || !m.fits_ulong_p()) throw InconsistencyError("tilting multiplicity out of range");
        if (m == 0) continue;
        Weight mu = dot(y, zero);
        row.dimension += m * weyl_dimension(datum_, mu);
        row.multiplicities.push_back({y, mu, m.get_ui()});
      }
      if (row.multiplicities.empty() || !(row.multiplicities.back().y == row.w) ||
          row.multiplicities.back().multiplicity != 1)
        throw InconsistencyError("tilting character is not unitriangular");
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return rows;
}

}  // namespace pcanon
