#pragma once

#include <gmpxx.h>

#include <memory>
#include <string_view>
#include <vector>

#include "pcanon/affine.hpp"
#include "pcanon/cartan.hpp"
#include "pcanon/pcanonical.hpp"

namespace pcanon {

// Weights in fundamental weight coordinates mu_i = <mu, alpha_i^vee>.
using Weight = std::vector<long>;

// Finite root datum of G with simply connected derived subgroup. The
// Cartan matrix is that of G (a_ij = <alpha_j, alpha_i^vee>).
struct RootDatumF {
  CartanMatrix cartan;
  FiniteRootSystem roots;

  explicit RootDatumF(const CartanMatrix& g);
  // Accepts "SL2", "SL3", ... as well as Cartan types such as "B2".
  static RootDatumF named(std::string_view type);

  size_t rank() const { return cartan.rank(); }
  Weight rho() const { return Weight(rank(), 1); }
  long coxeter_number() const { return roots.coxeter_number(); }
  bool is_dominant(const Weight& mu) const;
  // <mu, alpha_0^vee> for the highest root alpha_0.
  long depth(const Weight& mu) const;
  // W = W_f ⋉ ZΦ acting on weights. It is built from the dual root system,
  // whose coroot lattice is the root lattice of G.
  AffineWeylGroup affine_weyl_group(const std::vector<std::string>& order = {}) const;
};

// x ._p mu for x in the affine Weyl group of `datum`.
Weight dot_action(const AffineWeylGroup& W, const Element& x, unsigned long p, const Weight& mu);
// (w t_lambda) ._p mu = w(mu + p lambda + rho) - rho with w in W_f and
// lambda in simple root coordinates.
Weight dot_action(const AffineWeylGroup& W, const Element& finite_part, const std::vector<long>& lambda,
                  unsigned long p, const Weight& mu);

// Weyl dimension formula; throws InputError unless lambda is dominant.
mpz_class weyl_dimension(const RootDatumF& datum, const Weight& lambda);

struct DominantElement {
  Element w;
  Weight lambda;
};

struct NablaMultiplicity {
  Element y;
  Weight weight;
  unsigned long multiplicity = 0;
};

struct TiltingCharacterRow {
  Element w;
  Weight highest_weight;
  // Nonzero (T(w . 0) : nabla(y . 0)), ordered by y in ShortLex order.
  std::vector<NablaMultiplicity> multiplicities;
  mpz_class dimension;
};

// Characters of the tilting modules in the principal block of G in
// characteristic p > h, read off from the antispherical p-canonical basis
// at v = 1.
class TiltingCharacters {
 public:
  // `order` optionally fixes the generator order of the affine Weyl group.
  TiltingCharacters(const RootDatumF& datum, unsigned long p, Exec exec = Exec::Parallel,
                    const std::vector<std::string>& order = {});

  const RootDatumF& datum() const { return datum_; }
  unsigned long characteristic() const { return p_; }
  const AffineWeylGroup& affine_group() const { return affine_; }
  const PCanonicalBasis& basis() const { return *basis_; }
  const std::vector<Gen>& finite_generators() const { return affine_.finite_generators(); }

  Weight dot(const Element& x, const Weight& mu) const { return dot_action(affine_, x, p_, mu); }
  // Every w in ^f W with w . 0 dominant and depth(w . 0) <= bound, in
  // ShortLex order.
  std::vector<DominantElement> dominant_f_elements(long bound) const;
  // (T(w . 0) : nabla(y . 0)) for w, y in ^f W.
  unsigned long multiplicity(const Element& w, const Element& y) const;
  std::vector<TiltingCharacterRow> table(long bound) const;

 private:
  RootDatumF datum_;
  unsigned long p_;
  Exec exec_;
  AffineWeylGroup affine_;
  std::unique_ptr<PCanonicalBasis> basis_;
};

}  // namespace pcanon
