#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "pcanon/hecke.hpp"
#include "pcanon/lightleaves.hpp"
#include "pcanon/soergel.hpp"

namespace pcanon {

// Kernels that process independent elements run either on one thread or
// through OpenMP. Results are identical.
enum class Exec { Serial, Parallel };

// Throws InputError unless p is 0 or a prime.
void check_characteristic(unsigned long p);

struct PCanonicalEntry {
  Element w;
  unsigned long p = 0;
  std::map<Element, LaurentPoly> expansion_in_kl;
  HeckeElement expansion_in_std;
};

struct AntisphericalKL {
  Element y;
  Element w;
  unsigned long p = 0;
  LaurentPoly poly;
};

// The p-canonical basis of the Hecke algebra of a Coxeter system. For w with
// ShortLex word w_, B_{w_} splits as the sum over x of B_x^{m_x} where m_x
// is the graded rank of the intersection forms at x reduced mod p, so
// pb_w = H(w_) - sum_{x < w} m_x pb_x. Forms are computed once over Q and
// shared by every p. Thread safe.
class PCanonicalBasis {
 public:
  explicit PCanonicalBasis(const CartanMatrix& gcm, Exec exec = Exec::Parallel);

  const CoxeterGroup& group() const { return W_; }
  const HeckeAlgebra& hecke() const { return H_; }
  const SoergelCalculus& calculus() const { return calc_; }
  Exec exec() const { return exec_; }

  const IntersectionForms& forms(const Element& w) const;
  // x -> graded multiplicity of B_x in B_{w_} over a field of characteristic p.
  std::map<Element, LaurentPoly> summand_multiplicities(const Element& w, unsigned long p) const;

  PCanonicalEntry entry(const Element& w, unsigned long p) const;
  // Entries for every element of length <= max_length, in ShortLex order.
  std::vector<PCanonicalEntry> entries_up_to(unsigned long p, size_t max_length) const;

  // Image of pb_w in the antispherical module for J (any w).
  AntisphericalElement antispherical_image(const Element& w, unsigned long p, const std::vector<Gen>& J) const;
  // Coefficient of N_y in the image of pb_w; y and w must lie in ^J W.
  LaurentPoly antispherical_pkl(const Element& y, const Element& w, unsigned long p,
                                const std::vector<Gen>& J) const;
  // Nonzero polynomials for w in ^J W with l(w) <= max_length, ordered by
  // (w, y) in ShortLex order.
  std::vector<AntisphericalKL> pkl_table(unsigned long p, size_t max_length, const std::vector<Gen>& J) const;

 private:
  // Makes sure every element of `elems` (closed downwards in Bruhat order)
  // has an entry, one length stratum at a time.
  void fill(std::vector<Element> elems, unsigned long p) const;
  PCanonicalEntry compute_entry(const Element& w, unsigned long p) const;

  CoxeterGroup W_;
  HeckeAlgebra H_;
  SoergelCalculus calc_;
  Exec exec_;

  mutable std::shared_mutex forms_mutex_;
  mutable std::map<Element, std::shared_ptr<const IntersectionForms>> forms_;
  mutable std::shared_mutex entries_mutex_;
  mutable std::map<std::pair<unsigned long, Element>, PCanonicalEntry> entries_;
};

}  // namespace pcanon
