#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include <json.hpp>

#include "pcanon/cartan.hpp"
#include "pcanon/coxeter.hpp"
#include "pcanon/linalg.hpp"

namespace pcanon {

class CoefficientRing {
 public:
  enum class Kind { Z, ZHalf, Q, Fp };

  static CoefficientRing integers() { return {Kind::Z, 0}; }
  static CoefficientRing integers_half() { return {Kind::ZHalf, 0}; }
  static CoefficientRing rationals() { return {Kind::Q, 0}; }
  static CoefficientRing finite_field(unsigned long p);
  // "Z", "Z[1/2]", "Q" or "F5".
  static CoefficientRing parse(const std::string& tag);

  Kind kind() const { return kind_; }
  unsigned long characteristic() const { return p_; }
  bool is_field() const { return kind_ == Kind::Q || kind_ == Kind::Fp; }
  bool is_unit(const mpq_class& x) const;
  bool contains(const mpq_class& x) const;
  // Canonical representative (residue in [0, p) for F_p).
  mpq_class canonical(const mpq_class& x) const;
  bool is_zero(const mpq_class& x) const { return canonical(x) == 0; }
  std::string tag() const;

  friend bool operator==(const CoefficientRing&, const CoefficientRing&) = default;

 private:
  CoefficientRing(Kind k, unsigned long p) : kind_(k), p_(p) {}
  Kind kind_ = Kind::Q;
  unsigned long p_ = 0;
};

// (V, {alpha_s^vee}, {alpha_s}) over a coefficient ring. Vectors of V and
// covectors of V* are coordinate arrays in dual bases.
class Realization {
 public:
  Realization(CoefficientRing ring, CoxeterSystem coxeter, std::vector<QVec> coroots, std::vector<QVec> roots);

  const CoefficientRing& ring() const { return ring_; }
  const CoxeterSystem& coxeter() const { return coxeter_; }
  size_t rank() const { return rank_; }
  size_t generators() const { return roots_.size(); }
  const QVec& coroot(Gen s) const { return coroots_[s]; }
  const QVec& root(Gen s) const { return roots_[s]; }
  // alpha_t(alpha_s^vee).
  mpq_class pairing(Gen s, Gen t) const;
  // Matrix of pairings [alpha_j(alpha_i^vee)].
  QMat cartan_pairing() const;

  QVec act_on_vector(Gen s, const QVec& x) const;
  QVec act_on_covector(Gen s, const QVec& f) const;

  nlohmann::json to_json() const;
  static Realization from_json(const nlohmann::json& j);

  friend bool operator==(const Realization& a, const Realization& b) {
    return a.ring_ == b.ring_ && a.coxeter_ == b.coxeter_ && a.coroots_ == b.coroots_ && a.roots_ == b.roots_;
  }

 private:
  void validate() const;

  CoefficientRing ring_;
  CoxeterSystem coxeter_;
  size_t rank_ = 0;
  std::vector<QVec> coroots_;
  std::vector<QVec> roots_;
};

// Z' = Z when every root and coroot of the datum is primitive, else Z[1/2].
bool datum_needs_half(const KacMoodyRootDatum& datum);
// Throws InputError("... requires 2 invertible") when the ring cannot
// receive Z'.
Realization cartan_realization(const KacMoodyRootDatum& datum, const CoefficientRing& ring);
bool check_demazure_surjectivity(const Realization& r);
Realization dual_realization(const Realization& r);

enum class Operand { Vector, Covector };
QVec w_action(const Realization& r, Gen s, const QVec& x, Operand kind);

std::vector<long> symmetrizer(const CartanMatrix& gcm);

struct PhiIsomorphism {
  QMat matrix;          // row i: image of the i-th basis vector of V in V*
  std::vector<mpq_class> b;  // phi(alpha_s^vee) = b_s alpha_s
  QVec apply(const QVec& x) const;
};
// Requires a finite-type Cartan pairing with coroots forming a basis of V.
PhiIsomorphism phi_isomorphism(const Realization& r);

// Realization of the affine Weyl group of G, with finite Cartan matrix `finite`,
// V = X_*(T) in fundamental coweight coordinates x_i = <x, alpha_i>.
// Generator order follows AffineWeylGroup (s0 first unless `order` says otherwise).
Realization affine_realization(const CartanMatrix& finite, const CoefficientRing& ring,
                               const std::vector<std::string>& order = {});

// Faithful realization over Q used for bimodule computations: roots are
// linearly independent, so the localisation at a regular point works for
// affine types too.
Realization faithful_realization(const CartanMatrix& gcm);

}  // namespace pcanon
