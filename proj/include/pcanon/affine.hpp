#pragma once

#include <string>
#include <vector>

#include "pcanon/cartan.hpp"
#include "pcanon/coxeter.hpp"

namespace pcanon {

// x -> M x + b on coordinates x_i = <x, alpha_i>.
struct AffineMap {
  std::vector<std::vector<long>> M;
  std::vector<long> b;

  static AffineMap identity(size_t n);
  AffineMap then(const AffineMap& outer) const;  // outer o this
  std::vector<long> apply(const std::vector<long>& x) const;
  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

// W = W_f ⋉ ZΦ^vee for a finite root system Φ (the Cartan matrix of G),
// acting on the real span of the coroots through the coordinates
// x_i = <x, alpha_i>. The simple reflections are the walls of the
// fundamental alcove 0 <= <x, alpha> <= 1.
class AffineWeylGroup {
 public:
  // `order` optionally lists every generator label in the desired order;
  // by default the affine generator "s0" comes first.
  explicit AffineWeylGroup(const CartanMatrix& finite, const std::vector<std::string>& order = {});

  const CoxeterGroup& group() const { return group_; }
  const CartanMatrix& finite_cartan() const { return finite_; }
  const FiniteRootSystem& roots() const { return roots_; }
  size_t finite_rank() const { return finite_.rank(); }
  Gen affine_generator() const { return affine_gen_; }
  // Generator indices of W_f, in finite Cartan order.
  const std::vector<Gen>& finite_generators() const { return finite_gens_; }

  AffineMap generator_map(Gen s) const;
  AffineMap to_affine_map(const Element& w) const;
  // Throws InputError when the map is not in W.
  Element from_affine_map(const AffineMap& g) const;

  struct Decomposition {
    Element finite_part;              // w in W_f
    std::vector<long> translation;    // lambda in simple coroot coordinates
  };
  // w t_lambda with lambda in ZΦ^vee.
  Decomposition decompose(const Element& x) const;
  Element compose(const Element& finite_part, const std::vector<long>& translation) const;

  // Coroot coordinates to x-coordinates.
  std::vector<long> coroot_to_coords(const std::vector<long>& c) const;

 private:
  CartanMatrix finite_;
  FiniteRootSystem roots_;
  CoxeterGroup group_;
  Gen affine_gen_ = 0;
  std::vector<Gen> finite_gens_;
  std::vector<int> role_;  // generator -> finite index, or -1 for affine
};

}  // namespace pcanon
