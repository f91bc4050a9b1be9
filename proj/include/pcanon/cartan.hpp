#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace pcanon {

using IntVec = std::vector<long>;

// Generalized Cartan matrix with a_ij = alpha_j(alpha_i^vee).
class CartanMatrix {
 public:
  CartanMatrix() = default;
  CartanMatrix(std::vector<std::string> labels, std::vector<std::vector<int>> entries);

  // "A1".."A4", "B2", "C2", "G2" and more generally A_n, B_n, C_n, D_n, G2,
  // F4, E6-8; a trailing "~" (or "^(1)") asks for the untwisted affinization.
  static CartanMatrix named(std::string_view type);
  // {"type": "A2"} or {"matrix": [[...]], "labels": [...]} (labels optional).
  static CartanMatrix from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  size_t rank() const { return labels_.size(); }
  int operator()(size_t i, size_t j) const { return a_[i][j]; }
  const std::vector<std::vector<int>>& entries() const { return a_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<size_t> index_of(std::string_view label) const;

  CartanMatrix transposed() const;
  // Rows and columns permuted: new index k is old index perm[k].
  CartanMatrix reordered(const std::vector<size_t>& perm) const;
  CartanMatrix restricted(const std::vector<size_t>& subset) const;
  // Untwisted affinization: node "0" is prepended.
  CartanMatrix affinization() const;

  // Minimal positive integers eps with eps_j a_ij = eps_i a_ji, or nullopt.
  std::optional<std::vector<long>> symmetrizer() const;
  bool is_finite_type() const;
  mpz_class determinant() const;
  std::vector<std::vector<size_t>> components() const;

  friend bool operator==(const CartanMatrix&, const CartanMatrix&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> a_;
};

// Finite root system of a finite-type Cartan matrix. Roots are in simple
// root coordinates, coroots in simple coroot coordinates.
class FiniteRootSystem {
 public:
  explicit FiniteRootSystem(const CartanMatrix& a);

  const CartanMatrix& cartan() const { return a_; }
  size_t rank() const { return a_.rank(); }
  const std::vector<IntVec>& positive_roots() const { return roots_; }
  const std::vector<IntVec>& positive_coroots() const { return coroots_; }
  const IntVec& highest_root() const { return roots_[highest_]; }
  const IntVec& highest_root_coroot() const { return coroots_[highest_]; }
  // 1 + height of the highest root.
  long coxeter_number() const;
  // <beta, alpha_i^vee> for a root-coordinate vector beta.
  long pair_with_coroot(const IntVec& beta, size_t i) const;
  // <alpha_i, gamma> for a coroot-coordinate vector gamma.
  long pair_root_with(size_t i, const IntVec& gamma) const;
  // Primes that are not very good, per connected component type.
  std::vector<long> non_very_good_primes() const;
  // Cartan type of each component, e.g. {"A2"} or {"B2", "A1"}.
  std::vector<std::string> component_types() const;

 private:
  CartanMatrix a_;
  std::vector<IntVec> roots_;
  std::vector<IntVec> coroots_;
  size_t highest_ = 0;
};

// Kac-Moody root datum: simple roots in X and coroots in Hom(X, Z), given
// by coordinates in dual bases.
struct KacMoodyRootDatum {
  CartanMatrix gcm;
  size_t lattice_rank = 0;
  std::vector<IntVec> simple_roots;
  std::vector<IntVec> simple_coroots;

  // X is the weight lattice (finite type only).
  static KacMoodyRootDatum simply_connected(const CartanMatrix& gcm);
  // X is the root lattice (finite type only).
  static KacMoodyRootDatum adjoint(const CartanMatrix& gcm);
  // Coroots are a basis of the first n coordinates; extra coordinates
  // (one per corank) make the roots linearly independent. Works for any
  // GCM and gives a faithful action for affine types.
  static KacMoodyRootDatum minimal_independent(const CartanMatrix& gcm);

  void validate() const;
};

}  // namespace pcanon
