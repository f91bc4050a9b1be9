#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcanon/coxeter.hpp"
#include "pcanon/laurent.hpp"

namespace pcanon {

// Finite linear combination of standard basis elements H_w (or N_y in the
// antispherical module). Zero coefficients are never stored.
class HeckeElement {
 public:
  using Terms = std::map<Element, LaurentPoly>;

  HeckeElement() = default;
  static HeckeElement basis(const Element& w, LaurentPoly c = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  LaurentPoly coeff(const Element& w) const;
  void add(const Element& w, const LaurentPoly& c);

  HeckeElement& operator+=(const HeckeElement& o);
  HeckeElement& operator-=(const HeckeElement& o);
  HeckeElement scaled(const LaurentPoly& c) const;
  friend HeckeElement operator+(HeckeElement a, const HeckeElement& b) { return a += b; }
  friend HeckeElement operator-(HeckeElement a, const HeckeElement& b) { return a -= b; }
  friend bool operator==(const HeckeElement& a, const HeckeElement& b) { return a.terms_ == b.terms_; }

  // {word-string: laurent}
  nlohmann::json to_json(const CoxeterSystem& sys) const;
  static HeckeElement from_json(const nlohmann::json& j, const CoxeterGroup& W);
  std::string to_string(const CoxeterSystem& sys) const;

 private:
  Terms terms_;
};

// Bilinear pairing with <H_x, H_y> = delta_xy.
LaurentPoly pairing(const HeckeElement& a, const HeckeElement& b);

// Element of the antispherical module sgn ⊗_{H_J} H with basis N_y.
struct AntisphericalElement {
  std::vector<Gen> J;
  HeckeElement value;  // keys are minimal coset representatives
  friend bool operator==(const AntisphericalElement&, const AntisphericalElement&) = default;
};

struct InversionReport {
  bool ok = true;
  std::string failure;  // first failing pair when !ok
  size_t elements = 0;
  bool used_longest_element = false;
};

// Hecke algebra of a Coxeter group with the normalization
// H_s^2 = (v^-1 - v) H_s + 1. Memo tables are internally locked.
class HeckeAlgebra {
 public:
  explicit HeckeAlgebra(const CoxeterGroup& W) : W_(W) {}

  const CoxeterGroup& group() const { return W_; }

  HeckeElement standard(const Element& w) const { return HeckeElement::basis(w); }
  HeckeElement right_mul_gen(const HeckeElement& a, Gen s) const;
  HeckeElement left_mul_gen(Gen s, const HeckeElement& a) const;
  HeckeElement multiply(const HeckeElement& a, const HeckeElement& b) const;
  // (H_s1 + v) ... (H_sk + v)
  HeckeElement bs_element(std::span<const Gen> expr) const;
  HeckeElement bar(const HeckeElement& a) const;

  // b_w = H_w + sum_{y<w} h_{y,w} H_y with h_{y,w} in vZ[v].
  HeckeElement kl_basis(const Element& w) const;
  LaurentPoly kl_poly(const Element& y, const Element& w) const { return kl_basis(w).coeff(y); }
  // Coordinates of a in the KL basis.
  std::map<Element, LaurentPoly> kl_expansion(const HeckeElement& a) const;

  // (y, n) -> coefficient of v^n H_y in the Bott-Samelson element.
  std::map<std::pair<Element, int>, mpz_class> standard_multiplicities(std::span<const Gen> expr) const;
  LaurentPoly graded_hom_rank(std::span<const Gen> v, std::span<const Gen> w) const;

  // H_x -> (-v)^{l(u)} N_y where x = u y.
  AntisphericalElement antispherical_project(const HeckeElement& a, const std::vector<Gen>& J) const;
  // Right action of H_s + v on the antispherical module.
  AntisphericalElement antispherical_right_mul_bs(const AntisphericalElement& n, Gen s) const;

  // Kazhdan-Lusztig inversion on all elements of length <= max_length.
  InversionReport kl_inversion_check(size_t max_length) const;

 private:
  HeckeElement compute_kl(const Element& w) const;
  HeckeElement bar_standard(const Element& w) const;

  const CoxeterGroup& W_;
  mutable std::shared_mutex kl_mutex_;
  mutable std::map<Element, HeckeElement> kl_cache_;
  mutable std::shared_mutex bar_mutex_;
  mutable std::map<Element, HeckeElement> bar_cache_;
};

}  // namespace pcanon
