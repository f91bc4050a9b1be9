#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pcanon/cartan.hpp"

namespace pcanon {

using Gen = std::uint8_t;
// A raw expression: any sequence of generators, not necessarily reduced.
using Word = std::vector<Gen>;

struct WordHash {
  size_t operator()(const Word& w) const noexcept;
};

// Coxeter system derived from a generalized Cartan matrix.
class CoxeterSystem {
 public:
  static constexpr int kInfinity = 0;

  CoxeterSystem() = default;
  explicit CoxeterSystem(CartanMatrix gcm);

  const CartanMatrix& gcm() const { return gcm_; }
  size_t rank() const { return gcm_.rank(); }
  // m_st, with kInfinity for infinite order and 1 on the diagonal.
  int order(Gen s, Gen t) const { return m_[s][t]; }
  const std::vector<std::string>& labels() const { return gcm_.labels(); }

  // Letters separated by commas or spaces; each token is a label or an
  // index. A string of digits without separators is read one digit per
  // letter when every label is "s<digit>".
  Word parse_word(const std::string& text) const;
  std::string format_word(const Word& w) const;

  friend bool operator==(const CoxeterSystem& a, const CoxeterSystem& b) { return a.gcm_ == b.gcm_; }

 private:
  CartanMatrix gcm_;
  std::vector<std::vector<int>> m_;
};

CoxeterSystem coxeter_from_gcm(const CartanMatrix& gcm);

// Group element stored as its ShortLex normal form.
class Element {
 public:
  Element() = default;
  const Word& word() const { return word_; }
  size_t length() const { return word_.size(); }
  bool is_identity() const { return word_.empty(); }

  // ShortLex order: length first, then lexicographic on generator indices.
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) {
    if (a.word_.size() != b.word_.size()) return a.word_.size() <=> b.word_.size();
    return a.word_ <=> b.word_;
  }
  friend bool operator==(const Element& a, const Element& b) { return a.word_ == b.word_; }

 private:
  friend class CoxeterGroup;
  explicit Element(Word w) : word_(std::move(w)) {}
  Word word_;
};

struct ElementHash {
  size_t operator()(const Element& e) const noexcept { return WordHash{}(e.word()); }
};

// Element arithmetic for a Coxeter system via the reflection representation
// on the root lattice. Thread safe; results are memoized.
class CoxeterGroup {
 public:
  static constexpr size_t kDefaultEnumerationCap = 500000;

  explicit CoxeterGroup(CoxeterSystem sys);

  const CoxeterSystem& system() const { return sys_; }
  size_t rank() const { return sys_.rank(); }

  Element identity() const { return Element(); }
  Element generator(Gen s) const;
  Element normal_form(std::span<const Gen> expr) const;
  Element multiply(const Element& x, const Element& y) const;
  Element mul_gen(const Element& w, Gen s) const;  // ws
  Element gen_mul(Gen s, const Element& w) const;  // sw
  Element inverse(const Element& w) const;

  bool is_right_descent(const Element& w, Gen s) const;  // ws < w
  bool is_left_descent(Gen s, const Element& w) const;   // sw < w
  bool is_reduced(std::span<const Gen> expr) const;

  bool bruhat_leq(const Element& x, const Element& y) const;
  // All x <= w, sorted ShortLex.
  std::vector<Element> bruhat_interval_below(const Element& w) const;

  std::vector<Element> enumerate(size_t max_length, size_t cap = kDefaultEnumerationCap) const;

  // Throws InputError when W_J is infinite.
  void require_finite_parabolic(const std::vector<Gen>& J) const;
  bool is_finite_parabolic(const std::vector<Gen>& J) const;
  bool is_min_coset_rep(const Element& w, const std::vector<Gen>& J) const;
  // x = u y with u in W_J and y minimal in W_J y.
  std::pair<Element, Element> parabolic_decomposition(const Element& x, const std::vector<Gen>& J) const;
  // Longest element of a finite group (throws when infinite).
  Element longest_element() const;

  // w(alpha_s) in simple root coordinates.
  std::vector<long> act_on_root(const Element& w, Gen s) const;

 private:
  Word compute_normal_form(std::span<const Gen> expr) const;

  CoxeterSystem sys_;
  mutable std::shared_mutex nf_mutex_;
  mutable std::unordered_map<Word, Word, WordHash> nf_cache_;
  mutable std::shared_mutex bruhat_mutex_;
  mutable std::unordered_map<Word, bool, WordHash> bruhat_cache_;
};

}  // namespace pcanon
