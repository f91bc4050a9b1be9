#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pcanon {

// Sparse polynomial over Q in up to 8 variables (coordinates on V). The
// Soergel grading puts V* in degree 2, so grading = 2 * degree().
class MultiPoly {
 public:
  using Mono = std::uint64_t;  // 8 bits of exponent per variable
  static constexpr size_t kMaxVars = 8;
  using Terms = std::map<Mono, mpq_class>;

  MultiPoly() = default;
  static MultiPoly constant(const mpq_class& c);
  static MultiPoly variable(size_t k);
  static MultiPoly linear(const std::vector<mpq_class>& coeffs);
  static MultiPoly monomial(Mono m, const mpq_class& c = 1);

  static unsigned exponent(Mono m, size_t k) { return (m >> (8 * k)) & 0xFF; }
  static Mono unit(size_t k) { return Mono{1} << (8 * k); }
  static unsigned mono_degree(Mono m);
  // All monomials of total degree d in n variables, ascending.
  static std::vector<Mono> monomials_of_degree(size_t n, unsigned d);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Total degree of the leading part; -1 for zero.
  int degree() const;
  bool is_homogeneous() const;
  mpq_class coeff(Mono m) const;
  mpq_class constant_term() const { return coeff(0); }

  void add_term(Mono m, const mpq_class& c);
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const mpq_class& c);
  MultiPoly operator-() const;
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const mpq_class& c) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

  // Substitute x_k -> images[k].
  MultiPoly substitute(const std::vector<MultiPoly>& images) const;
  mpq_class evaluate(const std::vector<mpq_class>& point) const;
  // Exact division by a nonzero linear form; throws on a remainder.
  MultiPoly divide_by_linear(const MultiPoly& lin) const;

  std::string to_string() const;

 private:
  Terms terms_;
};

}  // namespace pcanon
