#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

namespace pcanon {

// Sparse Laurent polynomial in v with arbitrary precision integer
// coefficients. Zero coefficients are never stored.
class LaurentPoly {
 public:
  using Coeff = mpz_class;
  using Terms = std::map<int, Coeff>;

  LaurentPoly() = default;
  LaurentPoly(long c);  // NOLINT: constants convert implicitly
  LaurentPoly(const Coeff& c);  // NOLINT

  static LaurentPoly monomial(const Coeff& c, int exp);
  static LaurentPoly v(int exp = 1) { return monomial(1, exp); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Coeff coeff(int exp) const;
  int min_degree() const;  // pre: nonzero
  int max_degree() const;  // pre: nonzero

  LaurentPoly bar() const;       // v -> v^-1
  LaurentPoly shifted(int k) const;  // times v^k
  Coeff at_one() const;
  // Replace v by -v.
  LaurentPoly sign_twisted() const;

  bool is_bar_symmetric() const { return *this == bar(); }
  bool has_nonnegative_coeffs() const;
  // True when every exponent is strictly positive.
  bool in_positive_part() const;

  void add_term(int exp, const Coeff& c);

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  LaurentPoly operator-() const;
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

  // Text form "c*v^k" joined by '+' with ascending exponents; unit
  // coefficients and v^0, v^1 are abbreviated ("1+v^2", "v^-1-2*v").
  std::string to_string() const;
  static LaurentPoly parse(std::string_view text);

  // {"exponent": coefficient}; coefficients outside int64 are strings.
  nlohmann::json to_json() const;
  static LaurentPoly from_json(const nlohmann::json& j);

 private:
  Terms terms_;
};

}  // namespace pcanon
