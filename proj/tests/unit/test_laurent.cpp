#include <doctest.h>

#include <random>

#include "pcanon/errors.hpp"
#include "pcanon/laurent.hpp"

using pcanon::LaurentPoly;

TEST_CASE("arithmetic and canonical form") {
  LaurentPoly a = LaurentPoly::v(-1) - LaurentPoly::v(1);
  CHECK(a.to_string() == "v^-1-v");
  CHECK((a + LaurentPoly::v(1)).to_string() == "v^-1");
  CHECK((a - a).is_zero());
  CHECK((a * a).to_string() == "v^-2-2+v^2");
  CHECK(a.bar() == -a);
  CHECK(LaurentPoly(0).is_zero());
  CHECK(LaurentPoly(0).to_string() == "0");
}

TEST_CASE("text round trip") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coeff(-5, 5), exp(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    LaurentPoly p;
    for (int k = 0; k < 4; ++k) p.add_term(exp(rng), coeff(rng));
    CHECK(LaurentPoly::parse(p.to_string()) == p);
    CHECK(LaurentPoly::from_json(p.to_json()) == p);
  }
  CHECK(LaurentPoly::parse("1+v^2") == LaurentPoly(1) + LaurentPoly::v(2));
  CHECK(LaurentPoly::parse("3*v^-2+-1*v") == LaurentPoly::monomial(3, -2) - LaurentPoly::v(1));
  CHECK_THROWS_AS(LaurentPoly::parse("v^"), pcanon::InputError);
  CHECK_THROWS_AS(LaurentPoly::parse(""), pcanon::InputError);
}

TEST_CASE("big coefficients survive JSON") {
  LaurentPoly p = LaurentPoly::monomial(mpz_class("123456789012345678901234567890"), 3);
  CHECK(LaurentPoly::from_json(p.to_json()) == p);
}
