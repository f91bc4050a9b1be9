#include <doctest.h>

#include <random>

#include "pcanon/errors.hpp"
#include "pcanon/linalg.hpp"
#include "pcanon/multipoly.hpp"
#include "pcanon/realization.hpp"

using namespace pcanon;

namespace {

Realization sc(const char* type, CoefficientRing ring = CoefficientRing::rationals()) {
  return cartan_realization(KacMoodyRootDatum::simply_connected(CartanMatrix::named(type)), ring);
}

QVec vec(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST_CASE("multipoly arithmetic and division") {
  MultiPoly x = MultiPoly::variable(0), y = MultiPoly::variable(1);
  MultiPoly f = (x + y) * (x - y * mpq_class(2));
  CHECK(f.degree() == 2);
  CHECK(f.is_homogeneous());
  CHECK(f.divide_by_linear(x + y) == x - y * mpq_class(2));
  CHECK(f.divide_by_linear(x - y * mpq_class(2)) == x + y);
  CHECK_THROWS_AS(f.divide_by_linear(x), InconsistencyError);
  CHECK(f.evaluate({3, 1}) == 4);
  CHECK(f.substitute({y, x}) == (x + y) * (y - x * mpq_class(2)));
  CHECK(MultiPoly::monomials_of_degree(2, 3).size() == 4);
  CHECK(MultiPoly::monomials_of_degree(3, 2).size() == 6);
  CHECK(MultiPoly::monomials_of_degree(0, 0).size() == 1);
}

TEST_CASE("random exact division round trip") {
  std::mt19937 rng(7);
  for (int it = 0; it < 200; ++it) {
    MultiPoly q, lin;
    for (size_t k = 0; k < 3; ++k) lin.add_term(MultiPoly::unit(k), static_cast<long>(rng() % 5) - 2);
    if (lin.is_zero()) continue;
    for (int t = 0; t < 4; ++t)
      q.add_term(MultiPoly::unit(rng() % 3) * (1 + rng() % 2) + MultiPoly::unit(rng() % 3), static_cast<long>(rng() % 9) - 4);
    CHECK((q * lin).divide_by_linear(lin) == q);
  }
}

TEST_CASE("dense and modular linear algebra") {
  QMat m = {vec({1, 2, 3}), vec({2, 4, 6}), vec({1, 0, 1})};
  CHECK(rank_q(m) == 2);
  auto ns = nullspace_q(m, 3);
  REQUIRE(ns.size() == 1);
  for (const auto& row : m) {
    mpq_class s = 0;
    for (size_t k = 0; k < 3; ++k) s += row[k] * ns[0][k];
    CHECK(s == 0);
  }
  CHECK(determinant_q({vec({2, 1}), vec({1, 1})}) == 1);
  auto inv = inverse_q({vec({2, 1}), vec({1, 1})});
  REQUIRE(inv);
  CHECK((*inv)[0][0] == 1);
  CHECK((*inv)[0][1] == -1);
  ZMat z = {{2, 0}, {0, 3}};
  CHECK(rank_mod_p(z, 0) == 2);
  CHECK(rank_mod_p(z, 2) == 1);
  CHECK(rank_mod_p(z, 3) == 1);
  CHECK(rank_mod_p(z, 5) == 2);
  CHECK(rank_mod_p({{-2}}, 2) == 0);
}

TEST_CASE("sparse echelon agrees with dense nullspace") {
  std::mt19937 rng(11);
  for (int it = 0; it < 50; ++it) {
    size_t rows = 1 + rng() % 6, cols = 1 + rng() % 7;
    QMat m(rows, QVec(cols, 0));
    SparseEchelon se(cols);
    for (auto& row : m) {
      SparseRow sr;
      for (size_t c = 0; c < cols; ++c)
        if (rng() % 3 == 0) {
          row[c] = static_cast<long>(rng() % 7) - 3;
          if (row[c] != 0) sr.emplace_back(c, row[c]);
        }
      se.add(sr);
    }
    CHECK(se.rank() == rank_q(m));
    auto ns = se.nullspace();
    CHECK(ns.size() == cols - se.rank());
    for (const auto& v : ns)
      for (const auto& row : m) {
        mpq_class s = 0;
        for (const auto& [c, x] : v) s += row[c] * x;
        CHECK(s == 0);
      }
  }
}

TEST_CASE("coefficient rings") {
  auto f5 = CoefficientRing::finite_field(5);
  CHECK(f5.canonical(mpq_class(7)) == 2);
  CHECK(f5.canonical(mpq_class(1, 2)) == 3);
  CHECK(f5.is_unit(3));
  CHECK_FALSE(f5.is_unit(10));
  CHECK_THROWS_AS(CoefficientRing::finite_field(6), InputError);
  CHECK(CoefficientRing::integers_half().is_unit(mpq_class(1, 4)));
  CHECK_FALSE(CoefficientRing::integers_half().is_unit(3));
  CHECK_FALSE(CoefficientRing::integers().contains(mpq_class(1, 2)));
  CHECK(CoefficientRing::parse("F7") == CoefficientRing::finite_field(7));
  CHECK(CoefficientRing::parse("Z[1/2]") == CoefficientRing::integers_half());
}

TEST_CASE("cartan realization") {
  auto r = sc("A1");
  CHECK(r.rank() == 1);
  CHECK(r.pairing(0, 0) == 2);
  // SL2 over Z: alpha = 2 * primitive, so Z' = Z[1/2].
  CHECK_THROWS_WITH_AS(sc("A1", CoefficientRing::integers()), doctest::Contains("requires 2 invertible"), InputError);
  // Adjoint B2: some coroot is not primitive.
  CHECK_THROWS_AS(cartan_realization(KacMoodyRootDatum::adjoint(CartanMatrix::named("B2")), CoefficientRing::integers()),
                  InputError);
  auto a2 = sc("A2", CoefficientRing::finite_field(5));
  CHECK(a2.pairing(0, 1) == 4);
  CHECK(check_demazure_surjectivity(a2));
  auto a2z = sc("A2", CoefficientRing::integers());
  CHECK(check_demazure_surjectivity(a2z));
  // A realization over Z[1/2] where alpha = 2 * primitive still surjects.
  CHECK(check_demazure_surjectivity(sc("A1", CoefficientRing::integers_half())));
}

TEST_CASE("demazure surjectivity over Z") {
  CoxeterSystem a1 = coxeter_from_gcm(CartanMatrix::named("A1"));
  // V = Z^2, coroot (1,0), root (2,0): image of alpha is 2Z.
  Realization bad(CoefficientRing::integers(), a1, {vec({1, 0})}, {vec({2, 0})});
  CHECK_FALSE(check_demazure_surjectivity(bad));
  Realization good(CoefficientRing::integers(), a1, {vec({1, 1})}, {vec({1, 1})});
  CHECK(check_demazure_surjectivity(good));
}

TEST_CASE("w action and braid relations") {
  for (const char* type : {"A2", "B2", "G2", "A3"}) {
    auto r = sc(type);
    for (Gen s = 0; s < r.generators(); ++s) {
      QVec c = r.coroot(s);
      QVec neg = c;
      for (auto& x : neg) x = -x;
      CHECK(w_action(r, s, c, Operand::Vector) == neg);
      CHECK(w_action(r, s, w_action(r, s, r.coroot(0), Operand::Vector), Operand::Vector) == r.coroot(0));
      CHECK(w_action(r, s, w_action(r, s, r.root(0), Operand::Covector), Operand::Covector) == r.root(0));
    }
  }
  auto a2 = sc("A2");
  QVec expect = a2.coroot(1);
  for (size_t k = 0; k < expect.size(); ++k) expect[k] += a2.coroot(0)[k];
  CHECK(w_action(a2, 0, a2.coroot(1), Operand::Vector) == expect);
  // Kernel of alpha_s is fixed: for A2 sc, alpha_0 = (2,-1), x = (1,2).
  QVec x = vec({1, 2});
  CHECK(w_action(a2, 0, x, Operand::Vector) == x);
  // A realization violating m_st = 3 is rejected.
  CoxeterSystem a2sys = coxeter_from_gcm(CartanMatrix::named("A2"));
  CHECK_THROWS_AS(Realization(CoefficientRing::rationals(), a2sys, {vec({1, 0}), vec({0, 1})}, {vec({2, 0}), vec({0, 2})}),
                  InputError);
}

TEST_CASE("dual realization") {
  auto r = sc("B2");
  auto d = dual_realization(r);
  CHECK(dual_realization(d) == r);
  CHECK(d.cartan_pairing() == transpose_q(r.cartan_pairing()));
  auto a1 = sc("A1");
  CHECK(dual_realization(a1).root(0) == a1.coroot(0));
  CHECK(dual_realization(a1).coroot(0) == a1.root(0));
  auto round = Realization::from_json(r.to_json());
  CHECK(round == r);
}

TEST_CASE("symmetrizer") {
  CHECK(symmetrizer(CartanMatrix::named("A2")) == std::vector<long>{1, 1});
  auto b2 = symmetrizer(CartanMatrix::named("B2"));
  auto g2 = symmetrizer(CartanMatrix::named("G2"));
  CHECK(b2 == std::vector<long>{1, 2});
  CHECK(g2 == std::vector<long>{1, 3});
  for (const char* type : {"B2", "G2", "C3", "F4"}) {
    auto a = CartanMatrix::named(type);
    auto e = symmetrizer(a);
    for (size_t i = 0; i < a.rank(); ++i)
      for (size_t j = 0; j < a.rank(); ++j) CHECK(e[j] * a(i, j) == e[i] * a(j, i));
  }
  CartanMatrix bad({"a", "b", "c"}, {{2, -1, -1}, {-2, 2, -1}, {-1, -1, 2}});
  CHECK_THROWS_AS(symmetrizer(bad), InputError);
}

TEST_CASE("phi isomorphism is equivariant") {
  struct Case {
    const char* type;
    CoefficientRing ring;
  };
  for (const Case& c : {Case{"A1", CoefficientRing::rationals()}, Case{"A2", CoefficientRing::finite_field(5)},
                        Case{"B2", CoefficientRing::rationals()}, Case{"G2", CoefficientRing::rationals()}}) {
    CAPTURE(c.type);
    auto r = sc(c.type, c.ring);
    auto phi = phi_isomorphism(r);
    for (Gen s = 0; s < r.generators(); ++s) {
      QVec lhs = phi.apply(r.coroot(s));
      QVec rhs = r.root(s);
      for (auto& x : rhs) x = c.ring.canonical(x * phi.b[s]);
      for (auto& x : lhs) x = c.ring.canonical(x);
      CHECK(lhs == rhs);
      CHECK(c.ring.is_unit(phi.b[s]));
      for (size_t k = 0; k < r.rank(); ++k) {
        QVec e(r.rank(), 0);
        e[k] = 1;
        QVec a = r.act_on_covector(s, phi.apply(e));
        QVec b = phi.apply(r.act_on_vector(s, e));
        for (auto& x : b) x = c.ring.canonical(x);
        CHECK(a == b);
      }
    }
  }
  auto a2 = phi_isomorphism(sc("A2", CoefficientRing::finite_field(5)));
  CHECK(a2.b[0] == a2.b[1]);
  auto b2 = phi_isomorphism(sc("B2"));
  // s1 is long: b_long / b_short matches the symmetrizer ratio 1 : 2.
  CHECK(b2.b[1] / b2.b[0] == 2);
  CHECK_THROWS_AS(phi_isomorphism(sc("A2", CoefficientRing::finite_field(3))), InputError);
  CHECK_THROWS_AS(phi_isomorphism(sc("B2", CoefficientRing::finite_field(2))), InputError);
}

TEST_CASE("affine realization") {
  auto sl2 = affine_realization(CartanMatrix::named("A1"), CoefficientRing::rationals());
  CHECK(sl2.rank() == 1);
  CHECK(sl2.coxeter().labels()[0] == "s0");
  CHECK(sl2.root(0) == QVec{-sl2.root(1)[0]});
  CHECK(sl2.coroot(0) == QVec{-sl2.coroot(1)[0]});
  CHECK(sl2.coxeter().order(0, 1) == CoxeterSystem::kInfinity);
  auto sl3 = affine_realization(CartanMatrix::named("A2"), CoefficientRing::finite_field(5));
  CHECK(sl3.rank() == 2);
  for (Gen s = 0; s < 3; ++s) CHECK(sl3.pairing(s, s) == 2);
  for (Gen s = 0; s < 3; ++s)
    for (Gen t = 0; t < 3; ++t)
      if (s != t) CHECK(sl3.coxeter().order(s, t) == 3);
  // Roots are dependent: their span has the rank of V.
  QMat roots;
  for (Gen s = 0; s < 3; ++s) roots.push_back(sl3.root(s));
  CHECK(rank_q(roots) == 2);
  QMat roots1 = {sl2.root(0), sl2.root(1)};
  CHECK(rank_q(roots1) == 1);
  CHECK_THROWS_AS(affine_realization(CartanMatrix::named("A1"), CoefficientRing::integers()), InputError);
  auto f = faithful_realization(CartanMatrix::named("A2").affinization());
  QMat fr;
  for (Gen s = 0; s < 3; ++s) fr.push_back(f.root(s));
  CHECK(rank_q(fr) == 3);
}
