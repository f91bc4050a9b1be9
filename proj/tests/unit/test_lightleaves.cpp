#include <doctest.h>

#include <algorithm>
#include <set>

#include "pcanon/errors.hpp"
#include "pcanon/hecke.hpp"
#include "pcanon/lightleaves.hpp"

using namespace pcanon;

namespace {

struct Setup {
  CoxeterGroup W;
  SoergelCalculus calc;
  explicit Setup(const char* type)
      : W(coxeter_from_gcm(CartanMatrix::named(type))), calc(faithful_realization(CartanMatrix::named(type))) {}
  Element el(const char* word) const { return W.normal_form(W.system().parse_word(word)); }
  Word word(const char* w) const { return W.system().parse_word(w); }
};

std::multiset<int> defects(const std::vector<LightLeaf>& leaves) {
  std::multiset<int> out;
  for (const auto& l : leaves) out.insert(l.defect);
  return out;
}

}  // namespace

TEST_CASE("light leaf counts and defects") {
  Setup a("A2");
  auto s = a.word("s1");
  auto at_e = light_leaves(a.W, s, a.W.identity());
  REQUIRE(at_e.size() == 1);
  CHECK(at_e[0].defect == 1);
  CHECK(at_e[0].steps == std::vector<LeafStep>{{GeneratorKind::EndDot, 0, 0, 0}});
  CHECK(defects(light_leaves(a.W, a.word("s1 s1"), a.W.identity())) == std::multiset<int>{0, 2});
  CHECK(defects(light_leaves(a.W, a.word("s1 s1"), a.el("s1"))) == std::multiset<int>{-1, 1});
  // Reduced word at its own element: the single all-ones leaf.
  for (const char* w : {"s1 s2 s1", "s2 s1 s2", "s1 s2"}) {
    auto top = light_leaves(a.W, a.word(w), a.el(w));
    REQUIRE(top.size() == 1);
    CHECK(top[0].defect == 0);
  }
}

TEST_CASE("defect generating function is the Bott-Samelson expansion") {
  for (const char* type : {"A2", "B2", "G2"}) {
    CAPTURE(type);
    Setup a(type);
    HeckeAlgebra H(a.W);
    for (const char* w : {"s1 s2 s1 s2", "s1 s1 s2", "s2 s1 s2 s1 s1"}) {
      Word expr = a.word(w);
      auto bs = H.bs_element(expr);
      std::map<Element, LaurentPoly> count;
      for (const auto& leaf : all_light_leaves(a.W, expr)) count[leaf.endpoint] += LaurentPoly::v(leaf.defect);
      for (const auto& [x, c] : bs.terms()) CHECK(count[x] == c);
      CHECK(count.size() == bs.terms().size());
    }
  }
}

TEST_CASE("leaves are bimodule maps of degree equal to the defect") {
  for (const char* type : {"A2", "B2"}) {
    CAPTURE(type);
    Setup a(type);
    for (const char* w : {"s1 s2 s1", "s2 s1 s2 s2"}) {
      for (const auto& leaf : all_light_leaves(a.W, a.word(w))) {
        BimoduleMap f = leaf_map(a.calc, leaf);
        BimoduleMap g = leaf_map(a.calc, flip(leaf));
        f.degree = g.degree = leaf.defect;
        CHECK(f.target == leaf.endpoint.word());
        CHECK(a.calc.is_bimodule_map(f));
        CHECK(a.calc.is_bimodule_map(g));
        CHECK(g.source == leaf.endpoint.word());
      }
    }
  }
}

TEST_CASE("rex moves") {
  Setup a("B2");
  auto path = rex_moves(a.W.system(), a.word("s1 s2 s1 s2"), a.word("s2 s1 s2 s1"));
  REQUIRE(path.size() == 1);
  CHECK(path[0].kind == GeneratorKind::Braid);
  Setup g("A3");
  Word from = g.word("s1 s2 s1 s3 s2"), to = g.word("s2 s1 s3 s2 s3");
  Word cur = from;
  for (const auto& step : rex_moves(g.W.system(), from, to)) cur = apply_step(cur, step, g.W.system());
  CHECK(cur == to);
  CHECK_THROWS_AS(rex_moves(g.W.system(), g.word("s1 s2"), g.word("s2 s1")), InconsistencyError);
}

TEST_CASE("standard decomposition") {
  Setup a("A2");
  auto sd = standard_decomposition(a.calc, a.W, a.word("s1 s1"));
  CHECK(sd.multiplicity.at(a.W.identity()) == 2);
  CHECK(sd.multiplicity.at(a.el("s1")) == 2);
  auto sd2 = standard_decomposition(a.calc, a.W, a.word("s1 s2 s1"));
  CHECK(sd2.multiplicity.size() == 6);
  CHECK(sd2.multiplicity.at(a.el("s1")) == 2);
  auto rho = a.calc.specialized_right(sd2.expr, sd2.point);
  QMat total = mat_zero<mpq_class>(8, 8);
  for (const auto& [x, p] : sd2.projector) {
    CHECK(mat_mul(p, p) == p);
    CHECK(rank_q(p) == sd2.multiplicity.at(x));
    for (const auto& r : rho) CHECK(mat_mul(p, r) == mat_mul(r, p));
    mat_add_scaled(total, p, 1);
  }
  CHECK(total == mat_identity<mpq_class>(8));
}

TEST_CASE("intersection forms") {
  Setup a("A2");
  IntersectionForms f(a.calc, a.W, a.word("s1"));
  CHECK(f.form(a.el("s1"), 0) == QMat{{1}});
  IntersectionForms g(a.calc, a.W, a.word("s1 s2 s1"));
  CHECK(g.form(a.el("s1 s2 s1"), 0) == QMat{{1}});
  QMat m = g.form(a.el("s1"), 0);
  REQUIRE(m.size() == 1);
  CHECK(abs(m[0][0]) == 1);
  CHECK_THROWS_AS(IntersectionForms(a.calc, a.W, a.word("s1 s1")), InputError);
}

TEST_CASE("B2 length-3 forms at the length-1 element") {
  Setup b("B2");
  std::vector<mpz_class> entries;
  for (const char* w : {"s1 s2 s1", "s2 s1 s2"}) {
    CAPTURE(w);
    Word expr = b.word(w);
    IntersectionForms f(b.calc, b.W, expr);
    Element x = b.W.generator(expr[0]);
    ZMat m = f.integral(x, 0);
    REQUIRE(m.size() == 1);
    REQUIRE(m[0].size() == 1);
    entries.push_back(abs(m[0][0]));
  }
  std::sort(entries.begin(), entries.end());
  CHECK(entries == std::vector<mpz_class>{1, 2});
}

TEST_CASE("characteristic zero ranks recover the Kazhdan-Lusztig expansion") {
  for (auto [type, len] : {std::pair{"A2", 3}, std::pair{"B2", 4}}) {
    CAPTURE(type);
    Setup a(type);
    HeckeAlgebra H(a.W);
    for (const auto& w : a.W.enumerate(len)) {
      CAPTURE(a.W.system().format_word(w.word()));
      IntersectionForms f(a.calc, a.W, w.word());
      auto expected = H.kl_expansion(H.bs_element(w.word()));
      std::map<Element, LaurentPoly> got;
      for (const auto& x : f.endpoints()) {
        LaurentPoly r = f.graded_rank(x, 0);
        if (!r.is_zero()) got[x] = r;
      }
      CHECK(got == expected);
    }
  }
}
