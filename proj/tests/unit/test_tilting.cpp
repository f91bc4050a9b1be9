#include <doctest.h>

#include <random>
#include <set>

#include "oracles/oracles.hpp"
#include "pcanon/errors.hpp"
#include "pcanon/tilting.hpp"

using namespace pcanon;

namespace {

Element random_element(const CoxeterGroup& W, std::mt19937& rng, size_t max_len) {
  std::uniform_int_distribution<size_t> len(0, max_len);
  std::uniform_int_distribution<Gen> gen(0, static_cast<Gen>(W.rank() - 1));
  Word word;
  for (size_t n = len(rng); n > 0; --n) word.push_back(gen(rng));
  return W.normal_form(word);
}

std::map<long, long> row_as_map(const TiltingCharacterRow& row) {
  std::map<long, long> m;
  for (const auto& n : row.multiplicities) m[n.weight.at(0)] = static_cast<long>(n.multiplicity);
  return m;
}

// Donkin's character restricted to the principal block.
std::map<long, long> donkin_principal(long lambda, long p) {
  std::map<long, long> out;
  for (const auto& [mu, m] : oracle::sl2_nabla_multiplicities(oracle::sl2_char_tilting(lambda, p))) {
    long r = (mu + 1) % (2 * p);
    if (r == 1 || r == 2 * p - 1) out[mu] = m;
  }
  return out;
}

}  // namespace

TEST_CASE("dot action") {
  RootDatumF sl2 = RootDatumF::named("SL2");
  AffineWeylGroup W = sl2.affine_weyl_group();
  const CoxeterGroup& G = W.group();
  CHECK(dot_action(W, G.identity(), 3, {7}) == Weight{7});
  CHECK(dot_action(W, G.generator(W.affine_generator()), 3, {0}) == Weight{4});
  // s0 = s_alpha t_{-alpha}
  Element s1 = G.generator(W.finite_generators()[0]);
  CHECK(dot_action(W, s1, {-1}, 3, {0}) == Weight{4});
  CHECK(W.compose(s1, {-1}) == G.generator(W.affine_generator()));

  std::mt19937 rng(11);
  for (const char* type : {"SL2", "SL3", "B2", "G2"}) {
    RootDatumF d = RootDatumF::named(type);
    AffineWeylGroup A = d.affine_weyl_group();
    const CoxeterGroup& C = A.group();
    for (int trial = 0; trial < 40; ++trial) {
      Element x = random_element(C, rng, 6), y = random_element(C, rng, 6);
      Weight mu(d.rank());
      for (long& c : mu) c = std::uniform_int_distribution<long>(-10, 10)(rng);
      for (unsigned long p : {5ul, 7ul}) {
        CHECK(dot_action(A, x, p, dot_action(A, y, p, mu)) == dot_action(A, C.multiply(x, y), p, mu));
        auto dec = A.decompose(x);
        CHECK(dot_action(A, dec.finite_part, dec.translation, p, mu) == dot_action(A, x, p, mu));
      }
    }
  }
}

TEST_CASE("dominant elements") {
  TiltingCharacters sl2(RootDatumF::named("SL2"), 3);
  std::vector<long> got;
  for (const auto& d : sl2.dominant_f_elements(12)) got.push_back(d.lambda[0]);
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<long>{0, 4, 6, 10, 12});
  CHECK(sl2.dominant_f_elements(0).size() == 1);
  CHECK(sl2.dominant_f_elements(0)[0].w.length() == 0);

  CHECK_THROWS_AS(TiltingCharacters(RootDatumF::named("SL3"), 3), InputError);
  CHECK_THROWS_AS(TiltingCharacters(RootDatumF::named("SL2"), 2), InputError);
  CHECK_THROWS_AS(TiltingCharacters(RootDatumF::named("SL2"), 9), InputError);

  // SL3, p = 5: the dominant weights of the orbit of 0 up to depth 12,
  // found by brute force over all dominant weights.
  RootDatumF sl3 = RootDatumF::named("SL3");
  TiltingCharacters t(sl3, 5);
  std::set<Weight> found;
  for (const auto& d : t.dominant_f_elements(12)) {
    CHECK(sl3.is_dominant(d.lambda));
    CHECK(sl3.depth(d.lambda) <= 12);
    CHECK(t.affine_group().group().is_min_coset_rep(d.w, t.finite_generators()));
    CHECK(found.insert(d.lambda).second);
  }
  std::set<Weight> brute;
  for (long a = 0; a <= 12; ++a)
    for (long b = 0; a + b <= 12; ++b) {
      // lambda + rho is regular, and congruent to an S3-conjugate of rho
      // modulo p times the root lattice (root lattice: a - b = 0 mod 3).
      long x = a + 1, y = b + 1;
      if (x % 5 == 0 || y % 5 == 0 || (x + y) % 5 == 0) continue;
      std::vector<std::pair<long, long>> orbit{{1, 1}, {-1, 2}, {2, -1}, {1, -2}, {-2, 1}, {-1, -1}};
      for (auto [u, v] : orbit) {
        long dx = x - u, dy = y - v;
        if (dx % 5 || dy % 5) continue;
        if (((dx / 5) - (dy / 5)) % 3 == 0) brute.insert({a, b});
      }
    }
  CHECK(found == brute);
}

TEST_CASE("Weyl dimension") {
  CHECK(weyl_dimension(RootDatumF::named("SL2"), {0}) == 1);
  CHECK(weyl_dimension(RootDatumF::named("SL2"), {4}) == 5);
  CHECK(weyl_dimension(RootDatumF::named("SL3"), {1, 1}) == 8);
  CHECK(weyl_dimension(RootDatumF::named("SL3"), {3, 0}) == 10);
  RootDatumF g2 = RootDatumF::named("G2");
  std::set<mpz_class> fund{weyl_dimension(g2, {1, 0}), weyl_dimension(g2, {0, 1})};
  CHECK(fund == std::set<mpz_class>{7, 14});
  CHECK_THROWS_AS(weyl_dimension(g2, {-1, 0}), InputError);
}

TEST_CASE("multiplicities") {
  TiltingCharacters t(RootDatumF::named("SL2"), 3);
  const CoxeterGroup& W = t.affine_group().group();
  Element s0 = W.generator(t.affine_group().affine_generator());
  Element s0s1 = W.mul_gen(s0, t.finite_generators()[0]);
  CHECK(t.multiplicity(s0, s0) == 1);
  CHECK(t.multiplicity(s0, W.identity()) == 1);
  CHECK(t.multiplicity(s0, s0s1) == 0);
  CHECK_THROWS_AS(t.multiplicity(W.mul_gen(s0s1, t.affine_group().affine_generator()), W.generator(t.finite_generators()[0])), InputError);
}

TEST_CASE("SL2 tables") {
  {
    TiltingCharacters t(RootDatumF::named("SL2"), 3);
    auto rows = t.table(4);
    REQUIRE(rows.size() == 2);
    CHECK(row_as_map(rows[0]) == std::map<long, long>{{0, 1}});
    CHECK(rows[0].dimension == 1);
    CHECK(row_as_map(rows[1]) == std::map<long, long>{{0, 1}, {4, 1}});
    CHECK(rows[1].dimension == 6);
  }
  {
    TiltingCharacters t(RootDatumF::named("SL2"), 5);
    auto rows = t.table(8);
    REQUIRE(rows.size() == 2);
    CHECK(row_as_map(rows[1]) == std::map<long, long>{{0, 1}, {8, 1}});
    CHECK(rows[1].dimension == 10);
  }
}

TEST_CASE("SL2 agrees with Donkin") {
  for (long p : {3l, 5l, 7l}) {
    TiltingCharacters t(RootDatumF::named("SL2"), p);
    for (const auto& row : t.table(3 * p)) {
      CAPTURE(p);
      CAPTURE(row.highest_weight[0]);
      CHECK(row_as_map(row) == donkin_principal(row.highest_weight[0], p));
      mpz_class dim = 0;
      for (const auto& [w, m] : oracle::sl2_char_tilting(row.highest_weight[0], p)) dim += m;
      CHECK(row.dimension == dim);
    }
  }
  // Far enough out that the characters are no longer given by the
  // classical antispherical polynomials (T(16) for p = 3 has four nabla
  // factors).
  for (auto [p, bound] : {std::pair{3l, 40l}, std::pair{5l, 60l}, std::pair{7l, 70l}}) {
    TiltingCharacters t(RootDatumF::named("SL2"), p);
    size_t wide = 0;
    for (const auto& row : t.table(bound)) {
      CAPTURE(p);
      CAPTURE(row.highest_weight[0]);
      CHECK(row_as_map(row) == donkin_principal(row.highest_weight[0], p));
      if (row.multiplicities.size() > 2) ++wide;
    }
    CHECK(wide > 0);
  }
}

TEST_CASE("SL3 rows") {
  RootDatumF sl3 = RootDatumF::named("SL3");
  TiltingCharacters par(sl3, 5, Exec::Parallel), ser(sl3, 5, Exec::Serial);
  auto a = par.table(10), b = ser.table(10);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].w == b[i].w);
    CHECK(a[i].dimension == b[i].dimension);
    REQUIRE(a[i].multiplicities.size() == b[i].multiplicities.size());
    mpz_class dim = 0;
    for (size_t k = 0; k < a[i].multiplicities.size(); ++k) {
      const auto& n = a[i].multiplicities[k];
      CHECK(n.y == b[i].multiplicities[k].y);
      CHECK(n.multiplicity == b[i].multiplicities[k].multiplicity);
      CHECK(n.multiplicity > 0);
      CHECK(sl3.is_dominant(n.weight));
      CHECK(par.affine_group().group().bruhat_leq(n.y, a[i].w));
      dim += n.multiplicity * weyl_dimension(sl3, n.weight);
    }
    CHECK(a[i].dimension == dim);
    CHECK(a[i].multiplicities.back().y == a[i].w);
  }
}
