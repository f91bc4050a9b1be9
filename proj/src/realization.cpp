#include "pcanon/realization.hpp"

#include <algorithm>
#include <numeric>

#include "pcanon/affine.hpp"
#include "pcanon/errors.hpp"

namespace pcanon {

namespace {

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

mpz_class odd_part(mpz_class x) {
  x = abs(x);
  if (x == 0) return 0;
  while (mpz_even_p(x.get_mpz_t())) x /= 2;
  return x;
}

// Is the ideal generated by the coordinates the whole ring?
bool generates_unit_ideal(const CoefficientRing& ring, const QVec& coords) {
  switch (ring.kind()) {
    case CoefficientRing::Kind::Q:
    case CoefficientRing::Kind::Fp:
      return std::any_of(coords.begin(), coords.end(), [&](const mpq_class& c) { return !ring.is_zero(c); });
    case CoefficientRing::Kind::Z: {
      mpz_class g = 0;
      for (const auto& c : coords) g = gcd(g, mpz_class(c.get_num()));
      return g == 1;
    }
    case CoefficientRing::Kind::ZHalf: {
      // Clear the 2-power denominators, then ignore factors of 2.
      mpz_class g = 0;
      mpz_class scale = 1;
      for (const auto& c : coords) scale = lcm(scale, mpz_class(c.get_den()));
      for (const auto& c : coords) g = gcd(g, mpz_class(c.get_num()) * (scale / c.get_den()));
      return odd_part(g) == 1;
    }
  }
  return false;
}

QVec canonical_vec(const CoefficientRing& ring, const QVec& v) {
  QVec out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!ring.contains(x)) throw InputError("coordinate " + x.get_str() + " is not in " + ring.tag());
    out.push_back(ring.canonical(x));
  }
  return out;
}

mpq_class dot(const QVec& a, const QVec& b) {
  mpq_class s = 0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void require_two_invertible(const CoefficientRing& ring) {
  if (!ring.is_unit(2)) throw InputError("realization over " + ring.tag() + " requires 2 invertible");
}

}  // namespace

CoefficientRing CoefficientRing::finite_field(unsigned long p) {
  if (!is_prime(p)) throw InputError("F_p needs p prime, got " + std::to_string(p));
  return {Kind::Fp, p};
}

CoefficientRing CoefficientRing::parse(const std::string& tag) {
  if (tag == "Z") return integers();
  if (tag == "Z[1/2]") return integers_half();
  if (tag == "Q") return rationals();
  if (tag.size() > 1 && tag[0] == 'F') {
    try {
      return finite_field(std::stoul(tag.substr(1)));
    } catch (const std::logic_error&) {
    }
  }
  throw InputError("unknown coefficient ring '" + tag + "'");
}

bool CoefficientRing::contains(const mpq_class& x) const {
  switch (kind_) {
    case Kind::Q:
      return true;
    case Kind::Z:
      return x.get_den() == 1;
    case Kind::ZHalf: {
      mpz_class d = x.get_den();
      return odd_part(d) == 1;
    }
    case Kind::Fp:
      return mpz_divisible_ui_p(x.get_den().get_mpz_t(), p_) == 0;
  }
  return false;
}

mpq_class CoefficientRing::canonical(const mpq_class& x) const {
  if (kind_ != Kind::Fp) return x;
  mpz_class m = p_, den = x.get_den(), inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
    throw InputError("denominator not invertible in " + tag());
  mpz_class r = mpz_class(x.get_num()) * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return mpq_class(r);
}

bool CoefficientRing::is_unit(const mpq_class& x) const {
  switch (kind_) {
    case Kind::Q:
      return x != 0;
    case Kind::Z:
      return x == 1 || x == -1;
    case Kind::ZHalf:
      return x != 0 && contains(x) && odd_part(x.get_num()) == 1;
    case Kind::Fp:
      return contains(x) && canonical(x) != 0;
  }
  return false;
}

std::string CoefficientRing::tag() const {
  switch (kind_) {
    case Kind::Z:
      return "Z";
    case Kind::ZHalf:
      return "Z[1/2]";
    case Kind::Q:
      return "Q";
    case Kind::Fp:
      return "F" + std::to_string(p_);
  }
  return "?";
}

Realization::Realization(CoefficientRing ring, CoxeterSystem coxeter, std::vector<QVec> coroots, std::vector<QVec> roots)
    : ring_(ring), coxeter_(std::move(coxeter)) {
  if (coroots.size() != coxeter_.rank() || roots.size() != coxeter_.rank())
    throw InputError("realization needs one root and one coroot per generator");
  rank_ = coroots.empty() ? 0 : coroots[0].size();
  for (size_t s = 0; s < coroots.size(); ++s) {
    if (coroots[s].size() != rank_ || roots[s].size() != rank_)
      throw InputError("realization vectors have inconsistent length");
    coroots_.push_back(canonical_vec(ring_, coroots[s]));
    roots_.push_back(canonical_vec(ring_, roots[s]));
  }
  validate();
}

mpq_class Realization::pairing(Gen s, Gen t) const { return ring_.canonical(dot(roots_[t], coroots_[s])); }

QMat Realization::cartan_pairing() const {
  size_t n = generators();
  QMat a(n, QVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) a[i][j] = pairing(static_cast<Gen>(i), static_cast<Gen>(j));
  return a;
}

QVec Realization::act_on_vector(Gen s, const QVec& x) const {
  mpq_class c = dot(roots_[s], x);
  QVec y(rank_);
  for (size_t k = 0; k < rank_; ++k) y[k] = ring_.canonical(x[k] - c * coroots_[s][k]);
  return y;
}

QVec Realization::act_on_covector(Gen s, const QVec& f) const {
  mpq_class c = dot(f, coroots_[s]);
  QVec y(rank_);
  for (size_t k = 0; k < rank_; ++k) y[k] = ring_.canonical(f[k] - c * roots_[s][k]);
  return y;
}

void Realization::validate() const {
  size_t n = generators();
  for (size_t s = 0; s < n; ++s)
    if (pairing(s, s) != ring_.canonical(2)) throw InputError("realization: alpha_s(alpha_s^vee) != 2");
  for (size_t s = 0; s < n; ++s)
    for (size_t t = s + 1; t < n; ++t) {
      int m = coxeter_.order(s, t);
      if (m == CoxeterSystem::kInfinity) continue;
      for (size_t k = 0; k < rank_; ++k) {
        QVec a(rank_, 0), b(rank_, 0);
        a[k] = b[k] = 1;
        // Rightmost letter acts first; both words have m letters.
        for (int i = 0; i < m; ++i) {
          a = act_on_vector((i % 2 == 0) ? t : s, a);
          b = act_on_vector((i % 2 == 0) ? s : t, b);
        }
        if (a != b)
          throw InputError("realization: braid relation fails for " + coxeter_.labels()[s] + "," +
                           coxeter_.labels()[t]);
      }
    }
}

nlohmann::json Realization::to_json() const {
  auto mat = [](const std::vector<QVec>& m) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : m) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& x : row) r.push_back(x.get_str());
      out.push_back(r);
    }
    return out;
  };
  return {{"ring", ring_.tag()}, {"gcm", coxeter_.gcm().to_json()}, {"coroots", mat(coroots_)}, {"roots", mat(roots_)}};
}

Realization Realization::from_json(const nlohmann::json& j) {
  auto mat = [](const nlohmann::json& m) {
    std::vector<QVec> out;
    for (const auto& row : m) {
      QVec r;
      for (const auto& x : row) r.emplace_back(x.get<std::string>());
      for (auto& x : r) x.canonicalize();
      out.push_back(r);
    }
    return out;
  };
  return Realization(CoefficientRing::parse(j.at("ring").get<std::string>()),
                     coxeter_from_gcm(CartanMatrix::from_json(j.at("gcm"))), mat(j.at("coroots")),
                     mat(j.at("roots")));
}

bool datum_needs_half(const KacMoodyRootDatum& datum) {
  auto primitive = [](const IntVec& v) {
    long g = 0;
    for (long x : v) g = std::gcd(g, std::abs(x));
    return g == 1;
  };
  for (const auto& r : datum.simple_roots)
    if (!primitive(r)) return true;
  for (const auto& c : datum.simple_coroots)
    if (!primitive(c)) return true;
  return false;
}

Realization cartan_realization(const KacMoodyRootDatum& datum, const CoefficientRing& ring) {
  datum.validate();
  if (datum_needs_half(datum)) require_two_invertible(ring);
  auto conv = [](const std::vector<IntVec>& vs) {
    std::vector<QVec> out;
    for (const auto& v : vs) {
      QVec q;
      for (long x : v) q.emplace_back(x);
      out.push_back(q);
    }
    return out;
  };
  return Realization(ring, coxeter_from_gcm(datum.gcm), conv(datum.simple_coroots), conv(datum.simple_roots));
}

bool check_demazure_surjectivity(const Realization& r) {
  for (size_t s = 0; s < r.generators(); ++s) {
    if (!generates_unit_ideal(r.ring(), r.root(s))) return false;
    if (!generates_unit_ideal(r.ring(), r.coroot(s))) return false;
  }
  return true;
}

Realization dual_realization(const Realization& r) {
  std::vector<QVec> coroots, roots;
  for (size_t s = 0; s < r.generators(); ++s) {
    coroots.push_back(r.root(s));
    roots.push_back(r.coroot(s));
  }
  return Realization(r.ring(), coxeter_from_gcm(r.coxeter().gcm().transposed()), coroots, roots);
}

QVec w_action(const Realization& r, Gen s, const QVec& x, Operand kind) {
  if (x.size() != r.rank()) throw InputError("w_action: vector of wrong length");
  return kind == Operand::Vector ? r.act_on_vector(s, x) : r.act_on_covector(s, x);
}

std::vector<long> symmetrizer(const CartanMatrix& gcm) {
  auto eps = gcm.symmetrizer();
  if (!eps) throw InputError("Cartan matrix is not symmetrizable");
  return *eps;
}

QVec PhiIsomorphism::apply(const QVec& x) const {
  QVec y(matrix.empty() ? 0 : matrix[0].size(), 0);
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < y.size(); ++j) y[j] += x[i] * matrix[i][j];
  return y;
}

PhiIsomorphism phi_isomorphism(const Realization& r) {
  const CoefficientRing& ring = r.ring();
  size_t n = r.generators();
  const CartanMatrix& gcm = r.coxeter().gcm();
  if (!gcm.is_finite_type()) throw InputError("phi needs a finite-type Cartan matrix");
  require_two_invertible(ring);
  for (long p : FiniteRootSystem(gcm).non_very_good_primes())
    if (!ring.is_unit(p)) throw InputError("phi needs the prime " + std::to_string(p) + " invertible");
  if (r.rank() != n) throw InputError("phi needs the coroots to form a basis of V");
  QMat c(n);
  for (size_t i = 0; i < n; ++i) c[i] = r.coroot(i);
  mpq_class det = determinant_q(c);
  if (!ring.is_unit(det)) throw InputError("phi: coroots are not a basis over " + ring.tag());
  auto cinv = *inverse_q(c);
  std::vector<long> eps = symmetrizer(gcm);
  QMat scaled(n);
  for (size_t i = 0; i < n; ++i) {
    scaled[i] = r.root(i);
    for (auto& x : scaled[i]) x *= eps[i];
  }
  PhiIsomorphism phi;
  phi.matrix = multiply_q(cinv, scaled);
  for (auto& row : phi.matrix)
    for (auto& x : row) x = ring.canonical(x);
  if (!ring.is_unit(determinant_q(phi.matrix))) throw InputError("phi: symmetrized pairing is degenerate over " + ring.tag());
  for (long e : eps) phi.b.push_back(ring.canonical(e));
  return phi;
}

Realization affine_realization(const CartanMatrix& finite, const CoefficientRing& ring,
                               const std::vector<std::string>& order) {
  if (!finite.is_finite_type()) throw InputError("affine realization needs a finite-type root datum");
  AffineWeylGroup aff(finite, order);
  const FiniteRootSystem& rs = aff.roots();
  size_t n = finite.rank();
  KacMoodyRootDatum datum{aff.group().system().gcm(), n, {}, {}};
  datum.simple_roots.resize(n + 1);
  datum.simple_coroots.resize(n + 1);
  for (size_t i = 0; i < n; ++i) {
    Gen g = aff.finite_generators()[i];
    IntVec root(n, 0), coroot(n);
    root[i] = 1;
    for (size_t k = 0; k < n; ++k) coroot[k] = finite(i, k);
    datum.simple_roots[g] = root;
    datum.simple_coroots[g] = coroot;
  }
  IntVec theta = rs.highest_root();
  IntVec tv = aff.coroot_to_coords(rs.highest_root_coroot());
  for (auto& x : theta) x = -x;
  for (auto& x : tv) x = -x;
  datum.simple_roots[aff.affine_generator()] = theta;
  datum.simple_coroots[aff.affine_generator()] = tv;
  return cartan_realization(datum, ring);
}

Realization faithful_realization(const CartanMatrix& gcm) {
  return cartan_realization(KacMoodyRootDatum::minimal_independent(gcm), CoefficientRing::rationals());
}

}  // namespace pcanon
