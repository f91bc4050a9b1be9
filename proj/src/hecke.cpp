#include "pcanon/hecke.hpp"

#include <algorithm>

#include "pcanon/errors.hpp"

namespace pcanon {

namespace {

const LaurentPoly& vinv_minus_v() {
  static const LaurentPoly p = LaurentPoly::v(-1) - LaurentPoly::v(1);
  return p;
}

LaurentPoly signed_power(size_t k) {
  // (-v)^k
  return LaurentPoly::monomial(k % 2 ? -1 : 1, static_cast<int>(k));
}

}  // namespace

HeckeElement HeckeElement::basis(const Element& w, LaurentPoly c) {
  HeckeElement h;
  h.add(w, c);
  return h;
}

LaurentPoly HeckeElement::coeff(const Element& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? LaurentPoly() : it->second;
}

void HeckeElement::add(const Element& w, const LaurentPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

HeckeElement& HeckeElement::operator+=(const HeckeElement& o) {
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

HeckeElement& HeckeElement::operator-=(const HeckeElement& o) {
  for (const auto& [w, c] : o.terms_) add(w, -c);
  return *this;
}

HeckeElement HeckeElement::scaled(const LaurentPoly& c) const {
  HeckeElement r;
  if (c.is_zero()) return r;
  for (const auto& [w, d] : terms_) r.add(w, d * c);
  return r;
}

nlohmann::json HeckeElement::to_json(const CoxeterSystem& sys) const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [w, c] : terms_) j[sys.format_word(w.word())] = c.to_json();
  return j;
}

HeckeElement HeckeElement::from_json(const nlohmann::json& j, const CoxeterGroup& W) {
  if (!j.is_object()) throw InputError("Hecke element JSON must be an object");
  HeckeElement h;
  for (const auto& [k, val] : j.items())
    h.add(W.normal_form(W.system().parse_word(k)), LaurentPoly::from_json(val));
  return h;
}

std::string HeckeElement::to_string(const CoxeterSystem& sys) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!out.empty()) out += " + ";
    out += "(" + it->second.to_string() + ")H[" + sys.format_word(it->first.word()) + "]";
  }
  return out;
}

LaurentPoly pairing(const HeckeElement& a, const HeckeElement& b) {
  LaurentPoly r;
  const auto& small = a.terms().size() <= b.terms().size() ? a : b;
  const auto& big = &small == &a ? b : a;
  for (const auto& [w, c] : small.terms()) {
    auto it = big.terms().find(w);
    if (it != big.terms().end()) r += c * it->second;
  }
  return r;
}

HeckeElement HeckeAlgebra::right_mul_gen(const HeckeElement& a, Gen s) const {
  HeckeElement r;
  for (const auto& [x, c] : a.terms()) {
    Element xs = W_.mul_gen(x, s);
    r.add(xs, c);
    if (xs.length() < x.length()) r.add(x, c * vinv_minus_v());
  }
  return r;
}

HeckeElement HeckeAlgebra::left_mul_gen(Gen s, const HeckeElement& a) const {
  HeckeElement r;
  for (const auto& [x, c] : a.terms()) {
    Element sx = W_.gen_mul(s, x);
    r.add(sx, c);
    if (sx.length() < x.length()) r.add(x, c * vinv_minus_v());
  }
  return r;
}

HeckeElement HeckeAlgebra::multiply(const HeckeElement& a, const HeckeElement& b) const {
  HeckeElement r;
  for (const auto& [y, d] : b.terms()) {
    HeckeElement t = a;
    for (Gen s : y.word()) t = right_mul_gen(t, s);
    r += t.scaled(d);
  }
  return r;
}

HeckeElement HeckeAlgebra::bs_element(std::span<const Gen> expr) const {
  HeckeElement r = HeckeElement::basis(W_.identity());
  for (Gen s : expr) {
    if (s >= W_.rank()) throw InputError("generator index out of range");
    HeckeElement t = right_mul_gen(r, s);
    t += r.scaled(LaurentPoly::v(1));
    r = std::move(t);
  }
  return r;
}

HeckeElement HeckeAlgebra::bar_standard(const Element& w) const {
  {
    std::shared_lock lock(bar_mutex_);
    auto it = bar_cache_.find(w);
    if (it != bar_cache_.end()) return it->second;
  }
  HeckeElement r;
  if (w.is_identity()) {
    r = HeckeElement::basis(w);
  } else {
    // bar(H_{w's}) = bar(H_{w'}) (H_s + v - v^-1)
    Gen s = w.word().back();
    Element head = W_.normal_form(std::span<const Gen>(w.word()).first(w.length() - 1));
    HeckeElement b = bar_standard(head);
    r = right_mul_gen(b, s);
    r += b.scaled(-vinv_minus_v());
  }
  std::unique_lock lock(bar_mutex_);
  bar_cache_.emplace(w, r);
  return r;
}

HeckeElement HeckeAlgebra::bar(const HeckeElement& a) const {
  HeckeElement r;
  for (const auto& [x, c] : a.terms()) r += bar_standard(x).scaled(c.bar());
  return r;
}

HeckeElement HeckeAlgebra::kl_basis(const Element& w) const {
  {
    std::shared_lock lock(kl_mutex_);
    auto it = kl_cache_.find(w);
    if (it != kl_cache_.end()) return it->second;
  }
  HeckeElement r = compute_kl(w);
  std::unique_lock lock(kl_mutex_);
  kl_cache_.emplace(w, r);
  return r;
}

HeckeElement HeckeAlgebra::compute_kl(const Element& w) const {
  if (w.is_identity()) return HeckeElement::basis(w);
  Gen s = w.word().front();
  Element tail = W_.normal_form(std::span<const Gen>(w.word()).subspan(1));
  HeckeElement bt = kl_basis(tail);
  // b_s b_tail = b_w + sum_{z < tail, sz < z} mu(z, tail) b_z
  HeckeElement r = left_mul_gen(s, bt);
  r += bt.scaled(LaurentPoly::v(1));
  for (const auto& [z, h] : bt.terms()) {
    if (z == tail) continue;
    mpz_class mu = h.coeff(1);
    if (mu == 0 || !W_.is_left_descent(s, z)) continue;
    r -= kl_basis(z).scaled(LaurentPoly(mu));
  }
  return r;
}

std::map<Element, LaurentPoly> HeckeAlgebra::kl_expansion(const HeckeElement& a) const {
  std::map<Element, LaurentPoly> out;
  HeckeElement rest = a;
  while (!rest.is_zero()) {
    auto top = std::prev(rest.terms().end());
    Element x = top->first;
    LaurentPoly c = top->second;
    out[x] += c;
    rest -= kl_basis(x).scaled(c);
  }
  return out;
}

std::map<std::pair<Element, int>, mpz_class> HeckeAlgebra::standard_multiplicities(
    std::span<const Gen> expr) const {
  std::map<std::pair<Element, int>, mpz_class> out;
  HeckeElement bs = bs_element(expr);
  for (const auto& [y, c] : bs.terms())
    for (const auto& [n, k] : c.terms()) out[{y, n}] = k;
  return out;
}

LaurentPoly HeckeAlgebra::graded_hom_rank(std::span<const Gen> v, std::span<const Gen> w) const {
  return pairing(bs_element(v), bs_element(w));
}

AntisphericalElement HeckeAlgebra::antispherical_project(const HeckeElement& a,
                                                         const std::vector<Gen>& J) const {
  W_.require_finite_parabolic(J);
  AntisphericalElement out{J, {}};
  for (const auto& [x, c] : a.terms()) {
    auto [u, y] = W_.parabolic_decomposition(x, J);
    out.value.add(y, c * signed_power(u.length()));
  }
  return out;
}

AntisphericalElement HeckeAlgebra::antispherical_right_mul_bs(const AntisphericalElement& n,
                                                             Gen s) const {
  HeckeElement lift = n.value;
  HeckeElement t = right_mul_gen(lift, s);
  t += lift.scaled(LaurentPoly::v(1));
  return antispherical_project(t, n.J);
}

InversionReport HeckeAlgebra::kl_inversion_check(size_t max_length) const {
  InversionReport rep;
  std::vector<Element> els = W_.enumerate(max_length);
  size_t n = els.size();
  rep.elements = n;
  const CoxeterSystem& sys = W_.system();
  auto name = [&](const Element& e) { return sys.format_word(e.word()); };
  auto sign = [](size_t a, size_t b) { return (a + b) % 2 ? -1 : 1; };

  // h[y][w] and g = h^{-1}; both unitriangular in ShortLex order.
  std::vector<std::vector<LaurentPoly>> h(n, std::vector<LaurentPoly>(n));
  std::map<Element, size_t> index;
  for (size_t i = 0; i < n; ++i) index[els[i]] = i;
  for (size_t w = 0; w < n; ++w) {
    HeckeElement b = kl_basis(els[w]);
    for (const auto& [y, c] : b.terms()) h[index.at(y)][w] = c;
  }
  std::vector<std::vector<LaurentPoly>> g(n, std::vector<LaurentPoly>(n));
  for (size_t w = 0; w < n; ++w) {
    g[w][w] = 1;
    for (size_t y = w; y-- > 0;) {
      LaurentPoly acc;
      for (size_t z = y + 1; z <= w; ++z)
        if (!h[y][z].is_zero() && !g[z][w].is_zero()) acc += h[y][z] * g[z][w];
      g[y][w] = -acc;
    }
  }

  // bar(H_w) = sum_z r_{z,w} H_z must equal D Q with
  // D_{z,y} = (-1)^{l(z)+l(y)} h_{z,y}(v^-1), Q_{y,w} = (-1)^{l(y)+l(w)} g_{y,w}.
  for (size_t w = 0; w < n && rep.ok; ++w) {
    HeckeElement r = bar_standard(els[w]);
    for (size_t z = 0; z <= w; ++z) {
      LaurentPoly acc;
      for (size_t y = z; y <= w; ++y) {
        if (h[z][y].is_zero() || g[y][w].is_zero()) continue;
        acc += h[z][y].bar() * g[y][w];
      }
      if (sign(els[z].length(), els[w].length()) < 0) acc = -acc;
      if (!(acc == r.coeff(els[z]))) {
        rep.ok = false;
        rep.failure = "bar factorization fails at (" + name(els[z]) + ", " + name(els[w]) + ")";
        break;
      }
    }
  }

  // For a finite group enumerated in full: g_{y,w} = (-1)^{l(y)+l(w)} h_{w0 w, w0 y}.
  if (rep.ok && sys.gcm().is_finite_type()) {
    Element w0 = W_.longest_element();
    if (w0.length() <= max_length) {
      rep.used_longest_element = true;
      for (size_t w = 0; w < n && rep.ok; ++w)
        for (size_t y = 0; y < n; ++y) {
          size_t a = index.at(W_.multiply(w0, els[w]));
          size_t b = index.at(W_.multiply(w0, els[y]));
          LaurentPoly expect = h[a][b];
          if (sign(els[y].length(), els[w].length()) < 0) expect = -expect;
          if (!(g[y][w] == expect)) {
            rep.ok = false;
            rep.failure = "inversion formula fails at (" + name(els[y]) + ", " + name(els[w]) + ")";
            break;
          }
        }
    }
  }
  return rep;
}

}  // namespace pcanon
