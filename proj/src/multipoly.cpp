#include "pcanon/multipoly.hpp"

#include <algorithm>

#include "pcanon/errors.hpp"

namespace pcanon {

MultiPoly MultiPoly::constant(const mpq_class& c) { return monomial(0, c); }

MultiPoly MultiPoly::variable(size_t k) {
  if (k >= kMaxVars) throw InputError("too many polynomial variables");
  return monomial(unit(k));
}

MultiPoly MultiPoly::linear(const std::vector<mpq_class>& coeffs) {
  if (coeffs.size() > kMaxVars) throw InputError("too many polynomial variables");
  MultiPoly p;
  for (size_t k = 0; k < coeffs.size(); ++k) p.add_term(unit(k), coeffs[k]);
  return p;
}

MultiPoly MultiPoly::monomial(Mono m, const mpq_class& c) {
  MultiPoly p;
  p.add_term(m, c);
  return p;
}

unsigned MultiPoly::mono_degree(Mono m) {
  unsigned d = 0;
  for (size_t k = 0; k < kMaxVars; ++k) d += exponent(m, k);
  return d;
}

std::vector<MultiPoly::Mono> MultiPoly::monomials_of_degree(size_t n, unsigned d) {
  std::vector<Mono> out;
  if (n == 0) {
    if (d == 0) out.push_back(0);
    return out;
  }
  // Recursive composition of d into n parts.
  std::vector<unsigned> e(n, 0);
  auto rec = [&](auto&& self, size_t k, unsigned left) -> void {
    if (k + 1 == n) {
      e[k] = left;
      Mono m = 0;
      for (size_t i = 0; i < n; ++i) m |= Mono{e[i]} << (8 * i);
      out.push_back(m);
      return;
    }
    for (unsigned x = 0; x <= left; ++x) {
      e[k] = x;
      self(self, k + 1, left - x);
    }
  };
  rec(rec, 0, d);
  std::sort(out.begin(), out.end());
  return out;
}

int MultiPoly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(mono_degree(m)));
  return d;
}

bool MultiPoly::is_homogeneous() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int e = static_cast<int>(mono_degree(m));
    if (d >= 0 && e != d) return false;
    d = e;
  }
  return true;
}

mpq_class MultiPoly::coeff(Mono m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? mpq_class(0) : it->second;
}

void MultiPoly::add_term(Mono m, const mpq_class& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const mpq_class& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, d] : terms_) d *= c;
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [m, d] : r.terms_) d = -d;
  return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      // Exponents stay below 256 in every computation we perform.
      r.add_term(ma + mb, ca * cb);
    }
  return r;
}

MultiPoly MultiPoly::substitute(const std::vector<MultiPoly>& images) const {
  MultiPoly r;
  for (const auto& [m, c] : terms_) {
    MultiPoly t = constant(c);
    for (size_t k = 0; k < kMaxVars; ++k) {
      unsigned e = exponent(m, k);
      if (e == 0) continue;
      if (k >= images.size()) throw InputError("substitution misses a variable");
      for (unsigned i = 0; i < e; ++i) t = t * images[k];
    }
    r += t;
  }
  return r;
}

mpq_class MultiPoly::evaluate(const std::vector<mpq_class>& point) const {
  mpq_class r = 0;
  for (const auto& [m, c] : terms_) {
    mpq_class t = c;
    for (size_t k = 0; k < kMaxVars; ++k) {
      unsigned e = exponent(m, k);
      if (e == 0) continue;
      if (k >= point.size()) throw InputError("evaluation point too short");
      for (unsigned i = 0; i < e; ++i) t *= point[k];
    }
    r += t;
  }
  return r;
}

MultiPoly MultiPoly::divide_by_linear(const MultiPoly& lin) const {
  // Pick the largest variable k occurring in lin; divide as a polynomial in x_k.
  size_t k = kMaxVars;
  mpq_class lead;
  for (const auto& [m, c] : lin.terms_) {
    if (mono_degree(m) != 1) throw InputError("divisor is not a linear form");
    for (size_t i = 0; i < kMaxVars; ++i)
      if (exponent(m, i) == 1 && (k == kMaxVars || i > k)) {
        k = i;
        lead = c;
      }
  }
  if (k == kMaxVars) throw InputError("division by zero linear form");
  MultiPoly rest = lin;
  rest.add_term(unit(k), -lead);  // lin = lead x_k + rest
  MultiPoly rem = *this, quot;
  while (true) {
    // Highest power of x_k present in the remainder.
    unsigned top = 0;
    for (const auto& [m, c] : rem.terms_) top = std::max(top, exponent(m, k));
    if (top == 0) break;
    MultiPoly step;
    for (const auto& [m, c] : rem.terms_)
      if (exponent(m, k) == top) step.add_term(m - unit(k), c / lead);
    quot += step;
    rem -= step * lin;
  }
  if (!rem.is_zero()) throw InconsistencyError("polynomial is not divisible by the linear form");
  return quot;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += c.get_str();
    for (size_t k = 0; k < kMaxVars; ++k) {
      unsigned e = exponent(m, k);
      if (e == 0) continue;
      out += "*x" + std::to_string(k);
      if (e > 1) out += "^" + std::to_string(e);
    }
  }
  return out;
}

}  // namespace pcanon
