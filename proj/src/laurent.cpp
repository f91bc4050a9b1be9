#include "pcanon/laurent.hpp"

#include <cctype>

#include "pcanon/errors.hpp"

namespace pcanon {

LaurentPoly::LaurentPoly(long c) {
  if (c != 0) terms_.emplace(0, c);
}

LaurentPoly::LaurentPoly(const Coeff& c) {
  if (c != 0) terms_.emplace(0, c);
}

LaurentPoly LaurentPoly::monomial(const Coeff& c, int exp) {
  LaurentPoly p;
  if (c != 0) p.terms_.emplace(exp, c);
  return p;
}

LaurentPoly::Coeff LaurentPoly::coeff(int exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? Coeff(0) : it->second;
}

int LaurentPoly::min_degree() const { return terms_.begin()->first; }
int LaurentPoly::max_degree() const { return terms_.rbegin()->first; }

void LaurentPoly::add_term(int exp, const Coeff& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(exp, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

LaurentPoly LaurentPoly::bar() const {
  LaurentPoly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(-e, c);
  return r;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e + k, c);
  return r;
}

LaurentPoly::Coeff LaurentPoly::at_one() const {
  Coeff s = 0;
  for (const auto& [e, c] : terms_) s += c;
  return s;
}

LaurentPoly LaurentPoly::sign_twisted() const {
  LaurentPoly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, (e % 2 == 0) ? c : Coeff(-c));
  return r;
}

bool LaurentPoly::has_nonnegative_coeffs() const {
  for (const auto& [e, c] : terms_)
    if (c < 0) return false;
  return true;
}

bool LaurentPoly::in_positive_part() const {
  return terms_.empty() || terms_.begin()->first > 0;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
  return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
  *this = *this * o;
  return *this;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    mpz_class mag = abs(c);
    if (c < 0)
      out += '-';
    else if (!first)
      out += '+';
    first = false;
    if (e == 0) {
      out += mag.get_str();
      continue;
    }
    if (mag != 1) out += mag.get_str() + "*";
    out += 'v';
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

namespace {

struct Cursor {
  std::string_view s;
  size_t i = 0;
  bool done() const { return i >= s.size(); }
  char peek() const { return s[i]; }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw InputError("cannot parse Laurent polynomial '" + std::string(s) + "': " + why);
  }
  std::string digits() {
    size_t b = i;
    while (!done() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    return std::string(s.substr(b, i - b));
  }
};

}  // namespace

LaurentPoly LaurentPoly::parse(std::string_view text) {
  Cursor cur{text};
  LaurentPoly out;
  cur.skip_ws();
  if (cur.done()) cur.fail("empty");
  bool first = true;
  while (true) {
    cur.skip_ws();
    if (cur.done()) break;
    int sign = 1;
    // Accept "+-" as well as "-" so that strictly '+'-joined text also parses.
    while (!cur.done() && (cur.peek() == '+' || cur.peek() == '-')) {
      if (cur.peek() == '-') sign = -sign;
      ++cur.i;
      cur.skip_ws();
    }
    if (cur.done()) cur.fail("dangling sign");
    (void)first;
    first = false;
    Coeff c = 1;
    std::string num = cur.digits();
    bool has_num = !num.empty();
    if (has_num) c = Coeff(num);
    cur.skip_ws();
    int exp = 0;
    if (!cur.done() && cur.peek() == '*') {
      if (!has_num) cur.fail("'*' without coefficient");
      ++cur.i;
      cur.skip_ws();
      if (cur.done() || cur.peek() != 'v') cur.fail("expected 'v' after '*'");
    }
    if (!cur.done() && cur.peek() == 'v') {
      ++cur.i;
      exp = 1;
      cur.skip_ws();
      if (!cur.done() && cur.peek() == '^') {
        ++cur.i;
        cur.skip_ws();
        int esign = 1;
        if (!cur.done() && (cur.peek() == '-' || cur.peek() == '+')) {
          if (cur.peek() == '-') esign = -1;
          ++cur.i;
        }
        std::string ed = cur.digits();
        if (ed.empty()) cur.fail("missing exponent");
        exp = esign * std::stoi(ed);
      }
    } else if (!has_num) {
      cur.fail("expected a term");
    }
    out.add_term(exp, sign * c);
  }
  return out;
}

nlohmann::json LaurentPoly::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [e, c] : terms_) {
    if (c.fits_slong_p())
      j[std::to_string(e)] = c.get_si();
    else
      j[std::to_string(e)] = c.get_str();
  }
  return j;
}

LaurentPoly LaurentPoly::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("Laurent polynomial JSON must be an object");
  LaurentPoly p;
  for (const auto& [k, val] : j.items()) {
    int e = 0;
    try {
      e = std::stoi(k);
    } catch (const std::exception&) {
      throw InputError("bad exponent key '" + k + "'");
    }
    Coeff c;
    if (val.is_number_integer())
      c = Coeff(static_cast<long>(val.get<long long>()));
    else if (val.is_string())
      c = Coeff(val.get<std::string>());
    else
      throw InputError("bad coefficient for exponent " + k);
    p.add_term(e, c);
  }
  return p;
}

}  // namespace pcanon
