#include "pcanon/coxeter.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "pcanon/errors.hpp"

namespace pcanon {

size_t WordHash::operator()(const Word& w) const noexcept {
  // FNV-1a
  size_t h = 1469598103934665603ULL;
  for (Gen g : w) {
    h ^= g;
    h *= 1099511628211ULL;
  }
  return h ^ w.size();
}

CoxeterSystem::CoxeterSystem(CartanMatrix gcm) : gcm_(std::move(gcm)) {
  size_t n = gcm_.rank();
  if (n > 64) throw InputError("at most 64 generators are supported");
  m_.assign(n, std::vector<int>(n, 1));
  for (size_t s = 0; s < n; ++s)
    for (size_t t = 0; t < n; ++t) {
      if (s == t) continue;
      int prod = gcm_(s, t) * gcm_(t, s);
      switch (prod) {
        case 0: m_[s][t] = 2; break;
        case 1: m_[s][t] = 3; break;
        case 2: m_[s][t] = 4; break;
        case 3: m_[s][t] = 6; break;
        default: m_[s][t] = kInfinity; break;
      }
    }
}

CoxeterSystem coxeter_from_gcm(const CartanMatrix& gcm) { return CoxeterSystem(gcm); }

Word CoxeterSystem::parse_word(const std::string& text) const {
  std::string t;
  for (char c : text)
    if (c != '(' && c != ')') t += c;
  std::vector<std::string> tokens;
  std::string cur;
  bool separated = false;
  for (char c : t) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      separated = true;
      if (!cur.empty()) tokens.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  Word out;
  if (tokens.empty() || (tokens.size() == 1 && tokens[0] == "e")) return out;

  auto lookup = [&](const std::string& tok) -> std::optional<Gen> {
    if (auto i = gcm_.index_of(tok)) return static_cast<Gen>(*i);
    if (auto i = gcm_.index_of("s" + tok)) return static_cast<Gen>(*i);
    return std::nullopt;
  };
  for (const auto& tok : tokens) {
    if (auto g = lookup(tok)) {
      out.push_back(*g);
      continue;
    }
    if (separated) throw InputError("unknown generator '" + tok + "'");
    // Unseparated text: digits one per letter, otherwise longest label match.
    size_t i = 0;
    while (i < tok.size()) {
      size_t best = 0;
      Gen g = 0;
      for (size_t k = 0; k < labels().size(); ++k) {
        const auto& lab = labels()[k];
        if (lab.size() > best && tok.compare(i, lab.size(), lab) == 0) {
          best = lab.size();
          g = static_cast<Gen>(k);
        }
      }
      if (best == 0) {
        if (auto d = lookup(std::string(1, tok[i]))) {
          best = 1;
          g = *d;
        }
      }
      if (best == 0) throw InputError("cannot parse expression '" + text + "'");
      out.push_back(g);
      i += best;
    }
  }
  return out;
}

std::string CoxeterSystem::format_word(const Word& w) const {
  if (w.empty()) return "e";
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ',';
    out += labels().at(w[i]);
  }
  return out;
}

CoxeterGroup::CoxeterGroup(CoxeterSystem sys) : sys_(std::move(sys)) {}

Element CoxeterGroup::generator(Gen s) const {
  if (s >= rank()) throw InputError("generator index out of range");
  return Element(Word{s});
}

namespace {

// s(beta) = beta - <beta, alpha_s^vee> alpha_s in simple root coordinates.
inline void reflect(const CartanMatrix& a, Gen s, std::vector<long>& beta) {
  long c = 0;
  for (size_t j = 0; j < beta.size(); ++j) c += beta[j] * a(s, j);
  beta[s] -= c;
}

inline bool is_negative(const std::vector<long>& v) {
  for (long x : v) {
    if (x < 0) return true;
    if (x > 0) return false;
  }
  return false;
}

}  // namespace

Word CoxeterGroup::compute_normal_form(std::span<const Gen> expr) const {
  const CartanMatrix& a = sys_.gcm();
  size_t n = rank();
  for (Gen g : expr)
    if (g >= n) throw InputError("generator index out of range");
  // cols[t] = u^{-1}(alpha_t) for the remaining element u.
  std::vector<std::vector<long>> cols(n, std::vector<long>(n, 0));
  for (size_t t = 0; t < n; ++t) cols[t][t] = 1;
  for (Gen g : expr)
    for (auto& c : cols) reflect(a, g, c);
  Word out;
  while (true) {
    size_t s = n;
    for (size_t t = 0; t < n; ++t)
      if (is_negative(cols[t])) {
        s = t;
        break;
      }
    if (s == n) break;
    out.push_back(static_cast<Gen>(s));
    // u <- s u, so u^{-1} <- u^{-1} s: col_t -= a_st col_s.
    std::vector<long> cs = cols[s];
    for (size_t t = 0; t < n; ++t) {
      long f = a(s, t);
      if (f == 0) continue;
      for (size_t k = 0; k < n; ++k) cols[t][k] -= f * cs[k];
    }
  }
  return out;
}

Element CoxeterGroup::normal_form(std::span<const Gen> expr) const {
  Word key(expr.begin(), expr.end());
  {
    std::shared_lock lock(nf_mutex_);
    auto it = nf_cache_.find(key);
    if (it != nf_cache_.end()) return Element(it->second);
  }
  Word nf = compute_normal_form(expr);
  {
    std::unique_lock lock(nf_mutex_);
    nf_cache_.emplace(std::move(key), nf);
  }
  return Element(std::move(nf));
}

Element CoxeterGroup::multiply(const Element& x, const Element& y) const {
  Word w = x.word();
  w.insert(w.end(), y.word().begin(), y.word().end());
  return normal_form(w);
}

Element CoxeterGroup::mul_gen(const Element& w, Gen s) const {
  Word e = w.word();
  e.push_back(s);
  return normal_form(e);
}

Element CoxeterGroup::gen_mul(Gen s, const Element& w) const {
  Word e;
  e.reserve(w.length() + 1);
  e.push_back(s);
  e.insert(e.end(), w.word().begin(), w.word().end());
  return normal_form(e);
}

Element CoxeterGroup::inverse(const Element& w) const {
  Word r(w.word().rbegin(), w.word().rend());
  return normal_form(r);
}

std::vector<long> CoxeterGroup::act_on_root(const Element& w, Gen s) const {
  std::vector<long> beta(rank(), 0);
  beta[s] = 1;
  for (auto it = w.word().rbegin(); it != w.word().rend(); ++it) reflect(sys_.gcm(), *it, beta);
  return beta;
}

bool CoxeterGroup::is_right_descent(const Element& w, Gen s) const {
  return is_negative(act_on_root(w, s));
}

bool CoxeterGroup::is_left_descent(Gen s, const Element& w) const {
  // sw < w iff w^{-1}(alpha_s) < 0.
  std::vector<long> beta(rank(), 0);
  beta[s] = 1;
  for (Gen g : w.word()) reflect(sys_.gcm(), g, beta);
  return is_negative(beta);
}

bool CoxeterGroup::is_reduced(std::span<const Gen> expr) const {
  return normal_form(expr).length() == expr.size();
}

bool CoxeterGroup::bruhat_leq(const Element& x, const Element& y) const {
  if (x.length() > y.length()) return false;
  if (x == y) return true;
  if (y.is_identity()) return x.is_identity();
  if (x.is_identity()) return true;
  Word key = x.word();
  key.push_back(0xFF);
  key.insert(key.end(), y.word().begin(), y.word().end());
  {
    std::shared_lock lock(bruhat_mutex_);
    auto it = bruhat_cache_.find(key);
    if (it != bruhat_cache_.end()) return it->second;
  }
  // Lifting property with s the first letter of y (so sy < y).
  Gen s = y.word().front();
  Element sy = normal_form(std::span<const Gen>(y.word()).subspan(1));
  bool result = is_left_descent(s, x) ? bruhat_leq(gen_mul(s, x), sy) : bruhat_leq(x, sy);
  {
    std::unique_lock lock(bruhat_mutex_);
    bruhat_cache_.emplace(std::move(key), result);
  }
  return result;
}

std::vector<Element> CoxeterGroup::bruhat_interval_below(const Element& w) const {
  std::set<Element> acc{identity()};
  // Products of subwords of a reduced word, built left to right.
  for (auto it = w.word().rbegin(); it != w.word().rend(); ++it) {
    std::set<Element> next = acc;
    for (const auto& x : acc) next.insert(gen_mul(*it, x));
    acc.swap(next);
  }
  return {acc.begin(), acc.end()};
}

std::vector<Element> CoxeterGroup::enumerate(size_t max_length, size_t cap) const {
  std::vector<Element> out{identity()};
  std::vector<Element> level{identity()};
  for (size_t len = 1; len <= max_length; ++len) {
    std::set<Element> next;
    for (const auto& w : level)
      for (Gen s = 0; s < rank(); ++s)
        if (!is_right_descent(w, s)) next.insert(mul_gen(w, s));
    if (next.empty()) break;
    if (out.size() + next.size() > cap)
      throw ResourceError("enumeration exceeds cap of " + std::to_string(cap) + " elements");
    level.assign(next.begin(), next.end());
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

bool CoxeterGroup::is_finite_parabolic(const std::vector<Gen>& J) const {
  std::vector<size_t> idx;
  for (Gen s : J) {
    if (s >= rank()) throw InputError("parabolic subset has an unknown generator");
    idx.push_back(s);
  }
  if (idx.empty()) return true;
  for (Gen s : J)
    for (Gen t : J)
      if (sys_.order(s, t) == CoxeterSystem::kInfinity) return false;
  return sys_.gcm().restricted(idx).is_finite_type();
}

void CoxeterGroup::require_finite_parabolic(const std::vector<Gen>& J) const {
  if (!is_finite_parabolic(J)) throw InputError("parabolic subgroup W_J is infinite");
}

bool CoxeterGroup::is_min_coset_rep(const Element& w, const std::vector<Gen>& J) const {
  require_finite_parabolic(J);
  for (Gen s : J)
    if (is_left_descent(s, w)) return false;
  return true;
}

std::pair<Element, Element> CoxeterGroup::parabolic_decomposition(const Element& x,
                                                                  const std::vector<Gen>& J) const {
  require_finite_parabolic(J);
  Element u = identity(), y = x;
  bool moved = true;
  while (moved) {
    moved = false;
    for (Gen s : J) {
      if (is_left_descent(s, y)) {
        y = gen_mul(s, y);
        u = mul_gen(u, s);
        moved = true;
        break;
      }
    }
  }
  return {u, y};
}

Element CoxeterGroup::longest_element() const {
  if (!sys_.gcm().is_finite_type()) throw InputError("group is infinite: no longest element");
  Element w = identity();
  bool grew = true;
  while (grew) {
    grew = false;
    for (Gen s = 0; s < rank(); ++s)
      if (!is_right_descent(w, s)) {
        w = mul_gen(w, s);
        grew = true;
        break;
      }
  }
  return w;
}

}  // namespace pcanon
