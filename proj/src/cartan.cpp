#include "pcanon/cartan.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "pcanon/errors.hpp"

namespace pcanon {

namespace {

std::vector<std::string> default_labels(size_t n, size_t first) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) out.push_back("s" + std::to_string(first + i));
  return out;
}

std::vector<std::vector<int>> zero_cartan(size_t n) {
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (size_t i = 0; i < n; ++i) a[i][i] = 2;
  return a;
}

void link(std::vector<std::vector<int>>& a, size_t i, size_t j, int aij, int aji) {
  a[i][j] = aij;
  a[j][i] = aji;
}

// Rank of a rational matrix by Gaussian elimination.
size_t rational_rank(std::vector<std::vector<mpq_class>> m) {
  size_t rows = m.size();
  if (rows == 0) return 0;
  size_t cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      mpq_class f = m[i][c] / m[r][c];
      for (size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

std::vector<long> prime_divisors(long n) {
  std::vector<long> out;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

CartanMatrix::CartanMatrix(std::vector<std::string> labels, std::vector<std::vector<int>> entries)
    : labels_(std::move(labels)), a_(std::move(entries)) {
  size_t n = a_.size();
  if (labels_.size() != n) throw InputError("Cartan matrix: label count does not match size");
  if (n == 0) throw InputError("Cartan matrix must be nonempty");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != n) throw InputError("Cartan matrix: labels must be distinct");
  for (size_t i = 0; i < n; ++i) {
    if (a_[i].size() != n) throw InputError("Cartan matrix must be square");
    if (a_[i][i] != 2) throw InputError("Cartan matrix: diagonal entries must be 2");
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (a_[i][j] > 0) throw InputError("Cartan matrix: off-diagonal entries must be <= 0");
      if ((a_[i][j] == 0) != (a_[j][i] == 0))
        throw InputError("Cartan matrix: a_ij = 0 must imply a_ji = 0");
    }
}

std::optional<size_t> CartanMatrix::index_of(std::string_view label) const {
  for (size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

CartanMatrix CartanMatrix::named(std::string_view type) {
  std::string t(type);
  bool affine = false;
  for (std::string suffix : {"~", "^(1)", "^1"}) {
    if (t.size() > suffix.size() && t.compare(t.size() - suffix.size(), suffix.size(), suffix) == 0) {
      affine = true;
      t.resize(t.size() - suffix.size());
      break;
    }
  }
  if (t.size() < 2) throw InputError("unknown Cartan type '" + std::string(type) + "'");
  char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
  int n = 0;
  try {
    size_t used = 0;
    n = std::stoi(t.substr(1), &used);
    if (used != t.size() - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw InputError("unknown Cartan type '" + std::string(type) + "'");
  }
  if (n < 1 || n > 16) throw InputError("unsupported rank in '" + std::string(type) + "'");
  auto a = zero_cartan(n);
  switch (letter) {
    case 'A':
      for (int i = 0; i + 1 < n; ++i) link(a, i, i + 1, -1, -1);
      break;
    case 'B':
    case 'C':
      if (n < 2) throw InputError("B/C types need rank >= 2");
      for (int i = 0; i + 2 < n; ++i) link(a, i, i + 1, -1, -1);
      // B_n: last root short, so alpha_{n-1}(alpha_n^vee) = -2.
      if (letter == 'B')
        link(a, n - 2, n - 1, -1, -2);
      else
        link(a, n - 2, n - 1, -2, -1);
      break;
    case 'D':
      if (n < 4) throw InputError("D types need rank >= 4");
      for (int i = 0; i + 2 < n; ++i) link(a, i, i + 1, -1, -1);
      link(a, n - 3, n - 1, -1, -1);
      break;
    case 'G':
      if (n != 2) throw InputError("G type has rank 2");
      link(a, 0, 1, -1, -3);
      break;
    case 'F':
      if (n != 4) throw InputError("F type has rank 4");
      link(a, 0, 1, -1, -1);
      link(a, 1, 2, -2, -1);
      link(a, 2, 3, -1, -1);
      break;
    case 'E':
      if (n < 6 || n > 8) throw InputError("E types have rank 6, 7 or 8");
      // Bourbaki numbering: 1-3-4-5-6-7-8 with 2 attached to 4.
      link(a, 0, 2, -1, -1);
      link(a, 1, 3, -1, -1);
      for (int i = 2; i + 1 < n; ++i) link(a, i, i + 1, -1, -1);
      break;
    default:
      throw InputError("unknown Cartan type '" + std::string(type) + "'");
  }
  CartanMatrix fin(default_labels(n, 1), a);
  return affine ? fin.affinization() : fin;
}

CartanMatrix CartanMatrix::from_json(const nlohmann::json& j) {
  if (j.is_string()) return named(j.get<std::string>());
  if (!j.is_object()) throw InputError("GCM description must be an object");
  if (j.contains("type")) return named(j.at("type").get<std::string>());
  if (!j.contains("matrix")) throw InputError("GCM description needs 'type' or 'matrix'");
  std::vector<std::vector<int>> m;
  try {
    m = j.at("matrix").get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("GCM matrix: ") + e.what());
  }
  std::vector<std::string> labels;
  if (j.contains("labels"))
    labels = j.at("labels").get<std::vector<std::string>>();
  else
    labels = default_labels(m.size(), 1);
  return CartanMatrix(labels, m);
}

nlohmann::json CartanMatrix::to_json() const {
  return nlohmann::json{{"labels", labels_}, {"matrix", a_}};
}

CartanMatrix CartanMatrix::transposed() const {
  size_t n = rank();
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) t[i][j] = a_[j][i];
  return CartanMatrix(labels_, t);
}

CartanMatrix CartanMatrix::reordered(const std::vector<size_t>& perm) const {
  size_t n = rank();
  if (perm.size() != n) throw InputError("ordering must list every generator once");
  std::vector<bool> seen(n, false);
  for (size_t p : perm) {
    if (p >= n || seen[p]) throw InputError("ordering must list every generator once");
    seen[p] = true;
  }
  std::vector<std::string> labels(n);
  std::vector<std::vector<int>> m(n, std::vector<int>(n));
  for (size_t i = 0; i < n; ++i) {
    labels[i] = labels_[perm[i]];
    for (size_t j = 0; j < n; ++j) m[i][j] = a_[perm[i]][perm[j]];
  }
  return CartanMatrix(labels, m);
}

CartanMatrix CartanMatrix::restricted(const std::vector<size_t>& subset) const {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> m;
  for (size_t i : subset) {
    labels.push_back(labels_.at(i));
    std::vector<int> row;
    for (size_t j : subset) row.push_back(a_.at(i).at(j));
    m.push_back(row);
  }
  return CartanMatrix(labels, m);
}

CartanMatrix CartanMatrix::affinization() const {
  if (!is_finite_type()) throw InputError("affinization needs a finite-type Cartan matrix");
  if (components().size() != 1) throw InputError("affinization needs an indecomposable Cartan matrix");
  FiniteRootSystem rs(*this);
  const IntVec& theta = rs.highest_root();
  const IntVec& theta_vee = rs.highest_root_coroot();
  size_t n = rank();
  std::vector<std::vector<int>> m(n + 1, std::vector<int>(n + 1, 0));
  m[0][0] = 2;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m[i + 1][j + 1] = a_[i][j];
  for (size_t j = 0; j < n; ++j) {
    long a0j = 0;  // -alpha_j(theta^vee)
    for (size_t i = 0; i < n; ++i) a0j -= theta_vee[i] * a_[i][j];
    m[0][j + 1] = static_cast<int>(a0j);
  }
  for (size_t i = 0; i < n; ++i) {
    long ai0 = 0;  // -theta(alpha_i^vee)
    for (size_t j = 0; j < n; ++j) ai0 -= theta[j] * a_[i][j];
    m[i + 1][0] = static_cast<int>(ai0);
  }
  std::vector<std::string> labels;
  std::string zero = "s0";
  while (index_of(zero)) zero += "'";
  labels.push_back(zero);
  labels.insert(labels.end(), labels_.begin(), labels_.end());
  return CartanMatrix(labels, m);
}

std::vector<std::vector<size_t>> CartanMatrix::components() const {
  size_t n = rank();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<size_t>> out;
  for (size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<size_t> members;
    std::queue<size_t> q;
    q.push(s);
    comp[s] = static_cast<int>(out.size());
    while (!q.empty()) {
      size_t i = q.front();
      q.pop();
      members.push_back(i);
      for (size_t j = 0; j < n; ++j)
        if (j != i && a_[i][j] != 0 && comp[j] < 0) {
          comp[j] = comp[s];
          q.push(j);
        }
    }
    std::sort(members.begin(), members.end());
    out.push_back(members);
  }
  return out;
}

std::optional<std::vector<long>> CartanMatrix::symmetrizer() const {
  size_t n = rank();
  std::vector<mpq_class> eps(n, 0);
  for (const auto& comp : components()) {
    eps[comp[0]] = 1;
    std::queue<size_t> q;
    q.push(comp[0]);
    std::vector<bool> done(n, false);
    done[comp[0]] = true;
    while (!q.empty()) {
      size_t i = q.front();
      q.pop();
      for (size_t j : comp) {
        if (j == i || a_[i][j] == 0) continue;
        // eps_j a_ij = eps_i a_ji
        mpq_class ej = eps[i] * a_[j][i] / mpq_class(a_[i][j]);
        if (!done[j]) {
          eps[j] = ej;
          done[j] = true;
          q.push(j);
        } else if (eps[j] != ej) {
          return std::nullopt;
        }
      }
    }
    mpz_class l = 1, g = 0;
    for (size_t j : comp) l = lcm(l, mpz_class(eps[j].get_den()));
    for (size_t j : comp) {
      eps[j] *= l;
      g = gcd(g, mpz_class(eps[j].get_num()));
    }
    for (size_t j : comp) eps[j] /= g;
  }
  std::vector<long> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = mpz_class(eps[i].get_num()).get_si();
  return out;
}

bool CartanMatrix::is_finite_type() const {
  auto eps = symmetrizer();
  if (!eps) return false;
  size_t n = rank();
  std::vector<std::vector<mpq_class>> b(n, std::vector<mpq_class>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) b[i][j] = mpq_class(a_[i][j], (*eps)[i]);
  // Positive definite iff every pivot of elimination without swaps is positive.
  for (size_t k = 0; k < n; ++k) {
    if (b[k][k] <= 0) return false;
    for (size_t i = k + 1; i < n; ++i) {
      mpq_class f = b[i][k] / b[k][k];
      for (size_t j = k; j < n; ++j) b[i][j] -= f * b[k][j];
    }
  }
  return true;
}

mpz_class CartanMatrix::determinant() const {
  size_t n = rank();
  std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m[i][j] = a_[i][j];
  mpq_class det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      mpq_class f = m[i][c] / m[c][c];
      for (size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
    }
  }
  return mpz_class(det.get_num());
}

FiniteRootSystem::FiniteRootSystem(const CartanMatrix& a) : a_(a) {
  if (!a_.is_finite_type()) throw InputError("root system needs a finite-type Cartan matrix");
  size_t n = a_.rank();
  std::map<IntVec, IntVec> found;  // root -> coroot
  std::queue<IntVec> q;
  for (size_t i = 0; i < n; ++i) {
    IntVec e(n, 0);
    e[i] = 1;
    found.emplace(e, e);
    q.push(e);
  }
  while (!q.empty()) {
    IntVec beta = q.front();
    q.pop();
    IntVec gamma = found.at(beta);
    for (size_t i = 0; i < n; ++i) {
      long c = pair_with_coroot(beta, i);
      long d = pair_root_with(i, gamma);
      IntVec nb = beta, ng = gamma;
      nb[i] -= c;
      ng[i] -= d;
      bool positive = std::all_of(nb.begin(), nb.end(), [](long x) { return x >= 0; });
      bool nonzero = std::any_of(nb.begin(), nb.end(), [](long x) { return x != 0; });
      if (positive && nonzero && !found.count(nb)) {
        found.emplace(nb, ng);
        q.push(nb);
      }
    }
  }
  for (const auto& [r, c] : found) {
    roots_.push_back(r);
    coroots_.push_back(c);
  }
  long best = -1;
  for (size_t k = 0; k < roots_.size(); ++k) {
    long h = std::accumulate(roots_[k].begin(), roots_[k].end(), 0L);
    if (h > best) {
      best = h;
      highest_ = k;
    }
  }
}

long FiniteRootSystem::coxeter_number() const {
  const IntVec& t = highest_root();
  return 1 + std::accumulate(t.begin(), t.end(), 0L);
}

long FiniteRootSystem::pair_with_coroot(const IntVec& beta, size_t i) const {
  long s = 0;
  for (size_t j = 0; j < beta.size(); ++j) s += beta[j] * a_(i, j);
  return s;
}

long FiniteRootSystem::pair_root_with(size_t i, const IntVec& gamma) const {
  long s = 0;
  for (size_t j = 0; j < gamma.size(); ++j) s += gamma[j] * a_(j, i);
  return s;
}

std::vector<std::string> FiniteRootSystem::component_types() const {
  std::vector<std::string> out;
  for (const auto& comp : a_.components()) {
    size_t n = comp.size();
    std::string name;
    if (n == 1) {
      out.push_back("A1");
      continue;
    }
    std::vector<int> degree(n, 0);
    int max_bond = 1;
    std::pair<size_t, size_t> multi{0, 0};
    for (size_t x = 0; x < n; ++x)
      for (size_t y = x + 1; y < n; ++y) {
        int prod = a_(comp[x], comp[y]) * a_(comp[y], comp[x]);
        if (prod == 0) continue;
        ++degree[x];
        ++degree[y];
        if (prod > max_bond) {
          max_bond = prod;
          multi = {x, y};
        }
      }
    if (max_bond == 3) {
      name = "G2";
    } else if (max_bond == 2) {
      auto [x, y] = multi;
      if (n == 4 && degree[x] == 2 && degree[y] == 2) {
        name = "F4";
      } else {
        // The leaf end of the double bond is short in B_n.
        size_t leaf = degree[x] == 1 ? x : y;
        size_t inner = leaf == x ? y : x;
        bool leaf_short = a_(comp[leaf], comp[inner]) == -2;
        name = std::string(leaf_short || n == 2 ? "B" : "C") + std::to_string(n);
      }
    } else {
      auto branch = std::find(degree.begin(), degree.end(), 3);
      if (branch == degree.end()) {
        name = "A" + std::to_string(n);
      } else {
        size_t b = branch - degree.begin();
        std::vector<size_t> arms;
        for (size_t start = 0; start < n; ++start) {
          if (start == b || a_(comp[b], comp[start]) == 0) continue;
          size_t len = 1, prev = b, cur = start;
          while (true) {
            size_t next = n;
            for (size_t k = 0; k < n; ++k)
              if (k != cur && k != prev && a_(comp[cur], comp[k]) != 0) next = k;
            if (next == n) break;
            prev = cur;
            cur = next;
            ++len;
          }
          arms.push_back(len);
        }
        std::sort(arms.begin(), arms.end());
        if (arms[0] == 1 && arms[1] == 1)
          name = "D" + std::to_string(n);
        else
          name = "E" + std::to_string(n);
      }
    }
    out.push_back(name);
  }
  return out;
}

std::vector<long> FiniteRootSystem::non_very_good_primes() const {
  std::set<long> bad;
  for (const auto& t : component_types()) {
    char letter = t[0];
    long n = std::stol(t.substr(1));
    if (letter == 'A') {
      for (long p : prime_divisors(n + 1)) bad.insert(p);
    } else if (letter == 'B' || letter == 'C' || letter == 'D') {
      bad.insert(2);
    } else if (t == "E8") {
      bad.insert({2, 3, 5});
    } else {
      bad.insert({2, 3});
    }
  }
  return {bad.begin(), bad.end()};
}

KacMoodyRootDatum KacMoodyRootDatum::simply_connected(const CartanMatrix& gcm) {
  if (!gcm.is_finite_type()) throw InputError("simply connected datum needs finite type");
  size_t n = gcm.rank();
  KacMoodyRootDatum d{gcm, n, {}, {}};
  for (size_t j = 0; j < n; ++j) {
    IntVec root(n), coroot(n, 0);
    for (size_t i = 0; i < n; ++i) root[i] = gcm(i, j);
    coroot[j] = 1;
    d.simple_roots.push_back(root);
    d.simple_coroots.push_back(coroot);
  }
  d.validate();
  return d;
}

KacMoodyRootDatum KacMoodyRootDatum::adjoint(const CartanMatrix& gcm) {
  if (!gcm.is_finite_type()) throw InputError("adjoint datum needs finite type");
  size_t n = gcm.rank();
  KacMoodyRootDatum d{gcm, n, {}, {}};
  for (size_t j = 0; j < n; ++j) {
    IntVec root(n, 0), coroot(n);
    root[j] = 1;
    for (size_t k = 0; k < n; ++k) coroot[k] = gcm(j, k);
    d.simple_roots.push_back(root);
    d.simple_coroots.push_back(coroot);
  }
  d.validate();
  return d;
}

KacMoodyRootDatum KacMoodyRootDatum::minimal_independent(const CartanMatrix& gcm) {
  size_t n = gcm.rank();
  std::vector<std::vector<mpq_class>> cols(n, std::vector<mpq_class>(n));
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < n; ++i) cols[j][i] = gcm(i, j);
  size_t corank = n - rational_rank(cols);
  std::vector<size_t> extra;  // root index receiving each extra coordinate
  auto roots_with = [&](const std::vector<size_t>& ex) {
    std::vector<std::vector<mpq_class>> m = cols;
    for (auto& row : m) row.resize(n + ex.size(), 0);
    for (size_t k = 0; k < ex.size(); ++k) m[ex[k]][n + k] = 1;
    return m;
  };
  for (size_t k = 0; k < corank; ++k) {
    size_t before = rational_rank(roots_with(extra));
    bool placed = false;
    for (size_t j = 0; j < n && !placed; ++j) {
      auto trial = extra;
      trial.push_back(j);
      if (rational_rank(roots_with(trial)) > before) {
        extra = trial;
        placed = true;
      }
    }
    if (!placed) throw InconsistencyError("could not extend Cartan matrix to independent roots");
  }
  size_t r = n + corank;
  KacMoodyRootDatum d{gcm, r, {}, {}};
  for (size_t j = 0; j < n; ++j) {
    IntVec root(r, 0), coroot(r, 0);
    for (size_t i = 0; i < n; ++i) root[i] = gcm(i, j);
    for (size_t k = 0; k < extra.size(); ++k)
      if (extra[k] == j) root[n + k] = 1;
    coroot[j] = 1;
    d.simple_roots.push_back(root);
    d.simple_coroots.push_back(coroot);
  }
  d.validate();
  return d;
}

void KacMoodyRootDatum::validate() const {
  size_t n = gcm.rank();
  if (simple_roots.size() != n || simple_coroots.size() != n)
    throw InputError("root datum: wrong number of roots or coroots");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (simple_coroots[i].size() != lattice_rank || simple_roots[j].size() != lattice_rank)
        throw InputError("root datum: vector of wrong length");
      long s = 0;
      for (size_t k = 0; k < lattice_rank; ++k) s += simple_coroots[i][k] * simple_roots[j][k];
      if (s != gcm(i, j)) throw InputError("root datum: alpha_i^vee(alpha_j) != a_ij");
    }
}

}  // namespace pcanon
