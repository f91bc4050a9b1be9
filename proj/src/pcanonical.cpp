#include "pcanon/pcanonical.hpp"

#include <algorithm>
#include <exception>
#include <mutex>

#include "pcanon/errors.hpp"

namespace pcanon {

void check_characteristic(unsigned long p) {
  if (p == 0) return;
  if (p < 2) throw InputError("characteristic must be 0 or a prime");
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) throw InputError("characteristic must be 0 or a prime, got " + std::to_string(p));
}

PCanonicalBasis::PCanonicalBasis(const CartanMatrix& gcm, Exec exec)
    : W_(coxeter_from_gcm(gcm)), H_(W_), calc_(faithful_realization(gcm)), exec_(exec) {}

const IntersectionForms& PCanonicalBasis::forms(const Element& w) const {
  {
    std::shared_lock lock(forms_mutex_);
    auto it = forms_.find(w);
    if (it != forms_.end()) return *it->second;
  }
  auto f = std::make_shared<const IntersectionForms>(calc_, W_, w.word());
  std::unique_lock lock(forms_mutex_);
  return *forms_.emplace(w, std::move(f)).first->second;
}

std::map<Element, LaurentPoly> PCanonicalBasis::summand_multiplicities(const Element& w, unsigned long p) const {
  check_characteristic(p);
  const IntersectionForms& f = forms(w);
  std::map<Element, LaurentPoly> out;
  for (const Element& x : f.endpoints()) {
    LaurentPoly m = f.graded_rank(x, p);
    if (!m.is_zero()) out[x] = std::move(m);
  }
  return out;
}

PCanonicalEntry PCanonicalBasis::compute_entry(const Element& w, unsigned long p) const {
  auto mult = summand_multiplicities(w, p);
  if (mult[w] != LaurentPoly(1)) throw InconsistencyError("top summand of B_w does not have multiplicity 1");
  std::map<Element, LaurentPoly> kl = H_.kl_expansion(H_.bs_element(w.word()));
  for (const auto& [x, m] : mult) {
    if (x == w) continue;
    std::shared_lock lock(entries_mutex_);
    const PCanonicalEntry& lower = entries_.at({p, x});
    for (const auto& [z, c] : lower.expansion_in_kl) kl[z] -= m * c;
  }
  PCanonicalEntry e;
  e.w = w;
  e.p = p;
  for (auto& [z, c] : kl) {
    if (c.is_zero()) continue;
    if (c != c.bar()) throw InconsistencyError("p-canonical coefficient is not bar invariant");
    for (const auto& [deg, coeff] : c.terms())
      if (coeff < 0) throw InconsistencyError("negative p-canonical coefficient at " + W_.system().format_word(z.word()));
    e.expansion_in_std += H_.kl_basis(z).scaled(c);
    e.expansion_in_kl.emplace(z, std::move(c));
  }
  if (e.expansion_in_kl[w] != LaurentPoly(1)) throw InconsistencyError("p-canonical element is not unitriangular");
  return e;
}

void PCanonicalBasis::fill(std::vector<Element> elems, unsigned long p) const {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  std::map<size_t, std::vector<Element>> strata;
  for (auto& e : elems) strata[e.length()].push_back(std::move(e));
  for (auto& [len, layer] : strata) {
    std::vector<Element> todo;
    {
      std::shared_lock lock(entries_mutex_);
      for (const auto& w : layer)
        if (!entries_.count({p, w})) todo.push_back(w);
    }
    std::vector<PCanonicalEntry> done(todo.size());
    std::vector<std::exception_ptr> errors(todo.size());
    long n = static_cast<long>(todo.size());
#pragma omp parallel for schedule(dynamic) if (exec_ == Exec::Parallel)
    for (long i = 0; i < n; ++i) {
      try {
        done[i] = compute_entry(todo[i], p);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
    // Stratum barrier: the next length only reads entries published here.
    std::unique_lock lock(entries_mutex_);
    for (auto& e : done) entries_.emplace(std::make_pair(p, e.w), std::move(e));
  }
}

PCanonicalEntry PCanonicalBasis::entry(const Element& w, unsigned long p) const {
  check_characteristic(p);
  {
    std::shared_lock lock(entries_mutex_);
    auto it = entries_.find({p, w});
    if (it != entries_.end()) return it->second;
  }
  fill(W_.bruhat_interval_below(w), p);
  std::shared_lock lock(entries_mutex_);
  return entries_.at({p, w});
}

std::vector<PCanonicalEntry> PCanonicalBasis::entries_up_to(unsigned long p, size_t max_length) const {
  check_characteristic(p);
  auto elems = W_.enumerate(max_length);
  fill(elems, p);
  std::sort(elems.begin(), elems.end());
  std::vector<PCanonicalEntry> out;
  std::shared_lock lock(entries_mutex_);
  for (const auto& w : elems) out.push_back(entries_.at({p, w}));
  return out;
}

AntisphericalElement PCanonicalBasis::antispherical_image(const Element& w, unsigned long p,
                                                          const std::vector<Gen>& J) const {
  W_.require_finite_parabolic(J);
  return H_.antispherical_project(entry(w, p).expansion_in_std, J);
}

LaurentPoly PCanonicalBasis::antispherical_pkl(const Element& y, const Element& w, unsigned long p,
                                               const std::vector<Gen>& J) const {
  W_.require_finite_parabolic(J);
  if (!W_.is_min_coset_rep(y, J) || !W_.is_min_coset_rep(w, J))
    throw InputError("antispherical polynomials need minimal coset representatives");
  return antispherical_image(w, p, J).value.coeff(y);
}

std::vector<AntisphericalKL> PCanonicalBasis::pkl_table(unsigned long p, size_t max_length,
                                                        const std::vector<Gen>& J) const {
  W_.require_finite_parabolic(J);
  entries_up_to(p, max_length);
  std::vector<AntisphericalKL> out;
  auto elems = W_.enumerate(max_length);
  std::sort(elems.begin(), elems.end());
  for (const auto& w : elems) {
    if (!W_.is_min_coset_rep(w, J)) continue;
    AntisphericalElement image = antispherical_image(w, p, J);
    for (const auto& [y, c] : image.value.terms()) out.push_back({y, w, p, c});
  }
  return out;
}

}  // namespace pcanon
