#include "qtopos/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qtopos/error.hpp"

namespace qtopos {

bool Sieve::contains(std::size_t arrow) const { return std::binary_search(arrows.begin(), arrows.end(), arrow); }

Sieve make_sieve(std::size_t base, std::vector<std::size_t> arrows) {
  std::sort(arrows.begin(), arrows.end());
  arrows.erase(std::unique(arrows.begin(), arrows.end()), arrows.end());
  return Sieve{base, std::move(arrows)};
}

bool is_sieve(const FiniteCategory& cat, const Sieve& s) {
  for (std::size_t m : s.arrows) {
    if (m >= cat.num_arrows() || cat.arrow(m).dom != s.base) return false;
    for (const auto& [after, composite] : cat.postcompositions(m))
      if (!s.contains(composite)) return false;
  }
  return true;
}

Sieve top_sieve(const FiniteCategory& cat, std::size_t object) { return Sieve{object, cat.out(object)}; }

Sieve bottom_sieve(std::size_t object) { return Sieve{object, {}}; }

Sieve principal_sieve(const FiniteCategory& cat, std::size_t arrow) {
  std::vector<std::size_t> arrows;
  for (const auto& [after, composite] : cat.postcompositions(arrow)) arrows.push_back(composite);
  return make_sieve(cat.arrow(arrow).dom, std::move(arrows));
}

Sieve generated_sieve(const FiniteCategory& cat, std::size_t base, const std::vector<std::size_t>& arrows) {
  std::vector<std::size_t> out;
  for (std::size_t m : arrows) {
    if (cat.arrow(m).dom != base) throw InconsistentSite("generated_sieve: arrow not out of base object");
    for (const auto& [after, composite] : cat.postcompositions(m)) out.push_back(composite);
  }
  return make_sieve(base, std::move(out));
}

bool sieve_leq(const Sieve& a, const Sieve& b) {
  return a.base == b.base && std::includes(b.arrows.begin(), b.arrows.end(), a.arrows.begin(), a.arrows.end());
}

Sieve omega_transition(const FiniteCategory& cat, std::size_t m, const Sieve& s) {
  if (cat.arrow(m).dom != s.base) throw InconsistentSite("omega_transition: sieve is not on the domain of the arrow");
  std::vector<std::size_t> out;
  for (const auto& [after, composite] : cat.postcompositions(m))
    if (s.contains(composite)) out.push_back(after);
  return make_sieve(cat.arrow(m).cod, std::move(out));
}

Sieve heyting_join(const Sieve& a, const Sieve& b) {
  if (a.base != b.base) throw InconsistentSite("heyting_join: different base objects");
  Sieve out{a.base, {}};
  std::set_union(a.arrows.begin(), a.arrows.end(), b.arrows.begin(), b.arrows.end(), std::back_inserter(out.arrows));
  return out;
}

Sieve heyting_meet(const Sieve& a, const Sieve& b) {
  if (a.base != b.base) throw InconsistentSite("heyting_meet: different base objects");
  Sieve out{a.base, {}};
  std::set_intersection(a.arrows.begin(), a.arrows.end(), b.arrows.begin(), b.arrows.end(),
                        std::back_inserter(out.arrows));
  return out;
}

Sieve heyting_implies(const FiniteCategory& cat, const Sieve& a, const Sieve& b) {
  if (a.base != b.base) throw InconsistentSite("heyting_implies: different base objects");
  Sieve out{a.base, {}};
  for (std::size_t m : cat.out(a.base)) {
    bool ok = true;
    for (const auto& [after, composite] : cat.postcompositions(m))
      if (a.contains(composite) && !b.contains(composite)) {
        ok = false;
        break;
      }
    if (ok) out.arrows.push_back(m);
  }
  return out;
}

std::vector<Sieve> enumerate_sieves(const FiniteCategory& cat, std::size_t object, std::size_t cap) {
  // Every sieve is the union of the principal sieves of its members.
  std::set<Sieve> principals;
  for (std::size_t m : cat.out(object)) principals.insert(principal_sieve(cat, m));
  std::set<Sieve> found{bottom_sieve(object)};
  for (const Sieve& p : principals) {
    std::vector<Sieve> fresh;
    for (const Sieve& s : found) {
      Sieve u = heyting_join(s, p);
      if (!found.count(u)) fresh.push_back(std::move(u));
    }
    for (auto& s : fresh) {
      found.insert(std::move(s));
      if (found.size() > cap) throw CapExceeded("sieve_enum", cap);
    }
  }
  return {found.begin(), found.end()};
}

std::vector<Sieve> enumerate_sieves_by_subsets(const FiniteCategory& cat, std::size_t object) {
  const auto& out = cat.out(object);
  if (out.size() > 20) throw CapExceeded("sieve_subsets", 20);
  std::vector<Sieve> result;
  for (std::size_t mask = 0; mask < (std::size_t{1} << out.size()); ++mask) {
    Sieve s{object, {}};
    for (std::size_t i = 0; i < out.size(); ++i)
      if (mask & (std::size_t{1} << i)) s.arrows.push_back(out[i]);
    if (is_sieve(cat, s)) result.push_back(std::move(s));
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::optional<std::size_t> StageHeyting::index_of(const Sieve& s) const {
  auto it = std::lower_bound(sieves.begin(), sieves.end(), s);
  if (it == sieves.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - sieves.begin());
}

StageHeyting omega_at(const FiniteCategory& cat, std::size_t object, std::size_t cap) {
  StageHeyting st;
  st.base = object;
  st.top = top_sieve(cat, object);
  st.bottom = bottom_sieve(object);
  try {
    st.sieves = enumerate_sieves(cat, object, cap);
    st.sample = st.sieves;
  } catch (const CapExceeded&) {
    st.complete = false;
    std::set<Sieve> sample{st.bottom, st.top};
    for (std::size_t m : cat.out(object)) sample.insert(principal_sieve(cat, m));
    st.sample.assign(sample.begin(), sample.end());
  }
  return st;
}

LawAudit audit_heyting_laws(const FiniteCategory& cat, const std::vector<Sieve>& sieves, std::size_t triple_budget) {
  LawAudit audit;
  const std::size_t k = sieves.size();
  std::size_t step = 1;
  if (k * k * k > triple_budget) {
    audit.sampled = true;
    step = static_cast<std::size_t>(std::ceil(static_cast<double>(k) / std::cbrt(static_cast<double>(triple_budget))));
  }
  for (const Sieve& s : sieves)
    if (!is_sieve(cat, s)) audit.fail("not a sieve: " + sieve_to_string(s));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const Sieve& a = sieves[i];
      const Sieve& b = sieves[j];
      Sieve imp = heyting_implies(cat, a, b);
      ++audit.checked;
      if (!is_sieve(cat, imp)) audit.fail("implication is not a sieve");
      if (!is_sieve(cat, heyting_join(a, b)) || !is_sieve(cat, heyting_meet(a, b)))
        audit.fail("join or meet is not a sieve");
      for (std::size_t l = (i + j) % step; l < k; l += step) {
        const Sieve& x = sieves[l];
        if (sieve_leq(heyting_meet(a, x), b) != sieve_leq(x, imp))
          audit.fail("adjunction fails for " + sieve_to_string(a) + ", " + sieve_to_string(b) + ", " +
                     sieve_to_string(x));
        if (heyting_meet(a, heyting_join(b, x)) != heyting_join(heyting_meet(a, b), heyting_meet(a, x)))
          audit.fail("distributivity fails");
      }
    }
  return audit;
}

std::string sieve_to_string(const Sieve& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.arrows.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.arrows[i]);
  }
  return out + "}";
}

}  // namespace qtopos
