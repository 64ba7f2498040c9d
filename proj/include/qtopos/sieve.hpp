#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qtopos/category.hpp"

namespace qtopos {

/// A set of arrows out of `base` closed under postcomposition.
/// `arrows` is kept sorted and duplicate-free.
struct Sieve {
  std::size_t base = 0;
  std::vector<std::size_t> arrows;

  bool contains(std::size_t arrow) const;
  bool empty() const noexcept { return arrows.empty(); }
  std::size_t size() const noexcept { return arrows.size(); }

  friend bool operator==(const Sieve&, const Sieve&) = default;
  /// Enumeration order: by size, then lexicographically.
  friend bool operator<(const Sieve& a, const Sieve& b) {
    if (a.base != b.base) return a.base < b.base;
    if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
    return a.arrows < b.arrows;
  }
};

/// Builds a sieve value from an arbitrary arrow list (sorted, deduplicated)
/// without checking closure.
Sieve make_sieve(std::size_t base, std::vector<std::size_t> arrows);

/// True iff every arrow has domain `base` and the set is closed under postcomposition.
bool is_sieve(const FiniteCategory& cat, const Sieve& s);

Sieve top_sieve(const FiniteCategory& cat, std::size_t object);
Sieve bottom_sieve(std::size_t object);
/// {m' . m} over all m' out of cod(m).
Sieve principal_sieve(const FiniteCategory& cat, std::size_t arrow);
/// Smallest sieve on `base` containing the given arrows.
Sieve generated_sieve(const FiniteCategory& cat, std::size_t base, const std::vector<std::size_t>& arrows);

bool sieve_leq(const Sieve& a, const Sieve& b);

/// Pullback of S along m: {m' : m' . m in S}, a sieve on cod(m).
Sieve omega_transition(const FiniteCategory& cat, std::size_t m, const Sieve& s);

Sieve heyting_join(const Sieve& a, const Sieve& b);
Sieve heyting_meet(const Sieve& a, const Sieve& b);
/// {m : for every m' out of cod(m), m' . m in a implies m' . m in b}.
Sieve heyting_implies(const FiniteCategory& cat, const Sieve& a, const Sieve& b);

/// All sieves on `object` in enumeration order.
/// Throws CapExceeded("sieve_enum", cap) when there are more than `cap`.
std::vector<Sieve> enumerate_sieves(const FiniteCategory& cat, std::size_t object, std::size_t cap);

/// Same result computed by filtering every subset of the arrows out of
/// `object`; exponential, for cross-checking only.
std::vector<Sieve> enumerate_sieves_by_subsets(const FiniteCategory& cat, std::size_t object);

/// Omega at one stage. `sieves` is empty when the enumeration cap bound; in
/// that case `sample` holds bottom, top and the principal sieves.
struct StageHeyting {
  std::size_t base = 0;
  Sieve top;
  Sieve bottom;
  std::vector<Sieve> sieves;
  bool complete = true;

  /// The sieves to audit: the full enumeration, or a sample when capped.
  std::vector<Sieve> sample;
  std::optional<std::size_t> index_of(const Sieve& s) const;
};

StageHeyting omega_at(const FiniteCategory& cat, std::size_t object, std::size_t cap);

/// Outcome of an exhaustive (or sampled) law audit.
struct LawAudit {
  bool ok = true;
  bool sampled = false;
  std::size_t checked = 0;
  std::string first_violation;

  void fail(std::string what) {
    if (ok) first_violation = std::move(what);
    ok = false;
  }
};

/// Distributivity and the adjunction a ^ x <= b  iff  x <= (a => b), plus
/// maximality of the implication, over `sieves`. Triples are sampled when
/// |sieves|^3 exceeds `triple_budget`.
LawAudit audit_heyting_laws(const FiniteCategory& cat, const std::vector<Sieve>& sieves,
                            std::size_t triple_budget = 2'000'000);

std::string sieve_to_string(const Sieve& s);

}  // namespace qtopos
