#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qtopos/sieve.hpp"
#include "qtopos/site.hpp"

namespace qtopos {

/// Finite stand-in for the proposition lattice: a set of subspaces closed
/// under the monoid action and under pairwise meet, with cached tables.
class PropositionUniverse {
 public:
  /// Closes `seeds` together with {0} and I. Throws CapExceeded("lattice", cap).
  PropositionUniverse(const OperatorMonoid& monoid, const std::vector<Subspace>& seeds, std::size_t cap);
  PropositionUniverse() = default;

  /// The same elements with the action table re-indexed for `sub`, whose
  /// elements must map the universe into itself.
  PropositionUniverse for_monoid(const OperatorMonoid& sub) const;

  std::size_t size() const noexcept { return elements_.size(); }
  const Subspace& element(std::size_t id) const { return elements_.at(id); }
  const std::vector<Subspace>& elements() const noexcept { return elements_; }
  std::optional<std::size_t> find(const Subspace& s) const;
  /// Throws UnknownObject if `s` is not in the universe.
  std::size_t id(const Subspace& s) const;

  std::size_t zero_id() const noexcept { return zero_; }
  std::size_t whole_id() const noexcept { return whole_; }
  /// Id of F(P) for monoid element `op`.
  std::size_t apply(std::size_t op, std::size_t p) const { return action_[op][p]; }
  bool leq(std::size_t p, std::size_t q) const { return leq_[p][q] != 0; }
  std::size_t meet(std::size_t p, std::size_t q) const { return meet_[p][q]; }

 private:
  std::vector<Subspace> elements_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> action_;
  std::vector<std::vector<char>> leq_;
  std::vector<std::vector<std::size_t>> meet_;
  std::size_t zero_ = 0;
  std::size_t whole_ = 0;
};

/// A presheaf on a finite category with finitely many values per object.
/// Values are opaque ids; their meaning belongs to whoever built the presheaf.
class Presheaf {
 public:
  Presheaf() = default;
  /// values[o] sorted and distinct; action[m][i] is the image of values[dom m][i].
  Presheaf(const FiniteCategory& cat, std::vector<std::vector<std::size_t>> values,
           std::vector<std::vector<std::size_t>> action);

  const FiniteCategory& category() const { return *cat_; }
  const std::vector<std::size_t>& values(std::size_t object) const { return values_.at(object); }
  bool contains(std::size_t object, std::size_t value) const;
  /// Throws NotSubPresheaf if `value` is not a value at dom(m).
  std::size_t apply(std::size_t m, std::size_t value) const;

  /// Identity and composition laws over every value; first failure or nullopt.
  std::optional<std::string> functoriality_violation() const;

 private:
  std::size_t position(std::size_t object, std::size_t value) const;
  const FiniteCategory* cat_ = nullptr;
  std::vector<std::vector<std::size_t>> values_;
  std::vector<std::vector<std::size_t>> action_;
};

/// Per-object subsets of a presheaf's values (sorted).
using Subobject = std::vector<std::vector<std::size_t>>;

/// The presheaf of propositions: every universe element at every object,
/// arrows acting by their operators.
Presheaf proposition_presheaf(const FiniteCategory& cat, const PropositionUniverse& universe);

bool subobject_contains(const Subobject& n, std::size_t object, std::size_t value);

/// Throws NotSubPresheaf unless n(o) is inside m(o) and stable under every arrow.
void validate_subobject(const Presheaf& m, const Subobject& n);

/// {arrows f out of `object` : M(f)(x) in N(cod f)}.
Sieve characteristic(const Presheaf& m, const Subobject& n, std::size_t object, std::size_t x);

/// One chosen value per object.
struct GlobalElement {
  std::vector<std::size_t> value;
};

/// First arrow whose naturality square fails, or nullopt.
std::optional<std::string> naturality_violation(const Presheaf& m, const GlobalElement& g);

/// Up-set and meet-closure violations of each N(o) inside the universe.
std::vector<std::string> filter_check(const PropositionUniverse& universe, const Subobject& n);

/// Omega with every stage enumerated. Value ids are positions in stages[o].sieves.
struct OmegaPresheaf {
  std::vector<StageHeyting> stages;
  Presheaf presheaf;

  const Sieve& sieve(std::size_t object, std::size_t id) const { return stages.at(object).sieves.at(id); }
  std::size_t id_of(const Sieve& s) const;
  std::size_t top_id(std::size_t object) const;
};

/// Throws CapExceeded("sieve_enum", cap) if any stage cannot be enumerated.
OmegaPresheaf build_omega(const FiniteCategory& cat, std::size_t cap);

/// Result of the subobject (semi-)classifier audit for one sub-presheaf.
struct ClassifierAudit {
  bool factors = true;
  bool natural = true;
  bool pullback = true;
  bool unique = true;
  /// "enumerated" when every candidate map was tried, else "forced-pointwise".
  std::string uniqueness_mode;
  std::size_t candidates = 0;
  std::vector<std::string> violations;

  bool ok() const { return factors && natural && pullback && unique; }
};

/// Audits `classes` (a sub-presheaf of Omega containing every top sieve) as a
/// classifier for N inside M: the characteristic map lands in `classes`, is
/// natural, has N as the pullback of top, and is the only such map.
ClassifierAudit classifier_audit(const Presheaf& m, const Subobject& n, const OmegaPresheaf& omega,
                                 const Subobject& classes, std::size_t enumeration_budget = 10'000);

}  // namespace qtopos
