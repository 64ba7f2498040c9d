#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qtopos/presheaf.hpp"
#include "qtopos/valuation.hpp"

namespace qtopos {

/// Relates sieves of the plain site of one observable rho (the rho -> rho
/// arrows of an extended site) to sieves of the extended site at (ray, rho).
class Bridge {
 public:
  Bridge(const ExtendedSite& site, std::size_t rho);

  const ExtendedSite& site() const { return *site_; }
  const PlainSite& plain() const { return plain_; }
  std::size_t rho() const noexcept { return rho_; }
  /// Extended object (ray, rho) for a plain object (ray).
  std::size_t extended_object(std::size_t ray) const { return plain_.object_origin.at(ray); }

  /// The extended arrow (e, rho, G, rho) for plain arrow G.
  std::size_t eta(std::size_t plain_arrow) const { return plain_.arrow_origin.at(plain_arrow); }
  /// eta applied arrow-wise; in general not a sieve.
  std::vector<std::size_t> lift(const Sieve& plain_sieve) const;

  /// Least extended sieve containing the lift: all H . eta(G) with G in S.
  Sieve sharp(const Sieve& plain_sieve) const;
  /// {G : eta(G) in S}.
  Sieve flat(const Sieve& extended_sieve) const;
  Sieve natural(const Sieve& extended_sieve) const { return sharp(flat(extended_sieve)); }
  bool is_natural(const Sieve& extended_sieve) const { return natural(extended_sieve) == extended_sieve; }

  /// S1 =>_nat S2 = sharp(flat S1 => flat S2).
  Sieve natural_implies(const Sieve& a, const Sieve& b) const;

 private:
  const ExtendedSite* site_;
  std::size_t rho_;
  PlainSite plain_;
};

/// Intersection of every extended sieve in `candidates` containing `lifted`.
/// Independent definition of sharp, used as an oracle.
Sieve sharp_by_intersection(const FiniteCategory& cat, std::size_t base, const std::vector<std::size_t>& lifted,
                            const std::vector<Sieve>& candidates);

/// The rho -> rho arrow with the same domain and operator as `arrow`.
std::size_t same_rho_arrow(const ExtendedSite& site, std::size_t arrow);

/// The natural map computed inside the extended site: the sieve generated by
/// the same-observable arrows of S. Agrees with Bridge::natural.
Sieve natural_by_restriction(const ExtendedSite& site, const Sieve& s);

/// Per object, the ids of Omega values fixed by the natural map.
/// `bridges[rho]` must be the bridge for observable rho.
Subobject natural_omega(const OmegaPresheaf& omega, const std::vector<Bridge>& bridges);

/// Audit of the natural-sieve structure at one stage.
struct StageBridgeAudit {
  std::size_t plain_sieves = 0;
  std::size_t extended_sieves = 0;
  std::size_t natural_sieves = 0;
  bool complete = true;

  bool flat_sharp_identity = true;
  bool natural_below_identity = true;
  bool natural_idempotent = true;
  bool fixpoints_are_image = true;
  bool lattice_homomorphisms = true;
  bool order_and_implication = true;
  bool sharp_matches_oracle = true;
  bool heyting_isomorphism = true;
  bool natural_closure = true;

  /// Pairs where the natural implication is strictly below the plain one, and
  /// pairs of natural sieves whose plain implication is not natural.
  std::size_t strict_implication_pairs = 0;
  std::size_t implication_closure_failures = 0;
  std::vector<std::string> violations;

  bool ok() const {
    return flat_sharp_identity && natural_below_identity && natural_idempotent && fixpoints_are_image &&
           lattice_homomorphisms && order_and_implication && sharp_matches_oracle && heyting_isomorphism &&
           natural_closure;
  }
};

StageBridgeAudit audit_stage(const Bridge& bridge, std::size_t ray, std::size_t cap);

/// Membership along a rho -> rho' arrow implies membership along the matching
/// rho -> rho arrow. `witness` names the first failing arrow.
struct ProjectivityVerdict {
  bool projective = true;
  bool characteristic_natural = true;
  std::optional<std::size_t> witness;
  bool agree() const { return projective == characteristic_natural; }
};

/// Works on any extended site, including restricted ones. The naturality side
/// uses natural_by_restriction rather than a Bridge.
ProjectivityVerdict projectivity_at(const Presheaf& m, const Subobject& n, const ExtendedSite& site, std::size_t object,
                                    std::size_t x);

/// The three squares relating the two valuation families for one proposition.
struct EquivalenceRow {
  std::size_t proposition = 0;
  Sieve plain_value;
  Sieve extended_value;
  Sieve natural_value;
  Sieve flat_value;
  bool outer = false;
  bool left = false;
  bool right = false;
  bool ok() const { return outer && left && right; }
};

std::vector<EquivalenceRow> equivalence_check(const Bridge& bridge, const PropositionUniverse& universe,
                                              std::size_t ray, const Subspace& eigenspace,
                                              const std::vector<std::size_t>& propositions);

}  // namespace qtopos
