#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qtopos/presheaf.hpp"

namespace qtopos {

/// Rays underlying the objects of a site, indexed by object id.
std::vector<Subspace> object_rays(const PlainSite& site);
std::vector<Subspace> object_rays(const ExtendedSite& site);

/// The section o -> (ray of o) projected onto `eigenspace`, as universe ids.
/// Natural whenever every arrow operator commutes with the projector.
GlobalElement atom_section(const PropositionUniverse& universe, const std::vector<Subspace>& rays,
                           const Subspace& eigenspace);

/// T(o) = {P : P >= section(o)}.
Subobject true_subobject(const PropositionUniverse& universe, const GlobalElement& section);

/// {f out of `object` : f(P) >= f(atom)}, with `atom` the true atom at `object`.
Sieve valuation(const FiniteCategory& cat, const PropositionUniverse& universe, std::size_t object, std::size_t atom,
                std::size_t p);

/// {f out of `object` : f(atom) = 0}; the least value any valuation takes.
Sieve bottom_annihilator(const FiniteCategory& cat, const PropositionUniverse& universe, std::size_t object,
                         std::size_t atom);

/// Sieves of a stage containing `bottom`, in stage order.
std::vector<Sieve> delta_omega_at(const StageHeyting& stage, const Sieve& bottom);

/// The sub-presheaf of Omega whose stage at o is every sieve containing the
/// annihilator of section(o).
Subobject delta_omega(const OmegaPresheaf& omega, const PropositionUniverse& universe, const GlobalElement& section);

/// Monotonicity, exclusivity, unit and null conditions at one stage.
struct ConditionReport {
  bool monotone = true;
  bool exclusive = true;
  bool unit = true;
  Sieve null_value;
  Sieve annihilator;
  /// The null value is the annihilator and strictly above the empty sieve.
  bool null_fails_in_omega = false;
  /// The null value is the bottom of the restricted stage.
  bool null_is_delta_bottom = false;
  std::size_t pairs = 0;
  std::vector<std::string> violations;

  bool ok() const { return monotone && exclusive && unit && null_value == annihilator; }
};

ConditionReport condition_check(const FiniteCategory& cat, const PropositionUniverse& universe, std::size_t object,
                                std::size_t atom, const std::vector<std::size_t>& propositions);

}  // namespace qtopos
