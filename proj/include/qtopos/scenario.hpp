#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qtopos/modal.hpp"

namespace qtopos {

struct Caps {
  std::size_t monoid = 256;
  std::size_t orbit = 128;
  std::size_t sieve_enum = 4096;
  std::size_t lattice = 512;
};

/// Applies "monoid=..,orbit=..,sieve_enum=..,lattice=.." overrides.
/// Throws ParseError on unknown keys or malformed numbers.
void apply_cap_overrides(Caps& caps, const std::string& spec);

struct NamedMatrix {
  std::string name;
  ExactMatrix matrix;
  /// Observable whose commutant the generator was declared in, if any.
  std::optional<std::size_t> observable;
};

struct NamedSubspace {
  std::string name;
  Subspace space;
};

/// A declared sub-presheaf of propositions on the extended site.
/// rules[k] applies at objects whose observable is extended[k]:
/// "all", "none", "zero" (only the zero subspace), or "contains_ray"
  /// (propositions containing `ray`).
struct SubobjectSpec {
  std::string name;
  std::vector<std::string> rules;
  std::optional<Subspace> ray;
  std::optional<bool> expect_projective;
};

struct RunSpec {
  std::string name;
  std::size_t state = 0;
  std::size_t observable = 0;
  std::size_t eigenspace = 0;
  /// Rays inside the orthogonal remainder of the atoms, joined to the
  /// determinate sublattice enumeration.
  std::vector<Subspace> remainder_rays;
  /// Indices into Scenario::propositions; empty means all.
  std::vector<std::size_t> propositions;
};

struct Scenario {
  std::string name;
  std::size_t dimension = 0;
  std::vector<Observable> observables;
  std::vector<NamedMatrix> generators;
  std::vector<NamedSubspace> states;
  std::vector<NamedSubspace> propositions;
  /// Observable indices forming the extended site (empty: no extended site).
  std::vector<std::size_t> extended;
  std::vector<SubobjectSpec> subobjects;
  Caps caps;
  std::vector<RunSpec> runs;

  std::optional<std::size_t> observable_index(const std::string& name) const;
};

/// Parses and validates a scenario document. Errors carry the JSON path of
/// the offending field: ParseError, ValidationError, CommutantViolation,
/// OrthogonalityViolation, DimensionMismatch.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace qtopos
