#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtopos/subspace.hpp"

namespace qtopos {

/// An observable given by its orthogonal eigenspace decomposition.
///
/// The decomposition is a complete invariant of the observable's equivalence
/// class (same eigenspaces, same commutant), so the same type stands for both.
class Observable {
 public:
  /// Validates nonzero, pairwise orthogonal eigenspaces joining to the whole
  /// space; throws OrthogonalityViolation / ValidationError otherwise.
  Observable(std::string name, std::vector<Subspace> eigenspaces,
             std::vector<GaussianRational> labels = {});

  /// One eigenspace equal to the whole space.
  static Observable trivial(std::string name, std::size_t n);

  const std::string& name() const noexcept { return name_; }
  std::size_t ambient_dim() const noexcept { return eigenspaces_.front().ambient_dim(); }
  const std::vector<Subspace>& eigenspaces() const noexcept { return eigenspaces_; }
  const std::vector<GaussianRational>& labels() const noexcept { return labels_; }
  const std::vector<ExactMatrix>& projectors() const noexcept { return projectors_; }
  std::size_t size() const noexcept { return eigenspaces_.size(); }

  /// True when both observables have the same decomposition (as a set).
  bool same_decomposition(const Observable& other) const;

  /// Checks `matrix` acts as label_i times identity on eigenspace i.
  /// Requires labels; throws ValidationError naming the failing eigenspace.
  void validate_matrix(const ExactMatrix& matrix) const;

 private:
  std::string name_;
  std::vector<Subspace> eigenspaces_;
  std::vector<GaussianRational> labels_;
  std::vector<ExactMatrix> projectors_;
};

/// The nonzero projections of a state onto the eigenspaces of an observable.
struct TrueAtomSet {
  Subspace state;
  std::vector<Subspace> atoms;
  /// Eigenspace index each atom came from, parallel to `atoms`.
  std::vector<std::size_t> eigenspace_of;

  /// atoms plus the zero space, sorted canonically (a set, for equality tests).
  std::vector<Subspace> zero_included() const;
};

TrueAtomSet compute_atoms(const Ray& e, const Observable& r);

/// Zero-augmented atom set {e_r : r in ES} u {{0}} as a canonical sorted set.
std::vector<Subspace> augmented_atoms(const Subspace& e, const Observable& r);

/// P is in the determinate sublattice: every atom lies below P or below P^perp.
bool in_determinate_sublattice(const Subspace& p, const TrueAtomSet& atoms);

/// Sublattice generated by the atoms and the orthogonal remainder as one block,
/// plus any extra rays the caller declares inside the remainder.
std::vector<Subspace> enumerate_determinate_sublattice(const TrueAtomSet& atoms, std::size_t cap,
                                                       const std::vector<Subspace>& extra_rays = {});

/// Two-valued valuation: 1 iff e_r <= P.
int bub_valuation(const Subspace& true_atom, const Subspace& p);

/// F commutes with every eigenprojector of R.
bool in_commutant(const ExactMatrix& f, const Observable& r);

/// rho <= rho': every eigenspace of rho is a join of eigenspaces of rho'.
bool observable_leq(const Observable& rho, const Observable& rho_prime);

}  // namespace qtopos
