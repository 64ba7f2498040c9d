#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "qtopos/matrix.hpp"

namespace qtopos {

/// A linear subspace of C^n stored by its canonical basis.
///
/// The basis rows are the nonzero rows of the reduced row echelon form of any
/// spanning set, so two subspaces are equal iff their bases are entrywise equal.
/// The zero space has an empty basis; the whole space has the identity basis.
class Subspace {
 public:
  Subspace() = default;

  /// Span of the given vectors (which need not be independent).
  static Subspace span(std::size_t ambient_dim, const std::vector<Vector>& vectors);
  static Subspace zero(std::size_t ambient_dim);
  static Subspace whole(std::size_t ambient_dim);

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  bool is_zero() const noexcept { return basis_.empty(); }
  bool is_whole() const noexcept { return basis_.size() == ambient_; }

  /// Canonical basis vectors (first nonzero coordinate of each is 1).
  const std::vector<Vector>& basis() const noexcept { return basis_; }
  /// Basis as an n x dim matrix of columns.
  ExactMatrix basis_columns() const;

  /// Matrix of the orthogonal projector onto this subspace.
  ExactMatrix projector() const;

  std::string to_string() const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }
  /// Deterministic total order on canonical forms (used for sorting/maps only).
  friend bool operator<(const Subspace& a, const Subspace& b) { return a.key() < b.key(); }

  const std::string& key() const noexcept { return key_; }

 private:
  Subspace(std::size_t ambient, std::vector<Vector> basis);
  std::size_t ambient_ = 0;
  std::vector<Vector> basis_;
  std::string key_;
};

/// A one-dimensional subspace.
class Ray {
 public:
  /// Throws ValidationError unless `space.dim() == 1`.
  explicit Ray(Subspace space);
  static Ray of(const Vector& v);

  const Subspace& space() const noexcept { return space_; }
  operator const Subspace&() const noexcept { return space_; }  // NOLINT
  const Vector& vector() const { return space_.basis().front(); }

  friend bool operator==(const Ray& a, const Ray& b) { return a.space_ == b.space_; }

 private:
  Subspace space_;
};

Subspace join(const Subspace& p, const Subspace& q);
Subspace meet(const Subspace& p, const Subspace& q);
Subspace ortho(const Subspace& p);
/// p is contained in q.
bool leq(const Subspace& p, const Subspace& q);
/// Image F(P); the zero space when F annihilates P.
Subspace apply_operator(const ExactMatrix& f, const Subspace& p);
/// e_r = (e v r^perp) ^ r, computed with lattice operations only.
Subspace project_onto_eigenspace(const Subspace& e, const Subspace& r);

/// Closure of `seeds` under meet, join and orthocomplement.
/// Throws CapExceeded("lattice", cap) if more than `cap` elements appear.
/// Elements keep first-discovery order, seeds first.
std::vector<Subspace> generate_sublattice(const std::vector<Subspace>& seeds, std::size_t cap);

}  // namespace qtopos
