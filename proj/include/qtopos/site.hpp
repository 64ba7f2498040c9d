#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qtopos/category.hpp"
#include "qtopos/modal.hpp"

namespace qtopos {

/// A finite multiplicatively closed set of operators with its product table.
/// Element 0 is always the identity.
class OperatorMonoid {
 public:
  OperatorMonoid() = default;

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<ExactMatrix>& elements() const noexcept { return elements_; }
  const ExactMatrix& element(std::size_t i) const { return elements_.at(i); }
  const std::vector<std::vector<std::size_t>>& product_table() const noexcept { return product_; }
  /// product(a, b) is the index of element(a) * element(b).
  std::size_t product(std::size_t a, std::size_t b) const { return product_.at(a).at(b); }
  const std::vector<std::size_t>& generator_indices() const noexcept { return generators_; }

  std::optional<std::size_t> index_of(const ExactMatrix& m) const;

  /// Elements satisfying `keep` (must contain the identity and be closed).
  OperatorMonoid submonoid(const std::function<bool(const ExactMatrix&)>& keep) const;

  friend OperatorMonoid close_monoid(const std::vector<ExactMatrix>& generators, std::size_t dimension,
                                     std::size_t cap);

 private:
  void build_table();
  std::size_t dim_ = 0;
  std::vector<ExactMatrix> elements_;
  std::vector<std::vector<std::size_t>> product_;
  std::vector<std::size_t> generators_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Smallest monoid containing the generators and the identity.
/// Throws CapExceeded("monoid", cap) if it does not close within `cap` elements.
OperatorMonoid close_monoid(const std::vector<ExactMatrix>& generators, std::size_t dimension, std::size_t cap);

/// Finite truncation of the site of a single observable: rays as objects and
/// commutant operators F : e -> F e (F e nonzero) as arrows.
struct PlainSite {
  Observable observable;
  OperatorMonoid monoid;
  std::vector<Subspace> objects;
  FiniteCategory category;
  /// For sites derived by restriction: object/arrow ids in the parent site.
  std::vector<std::size_t> object_origin;
  std::vector<std::size_t> arrow_origin;

  std::optional<std::size_t> object_index(const Subspace& ray) const;
  /// Operator indices of hom(e, e').
  std::vector<std::size_t> hom(std::size_t e, std::size_t e_prime) const;
};

/// Objects are the orbit of `seeds` under the nonzero monoid action.
/// Throws CommutantViolation if a monoid element leaves an eigenspace of R,
/// CapExceeded("orbit", cap) if the orbit grows past `cap` rays.
PlainSite build_plain_site(const Observable& r, const OperatorMonoid& monoid, const std::vector<Subspace>& seeds,
                           std::size_t cap);

/// Wide subcategory on the objects reachable from `e`.
PlainSite restrict_down(const PlainSite& site, std::size_t e);

struct ObjectX {
  std::size_t ray = 0;
  std::size_t rho = 0;
  friend bool operator==(const ObjectX&, const ObjectX&) = default;
};

/// Arrow (e, rho) -> (F e, rho') of the extended site.
struct MorphismX {
  std::size_t dom_ray = 0;
  std::size_t dom_rho = 0;
  std::size_t op = 0;
  std::size_t cod_rho = 0;
  std::size_t cod_ray = 0;
  friend bool operator==(const MorphismX&, const MorphismX&) = default;
};

/// Finite truncation of the extended site over several observables.
struct ExtendedSite {
  std::vector<Observable> observables;
  OperatorMonoid monoid;
  std::vector<Subspace> rays;
  std::vector<ObjectX> objects;
  /// Parallel to category.arrows().
  std::vector<MorphismX> morphisms;
  FiniteCategory category;
  /// rho_leq[a][b] == observable_leq(observables[a], observables[b]).
  std::vector<std::vector<bool>> rho_leq;
  std::vector<std::size_t> object_origin;
  std::vector<std::size_t> arrow_origin;

  std::optional<std::size_t> object_index(std::size_t ray, std::size_t rho) const;
  std::optional<std::size_t> ray_index(const Subspace& ray) const;
  /// Zero-augmented atom set of a ray for an observable.
  std::vector<Subspace> atoms(std::size_t ray, std::size_t rho) const;
  /// Product-category membership (before the atom condition).
  bool is_product_morphism(std::size_t ray, std::size_t rho, std::size_t op, std::size_t rho_prime) const;
};

/// Throws CapExceeded on orbit growth, InconsistentSite if composition fails.
ExtendedSite build_extended_site(const std::vector<Observable>& observables, const OperatorMonoid& monoid,
                                 const std::vector<Subspace>& seeds, std::size_t cap);

/// The arrows (e, rho, F, rho) at a fixed rho, as a plain site for that observable.
/// Object i of the result is ray i of the extended site.
PlainSite restrict_to_rho(const ExtendedSite& site, std::size_t rho);

/// Full subcategory on objects reachable from `object`.
ExtendedSite restrict_down_extended(const ExtendedSite& site, std::size_t object);

/// Orbit of seeds under the nonzero action of the given operators (seeds first).
std::vector<Subspace> ray_orbit(const std::vector<ExactMatrix>& ops, const std::vector<Subspace>& seeds,
                                std::size_t cap);

}  // namespace qtopos
