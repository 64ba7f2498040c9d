#include "qtopos/modal.hpp"

#include <algorithm>

#include "qtopos/error.hpp"

namespace qtopos {

Observable::Observable(std::string name, std::vector<Subspace> eigenspaces, std::vector<GaussianRational> labels)
    : name_(std::move(name)), eigenspaces_(std::move(eigenspaces)), labels_(std::move(labels)) {
  const std::string field = "observable '" + name_ + "'";
  if (eigenspaces_.empty()) throw ValidationError(field, "no eigenspaces");
  const std::size_t n = eigenspaces_.front().ambient_dim();
  if (eigenspaces_.size() > n) throw ValidationError(field, "more eigenspaces than the dimension");
  for (std::size_t i = 0; i < eigenspaces_.size(); ++i) {
    if (eigenspaces_[i].ambient_dim() != n) throw DimensionMismatch(field + ": ambient dimension mismatch");
    if (eigenspaces_[i].is_zero())
      throw ValidationError(field, "eigenspace " + std::to_string(i) + " is the zero space");
  }
  for (std::size_t i = 0; i < eigenspaces_.size(); ++i)
    for (std::size_t j = i + 1; j < eigenspaces_.size(); ++j)
      if (!leq(eigenspaces_[i], ortho(eigenspaces_[j])))
        throw OrthogonalityViolation(field, "eigenspaces " + std::to_string(i) + " and " + std::to_string(j) +
                                                " are not orthogonal");
  Subspace total = Subspace::zero(n);
  for (const auto& r : eigenspaces_) total = join(total, r);
  if (!total.is_whole()) throw OrthogonalityViolation(field, "eigenspaces do not join to the whole space");
  if (!labels_.empty()) {
    if (labels_.size() != eigenspaces_.size())
      throw ValidationError(field, "label count differs from eigenspace count");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!labels_[i].is_real()) throw ValidationError(field, "label " + std::to_string(i) + " is not real");
      for (std::size_t j = 0; j < i; ++j)
        if (labels_[i] == labels_[j]) throw ValidationError(field, "labels are not distinct");
    }
  }
  for (const auto& r : eigenspaces_) projectors_.push_back(r.projector());
}

Observable Observable::trivial(std::string name, std::size_t n) {
  return Observable(std::move(name), {Subspace::whole(n)});
}

bool Observable::same_decomposition(const Observable& other) const {
  if (size() != other.size()) return false;
  for (const auto& r : eigenspaces_)
    if (std::find(other.eigenspaces_.begin(), other.eigenspaces_.end(), r) == other.eigenspaces_.end())
      return false;
  return true;
}

void Observable::validate_matrix(const ExactMatrix& matrix) const {
  const std::string field = "observable '" + name_ + "'";
  if (labels_.empty()) throw ValidationError(field, "matrix validation needs eigenvalue labels");
  const std::size_t n = ambient_dim();
  if (matrix.rows() != n || matrix.cols() != n) throw DimensionMismatch(field + ": matrix shape");
  for (std::size_t i = 0; i < eigenspaces_.size(); ++i)
    for (const auto& v : eigenspaces_[i].basis()) {
      Vector mv = mat_vec(matrix, v);
      for (std::size_t k = 0; k < n; ++k)
        if (mv[k] != labels_[i] * v[k])
          throw ValidationError(field, "matrix is not " + labels_[i].to_string() + " times identity on eigenspace " +
                                           std::to_string(i));
    }
}

std::vector<Subspace> TrueAtomSet::zero_included() const {
  std::vector<Subspace> out = atoms;
  out.push_back(Subspace::zero(state.ambient_dim()));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TrueAtomSet compute_atoms(const Ray& e, const Observable& r) {
  if (e.space().ambient_dim() != r.ambient_dim()) throw DimensionMismatch("compute_atoms: ambient mismatch");
  TrueAtomSet out{e.space(), {}, {}};
  for (std::size_t i = 0; i < r.size(); ++i) {
    Subspace er = project_onto_eigenspace(e.space(), r.eigenspaces()[i]);
    if (!er.is_zero()) {
      out.atoms.push_back(std::move(er));
      out.eigenspace_of.push_back(i);
    }
  }
  return out;
}

std::vector<Subspace> augmented_atoms(const Subspace& e, const Observable& r) {
  std::vector<Subspace> out;
  for (const auto& es : r.eigenspaces()) out.push_back(project_onto_eigenspace(e, es));
  out.push_back(Subspace::zero(e.ambient_dim()));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool in_determinate_sublattice(const Subspace& p, const TrueAtomSet& atoms) {
  if (p.ambient_dim() != atoms.state.ambient_dim()) throw DimensionMismatch("in_determinate_sublattice");
  Subspace pperp = ortho(p);
  for (const auto& a : atoms.atoms)
    if (!leq(a, p) && !leq(a, pperp)) return false;
  return true;
}

std::vector<Subspace> enumerate_determinate_sublattice(const TrueAtomSet& atoms, std::size_t cap,
                                                       const std::vector<Subspace>& extra_rays) {
  const std::size_t n = atoms.state.ambient_dim();
  std::vector<Subspace> seeds{Subspace::zero(n), Subspace::whole(n)};
  Subspace span_atoms = Subspace::zero(n);
  for (const auto& a : atoms.atoms) {
    seeds.push_back(a);
    span_atoms = join(span_atoms, a);
  }
  Subspace remainder = ortho(span_atoms);
  if (!remainder.is_zero()) seeds.push_back(remainder);
  for (const auto& ray : extra_rays) {
    if (ray.dim() != 1 || !leq(ray, remainder))
      throw ValidationError("determinate sublattice", "extra ray " + ray.to_string() +
                                                          " is not a ray inside the orthogonal remainder");
    seeds.push_back(ray);
  }
  return generate_sublattice(seeds, cap);
}

int bub_valuation(const Subspace& true_atom, const Subspace& p) { return leq(true_atom, p) ? 1 : 0; }

bool in_commutant(const ExactMatrix& f, const Observable& r) {
  if (f.rows() != r.ambient_dim() || f.cols() != r.ambient_dim())
    throw DimensionMismatch("in_commutant: operator shape");
  for (const auto& p : r.projectors())
    if (mat_mul(f, p) != mat_mul(p, f)) return false;
  return true;
}

bool observable_leq(const Observable& rho, const Observable& rho_prime) {
  if (rho.ambient_dim() != rho_prime.ambient_dim()) throw DimensionMismatch("observable_leq");
  for (const auto& r : rho.eigenspaces()) {
    Subspace covered = Subspace::zero(r.ambient_dim());
    for (const auto& rp : rho_prime.eigenspaces())
      if (leq(rp, r)) covered = join(covered, rp);
    if (covered != r) return false;
  }
  return true;
}

}  // namespace qtopos
