#include "qtopos/subspace.hpp"

#include <unordered_set>

#include "qtopos/error.hpp"

namespace qtopos {

namespace {

void require_same_ambient(const Subspace& p, const Subspace& q, const char* op) {
  if (p.ambient_dim() != q.ambient_dim())
    throw DimensionMismatch(std::string(op) + ": ambient dimensions " + std::to_string(p.ambient_dim()) +
                            " and " + std::to_string(q.ambient_dim()));
}

}  // namespace

Subspace::Subspace(std::size_t ambient, std::vector<Vector> basis)
    : ambient_(ambient), basis_(std::move(basis)) {
  key_ = std::to_string(ambient_) + "|";
  for (const auto& v : basis_) {
    for (const auto& z : v) {
      key_ += z.to_string();
      key_ += ',';
    }
    key_ += ';';
  }
}

Subspace Subspace::span(std::size_t ambient_dim, const std::vector<Vector>& vectors) {
  if (vectors.empty()) return Subspace(ambient_dim, {});
  RrefResult r = rref(ExactMatrix::from_rows(vectors, ambient_dim));
  std::vector<Vector> basis;
  basis.reserve(r.rank());
  for (std::size_t i = 0; i < r.rank(); ++i) basis.push_back(r.form.row(i));
  return Subspace(ambient_dim, std::move(basis));
}

Subspace Subspace::zero(std::size_t ambient_dim) { return Subspace(ambient_dim, {}); }

Subspace Subspace::whole(std::size_t ambient_dim) {
  std::vector<Vector> basis;
  for (std::size_t i = 0; i < ambient_dim; ++i) {
    Vector v(ambient_dim);
    v[i] = 1;
    basis.push_back(std::move(v));
  }
  return Subspace(ambient_dim, std::move(basis));
}

ExactMatrix Subspace::basis_columns() const { return ExactMatrix::from_columns(basis_, ambient_); }

ExactMatrix Subspace::projector() const {
  if (is_zero()) return ExactMatrix::zero(ambient_, ambient_);
  ExactMatrix v = basis_columns();
  ExactMatrix vh = conj_transpose(v);
  return mat_mul(mat_mul(v, inverse(mat_mul(vh, v))), vh);
}

std::string Subspace::to_string() const {
  if (is_zero()) return "{0}";
  std::string s = "span[";
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (i) s += ", ";
    s += vector_to_string(basis_[i]);
  }
  return s + "]";
}

Ray::Ray(Subspace space) : space_(std::move(space)) {
  if (space_.dim() != 1)
    throw ValidationError("ray", "expected a one-dimensional subspace, got dim " + std::to_string(space_.dim()));
}

Ray Ray::of(const Vector& v) { return Ray(Subspace::span(v.size(), {v})); }

Subspace join(const Subspace& p, const Subspace& q) {
  require_same_ambient(p, q, "join");
  std::vector<Vector> all = p.basis();
  all.insert(all.end(), q.basis().begin(), q.basis().end());
  return Subspace::span(p.ambient_dim(), all);
}

Subspace meet(const Subspace& p, const Subspace& q) {
  require_same_ambient(p, q, "meet");
  const std::size_t n = p.ambient_dim();
  if (p.is_zero() || q.is_zero()) return Subspace::zero(n);
  // Solve sum a_i p_i - sum b_j q_j = 0; each solution gives sum a_i p_i in the meet.
  const std::size_t k = p.dim(), l = q.dim();
  ExactMatrix system(n, k + l);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t r = 0; r < n; ++r) system(r, c) = p.basis()[c][r];
  for (std::size_t c = 0; c < l; ++c)
    for (std::size_t r = 0; r < n; ++r) system(r, k + c) = -q.basis()[c][r];
  std::vector<Vector> vectors;
  for (const auto& sol : kernel_basis(system)) {
    Vector v(n);
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t r = 0; r < n; ++r) v[r] += sol[c] * p.basis()[c][r];
    vectors.push_back(std::move(v));
  }
  return Subspace::span(n, vectors);
}

Subspace ortho(const Subspace& p) {
  const std::size_t n = p.ambient_dim();
  if (p.is_zero()) return Subspace::whole(n);
  std::vector<Vector> conj_rows;
  for (const auto& b : p.basis()) {
    Vector c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = b[i].conj();
    conj_rows.push_back(std::move(c));
  }
  return Subspace::span(n, kernel_basis(ExactMatrix::from_rows(conj_rows, n)));
}

bool leq(const Subspace& p, const Subspace& q) {
  require_same_ambient(p, q, "leq");
  if (p.dim() > q.dim()) return false;
  return join(p, q).dim() == q.dim();
}

Subspace apply_operator(const ExactMatrix& f, const Subspace& p) {
  const std::size_t n = p.ambient_dim();
  if (f.rows() != n || f.cols() != n)
    throw DimensionMismatch("apply_operator: " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                            " operator on C^" + std::to_string(n));
  std::vector<Vector> images;
  for (const auto& b : p.basis()) images.push_back(mat_vec(f, b));
  return Subspace::span(n, images);
}

Subspace project_onto_eigenspace(const Subspace& e, const Subspace& r) {
  require_same_ambient(e, r, "project_onto_eigenspace");
  return meet(join(e, ortho(r)), r);
}

std::vector<Subspace> generate_sublattice(const std::vector<Subspace>& seeds, std::size_t cap) {
  std::vector<Subspace> elements;
  std::unordered_set<std::string> seen;
  auto add = [&](Subspace s) {
    if (!seen.insert(s.key()).second) return;
    if (elements.size() >= cap) throw CapExceeded("lattice", cap);
    elements.push_back(std::move(s));
  };
  for (const auto& s : seeds) add(s);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    add(ortho(elements[i]));
    for (std::size_t j = 0; j <= i; ++j) {
      Subspace a = elements[i], b = elements[j];
      add(meet(a, b));
      add(join(a, b));
    }
  }
  return elements;
}

}  // namespace qtopos
