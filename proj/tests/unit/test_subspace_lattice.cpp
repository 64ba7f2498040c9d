#include <doctest.h>

#include "qtopos/error.hpp"
#include "support.hpp"

using namespace qtest;

namespace {

// Oracles written without the lattice module: spans of concatenated bases,
// the dimension formula, and explicit inner products.
Subspace join_oracle(const Subspace& p, const Subspace& q) {
  std::vector<Vector> vs = p.basis();
  vs.insert(vs.end(), q.basis().begin(), q.basis().end());
  return Subspace::span(p.ambient_dim(), vs);
}

bool contains_vector(const Subspace& s, const Vector& v) {
  std::vector<Vector> vs = s.basis();
  vs.push_back(v);
  return Subspace::span(s.ambient_dim(), vs).dim() == s.dim();
}

bool orthogonal(const Subspace& p, const Subspace& q) {
  for (const auto& a : p.basis())
    for (const auto& b : q.basis())
      if (!inner(a, b).is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("subspaces have a canonical form") {
  CHECK(span(2, {{2, 2}}) == span(2, {{1, 1}}));
  CHECK(span(3, {{1, 1, 0}, {1, -1, 0}}) == span(3, {{1, 0, 0}, {0, 1, 0}}));
  CHECK(span(2, {{0, 0}}).is_zero());
  CHECK(span(2, {{1, 0}, {0, 1}}).is_whole());
  CHECK(span(2, {{1, 2}}).key() == span(2, {{3, 6}}).key());
}

TEST_CASE("join, meet and ortho agree with independent oracles") {
  RandomExact r(17);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + t % 3;
    Subspace p = r.subspace(n), q = r.subspace(n);
    Subspace j = join(p, q), m = meet(p, q), o = ortho(p);
    CHECK(j == join_oracle(p, q));
    CHECK(m.dim() + j.dim() == p.dim() + q.dim());
    for (const auto& v : m.basis()) {
      CHECK(contains_vector(p, v));
      CHECK(contains_vector(q, v));
    }
    CHECK(o.dim() + p.dim() == n);
    CHECK(orthogonal(o, p));
    CHECK(ortho(o) == p);
    CHECK(leq(m, p));
    CHECK(leq(p, j));
    CHECK(leq(p, q) == (meet(p, q) == p));
  }
}

TEST_CASE("orthomodular law on random comparable pairs") {
  RandomExact r(23);
  int comparable = 0;
  for (int t = 0; t < 300; ++t) {
    Subspace p = r.subspace(3), q = join(p, r.subspace(3));
    REQUIRE(leq(p, q));
    ++comparable;
    CHECK(join(p, meet(q, ortho(p))) == q);
  }
  CHECK(comparable == 300);
}

TEST_CASE("distributivity fails in general") {
  Subspace a = span(2, {{1, 0}}), b = span(2, {{0, 1}}), c = span(2, {{1, 1}});
  CHECK(meet(c, join(a, b)) != join(meet(c, a), meet(c, b)));
}

TEST_CASE("projection onto an eigenspace equals the projector image") {
  RandomExact r(29);
  for (int t = 0; t < 150; ++t) {
    Subspace e = Subspace::span(3, {r.vector(3)});
    if (e.is_zero()) continue;
    Subspace es = r.subspace(3);
    CHECK(project_onto_eigenspace(e, es) == apply_operator(es.projector(), e));
  }
  // Worked case: (1,1) onto span(e1).
  CHECK(project_onto_eigenspace(span(2, {{1, 1}}), span(2, {{1, 0}})) == span(2, {{1, 0}}));
  CHECK(project_onto_eigenspace(span(2, {{1, 0}}), span(2, {{0, 1}})).is_zero());
}

TEST_CASE("projectors are idempotent and self-adjoint") {
  RandomExact r(31);
  for (int t = 0; t < 100; ++t) {
    Subspace s = r.subspace(3);
    ExactMatrix p = s.projector();
    CHECK(mat_mul(p, p) == p);
    CHECK(conj_transpose(p) == p);
    CHECK(apply_operator(p, Subspace::whole(3)) == s);
  }
}

TEST_CASE("operator images are monotone") {
  RandomExact r(37);
  for (int t = 0; t < 100; ++t) {
    ExactMatrix f = r.matrix(3, 3);
    Subspace p = r.subspace(3), q = join(p, r.subspace(3));
    CHECK(leq(apply_operator(f, p), apply_operator(f, q)));
  }
}

TEST_CASE("generated sublattice is closed and respects its cap") {
  auto lat = generate_sublattice({span(2, {{1, 0}}), span(2, {{1, 1}})}, 64);
  CHECK(lat.size() == 6);  // 0, I, two lines and their orthocomplements
  CHECK_THROWS_AS(generate_sublattice({span(3, {{1, 0, 0}}), span(3, {{1, 1, 0}}), span(3, {{1, 1, 1}})}, 32),
                  CapExceeded);
  CHECK_THROWS_AS(join(span(2, {{1, 0}}), span(3, {{1, 0, 0}})), DimensionMismatch);
}
