#include <doctest.h>

#include <set>

#include "qtopos/error.hpp"
#include "support.hpp"

using namespace qtest;

namespace {

struct QubitFixture {
  OperatorMonoid monoid = qubit_monoid();
  PlainSite site = build_plain_site(sigma_z(), monoid, {span(2, {{1, 1}})}, 64);
  PropositionUniverse u{site.monoid,
                        {span(2, {{1, 0}}), span(2, {{0, 1}}), span(2, {{1, 1}}), span(2, {{1, -1}})},
                        512};
  Subspace r1 = span(2, {{1, 0}});

  std::set<std::pair<std::size_t, std::size_t>> ops_cods(const Sieve& s) const {
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a : s.arrows) out.insert({site.category.arrow(a).op, site.category.arrow(a).cod});
    return out;
  }
  std::size_t op(const ExactMatrix& m) const { return *site.monoid.index_of(m); }
};

}  // namespace

TEST_CASE("proposition universe is closed under the action and meets") {
  QubitFixture f;
  CHECK(f.u.size() == 6);
  for (std::size_t p = 0; p < f.u.size(); ++p) {
    for (std::size_t o = 0; o < f.site.monoid.size(); ++o)
      CHECK(f.u.element(f.u.apply(o, p)) == apply_operator(f.site.monoid.element(o), f.u.element(p)));
    for (std::size_t q = 0; q < f.u.size(); ++q) {
      CHECK(f.u.element(f.u.meet(p, q)) == meet(f.u.element(p), f.u.element(q)));
      CHECK(f.u.leq(p, q) == leq(f.u.element(p), f.u.element(q)));
    }
  }
  CHECK_THROWS_AS(f.u.id(span(2, {{1, 2}})), UnknownObject);
  CHECK_THROWS_AS(PropositionUniverse(f.monoid, {span(2, {{1, 2}})}, 3), CapExceeded);
}

TEST_CASE("worked valuations on the qubit") {
  QubitFixture f;
  GlobalElement sigma = atom_section(f.u, object_rays(f.site), f.r1);
  const std::size_t atom = sigma.value[0];
  CHECK(f.u.element(atom) == f.r1);
  const std::size_t pi1 = f.op(diag({1, 0})), pi2 = f.op(diag({0, 1}));

  // span(e2): only pi2 sends it above the image of the atom.
  Sieve down = valuation(f.site.category, f.u, 0, atom, f.u.id(span(2, {{0, 1}})));
  CHECK(f.ops_cods(down) == std::set<std::pair<std::size_t, std::size_t>>{{pi2, 2}});
  CHECK(down == bottom_annihilator(f.site.category, f.u, 0, atom));

  // The state itself: pi1 and pi2 but not the identity.
  Sieve plus = valuation(f.site.category, f.u, 0, atom, f.u.id(span(2, {{1, 1}})));
  CHECK(f.ops_cods(plus) == std::set<std::pair<std::size_t, std::size_t>>{{pi1, 1}, {pi2, 2}});

  CHECK(valuation(f.site.category, f.u, 0, atom, f.u.whole_id()) == top_sieve(f.site.category, 0));
  CHECK(valuation(f.site.category, f.u, 0, atom, f.u.id(f.r1)) == top_sieve(f.site.category, 0));
}

TEST_CASE("characteristic map of the true subobject equals the valuation formula") {
  QubitFixture f;
  Presheaf l = proposition_presheaf(f.site.category, f.u);
  CHECK_FALSE(l.functoriality_violation());
  const Observable z = sigma_z();
  for (const Subspace& r : z.eigenspaces()) {
    GlobalElement sigma = atom_section(f.u, object_rays(f.site), r);
    CHECK_FALSE(naturality_violation(l, sigma));
    Subobject t = true_subobject(f.u, sigma);
    CHECK_NOTHROW(validate_subobject(l, t));
    CHECK(filter_check(f.u, t).empty());
    for (std::size_t o = 0; o < f.site.objects.size(); ++o)
      for (std::size_t p = 0; p < f.u.size(); ++p)
        CHECK(characteristic(l, t, o, p) == valuation(f.site.category, f.u, o, sigma.value[o], p));
  }
}

TEST_CASE("null proposition fails in Omega and holds in the restricted subobject") {
  QubitFixture f;
  GlobalElement sigma = atom_section(f.u, object_rays(f.site), f.r1);
  std::vector<std::size_t> all(f.u.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  ConditionReport c = condition_check(f.site.category, f.u, 0, sigma.value[0], all);
  CHECK(c.monotone);
  CHECK(c.exclusive);
  CHECK(c.unit);
  CHECK(c.null_fails_in_omega);
  CHECK(c.null_is_delta_bottom);
  CHECK_FALSE(c.annihilator.empty());
  CHECK(c.ok());

  StageHeyting st = omega_at(f.site.category, 0, 4096);
  auto delta = delta_omega_at(st, c.annihilator);
  REQUIRE(delta.size() == 3);
  for (std::size_t i = 0; i + 1 < delta.size(); ++i) CHECK(sieve_leq(delta[i], delta[i + 1]));
  CHECK(delta.front() == c.annihilator);
  CHECK(delta.back() == st.top);
}

TEST_CASE("classifier audit: Omega and the restricted subobject classify T") {
  QubitFixture f;
  Presheaf l = proposition_presheaf(f.site.category, f.u);
  OmegaPresheaf omega = build_omega(f.site.category, 4096);
  GlobalElement sigma = atom_section(f.u, object_rays(f.site), f.r1);
  Subobject t = true_subobject(f.u, sigma);
  Subobject d = delta_omega(omega, f.u, sigma);
  CHECK_NOTHROW(validate_subobject(omega.presheaf, d));
  CHECK(classifier_audit(l, t, omega, d).ok());

  // Mutation: the restricted family of the other eigenspace cannot receive chi.
  GlobalElement other = atom_section(f.u, object_rays(f.site), span(2, {{0, 1}}));
  Subobject wrong = delta_omega(omega, f.u, other);
  ClassifierAudit bad = classifier_audit(l, t, omega, wrong);
  CHECK_FALSE(bad.factors);
  CHECK_FALSE(bad.ok());
}

TEST_CASE("uniqueness is enumerated on a small site") {
  OperatorMonoid m = close_monoid({}, 1, 4);
  PlainSite s = build_plain_site(Observable::trivial("t", 1), m, {Subspace::whole(1)}, 4);
  PropositionUniverse u(s.monoid, {}, 8);
  Presheaf l = proposition_presheaf(s.category, u);
  OmegaPresheaf omega = build_omega(s.category, 16);
  Subobject t = true_subobject(u, atom_section(u, object_rays(s), Subspace::whole(1)));
  Subobject all{omega.presheaf.values(0)};
  ClassifierAudit a = classifier_audit(l, t, omega, all);
  CHECK(a.ok());
  CHECK(a.uniqueness_mode == "enumerated");
  CHECK(a.candidates == 4);
}

TEST_CASE("subobject validation rejects unstable families") {
  QubitFixture f;
  Presheaf l = proposition_presheaf(f.site.category, f.u);
  Subobject n(f.site.objects.size());
  n[0] = {f.u.id(span(2, {{1, 1}}))};
  CHECK_THROWS_AS(validate_subobject(l, n), NotSubPresheaf);
}
