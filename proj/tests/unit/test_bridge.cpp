#include <doctest.h>

#include "qtopos/error.hpp"
#include "support.hpp"

using namespace qtest;

namespace {

struct ExtendedFixture {
  OperatorMonoid monoid = qubit_monoid();
  ExtendedSite site = build_extended_site({Observable::trivial("rho0", 2), sigma_z()}, monoid, {span(2, {{1, 1}})}, 64);
};

}  // namespace

TEST_CASE("sharp agrees with the intersection of containing sieves; flat undoes it") {
  ExtendedFixture f;
  for (std::size_t rho = 0; rho < 2; ++rho) {
    Bridge b(f.site, rho);
    for (std::size_t ray = 0; ray < f.site.rays.size(); ++ray) {
      const std::size_t base = b.extended_object(ray);
      auto ext = enumerate_sieves(f.site.category, base, 4096);
      for (const Sieve& s : enumerate_sieves(b.plain().category, ray, 4096)) {
        Sieve sharp = b.sharp(s);
        CHECK(is_sieve(f.site.category, sharp));
        CHECK(sharp == sharp_by_intersection(f.site.category, base, b.lift(s), ext));
        CHECK(b.flat(sharp) == s);
      }
      for (const Sieve& s : ext) {
        Sieve n = b.natural(s);
        CHECK(sieve_leq(n, s));
        CHECK(b.natural(n) == n);
        CHECK(n == natural_by_restriction(f.site, s));
      }
    }
  }
}

TEST_CASE("stage audits pass on the qubit extended site") {
  ExtendedFixture f;
  for (std::size_t rho = 0; rho < 2; ++rho) {
    Bridge b(f.site, rho);
    for (std::size_t ray = 0; ray < f.site.rays.size(); ++ray) {
      StageBridgeAudit a = audit_stage(b, ray, 4096);
      CHECK(a.ok());
      CHECK(a.complete);
      CHECK(a.natural_sieves == a.plain_sieves);
    }
  }
}

TEST_CASE("coarse stage has more sieves than natural ones") {
  ExtendedFixture f;
  Bridge b(f.site, 0);
  StageBridgeAudit a = audit_stage(b, 0, 4096);
  CHECK(a.extended_sieves > a.natural_sieves);
}

TEST_CASE("projectivity detectors agree and find a witness") {
  ExtendedFixture f;
  PropositionUniverse u(f.monoid, {span(2, {{1, 1}})}, 64);
  Presheaf l = proposition_presheaf(f.site.category, u);
  Subobject fine_only(f.site.objects.size()), everything(f.site.objects.size());
  for (std::size_t o = 0; o < f.site.objects.size(); ++o) {
    everything[o] = l.values(o);
    if (f.site.objects[o].rho == 1) fine_only[o] = l.values(o);
  }
  CHECK_NOTHROW(validate_subobject(l, fine_only));
  bool found = false;
  for (std::size_t o = 0; o < f.site.objects.size(); ++o)
    for (std::size_t x : l.values(o)) {
      ProjectivityVerdict v = projectivity_at(l, fine_only, f.site, o, x);
      CHECK(v.agree());
      if (!v.projective) {
        found = true;
        REQUIRE(v.witness);
        const MorphismX& m = f.site.morphisms[*v.witness];
        CHECK(m.dom_rho == 0);
        CHECK(m.cod_rho == 1);
      }
      ProjectivityVerdict w = projectivity_at(l, everything, f.site, o, x);
      CHECK(w.projective);
      CHECK(w.agree());
    }
  CHECK(found);
}

TEST_CASE("equivalence of plain and extended valuations") {
  ExtendedFixture f;
  PropositionUniverse u(f.monoid, {span(2, {{1, 0}}), span(2, {{1, 1}}), span(2, {{1, -1}})}, 64);
  Bridge b(f.site, 1);
  std::vector<std::size_t> all(u.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto rows = equivalence_check(b, u, *f.site.ray_index(span(2, {{1, 1}})), span(2, {{1, 0}}), all);
  CHECK(rows.size() == u.size());
  for (const auto& r : rows) {
    CHECK(r.ok());
    CHECK(r.flat_value == r.plain_value);
    CHECK(r.natural_value == b.sharp(r.plain_value));
  }
}

TEST_CASE("lift, natural map and their boundary cases") {
  ExtendedFixture f;
  Bridge coarse(f.site, 0);
  const std::size_t ray = *f.site.ray_index(span(2, {{1, 1}}));
  const std::size_t base = coarse.extended_object(ray);
  const FiniteCategory& xc = f.site.category;
  const FiniteCategory& pc = coarse.plain().category;

  CHECK(coarse.lift(bottom_sieve(ray)).empty());
  // The lift of the plain top misses the arrows into the finer observable.
  auto lifted_top = coarse.lift(top_sieve(pc, ray));
  CHECK(lifted_top.size() == pc.out(ray).size());
  CHECK(lifted_top.size() < xc.out(base).size());
  for (std::size_t a : lifted_top) CHECK(f.site.morphisms[a].cod_rho == 0);

  CHECK(coarse.natural(top_sieve(xc, base)) == top_sieve(xc, base));
  CHECK(coarse.natural(bottom_sieve(base)) == bottom_sieve(base));

  // A sieve made only of arrows into the finer observable flattens to nothing.
  std::vector<std::size_t> cross;
  for (std::size_t a : xc.out(base))
    if (f.site.morphisms[a].cod_rho == 1) cross.push_back(a);
  Sieve only_cross = generated_sieve(xc, base, cross);
  REQUIRE(is_sieve(xc, only_cross));
  bool all_cross = true;
  for (std::size_t a : only_cross.arrows) all_cross = all_cross && f.site.morphisms[a].cod_rho == 1;
  CHECK(all_cross);
  CHECK(coarse.flat(only_cross).empty());
  CHECK(coarse.natural(only_cross).empty());

  for (const Sieve& s : enumerate_sieves(pc, ray, 4096)) CHECK(coarse.natural(coarse.sharp(s)) == coarse.sharp(s));
}

TEST_CASE("a single observable makes the natural map the identity") {
  OperatorMonoid m = qubit_monoid();
  ExtendedSite x = build_extended_site({sigma_z()}, m, {span(2, {{1, 1}})}, 64);
  Bridge b(x, 0);
  for (std::size_t o = 0; o < x.objects.size(); ++o)
    for (const Sieve& s : enumerate_sieves(x.category, o, 4096)) CHECK(b.natural(s) == s);
}
