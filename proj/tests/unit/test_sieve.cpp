#include <doctest.h>

#include "qtopos/error.hpp"
#include "support.hpp"

using namespace qtest;

namespace {

PlainSite qubit_site() { return build_plain_site(sigma_z(), qubit_monoid(), {span(2, {{1, 1}})}, 64); }

// Largest sieve R with R ^ A <= B, by exhaustive search.
Sieve implies_oracle(const std::vector<Sieve>& all, const Sieve& a, const Sieve& b) {
  Sieve best = all.front();
  for (const Sieve& r : all)
    if (sieve_leq(heyting_meet(r, a), b) && r.size() >= best.size()) best = r;
  return best;
}

}  // namespace

TEST_CASE("qubit stage at (1,1) has exactly five sieves") {
  PlainSite s = qubit_site();
  auto sieves = enumerate_sieves(s.category, 0, 4096);
  CHECK(sieves.size() == 5);
  CHECK(enumerate_sieves(s.category, 1, 4096).size() == 3);
  for (std::size_t o = 0; o < s.objects.size(); ++o)
    CHECK(enumerate_sieves(s.category, o, 4096) == enumerate_sieves_by_subsets(s.category, o));
}

TEST_CASE("sieve enumeration reports its cap") {
  PlainSite s = qubit_site();
  CHECK_THROWS_AS(enumerate_sieves(s.category, 0, 3), CapExceeded);
  StageHeyting st = omega_at(s.category, 0, 3);
  CHECK_FALSE(st.complete);
  CHECK_FALSE(st.sample.empty());
}

TEST_CASE("principal and generated sieves are sieves") {
  PlainSite s = qubit_site();
  for (std::size_t a = 0; a < s.category.num_arrows(); ++a) {
    Sieve p = principal_sieve(s.category, a);
    CHECK(is_sieve(s.category, p));
    CHECK(p.contains(a));
  }
  CHECK(generated_sieve(s.category, 0, {}) == bottom_sieve(0));
  CHECK(generated_sieve(s.category, 0, {s.category.identity(0)}) == top_sieve(s.category, 0));
  CHECK_FALSE(is_sieve(s.category, make_sieve(0, {s.category.identity(0)})));
}

TEST_CASE("implication matches the exhaustive oracle and the Heyting laws hold") {
  PlainSite s = qubit_site();
  for (std::size_t o = 0; o < s.objects.size(); ++o) {
    auto all = enumerate_sieves(s.category, o, 4096);
    for (const Sieve& a : all)
      for (const Sieve& b : all) CHECK(heyting_implies(s.category, a, b) == implies_oracle(all, a, b));
    LawAudit audit = audit_heyting_laws(s.category, all);
    CHECK(audit.ok);
    CHECK_FALSE(audit.sampled);
  }
}

TEST_CASE("sieve transport along arrows is functorial") {
  // Arrows act covariantly here: an arrow e -> Fe carries a sieve on e to one on Fe.
  PlainSite s = qubit_site();
  const FiniteCategory& c = s.category;
  for (std::size_t f = 0; f < c.num_arrows(); ++f)
    for (const Sieve& t : enumerate_sieves(c, c.arrow(f).dom, 4096)) {
      Sieve moved = omega_transition(c, f, t);
      CHECK(moved.base == c.arrow(f).cod);
      CHECK(is_sieve(c, moved));
      for (const auto& [g, gf] : c.postcompositions(f))
        CHECK(omega_transition(c, gf, t) == omega_transition(c, g, moved));
    }
  for (std::size_t o = 0; o < s.objects.size(); ++o)
    for (const Sieve& t : enumerate_sieves(c, o, 4096)) CHECK(omega_transition(c, c.identity(o), t) == t);
}

TEST_CASE("sieves serialize as sorted arrow lists") {
  CHECK(sieve_to_string(make_sieve(0, {2, 0, 1})) == "{0,1,2}");
  CHECK(sieve_to_string(bottom_sieve(3)) == "{}");
}
