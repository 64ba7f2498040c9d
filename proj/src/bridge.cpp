#include "qtopos/bridge.hpp"

#include <algorithm>
#include <set>

#include "qtopos/error.hpp"

namespace qtopos {

Bridge::Bridge(const ExtendedSite& site, std::size_t rho)
    : site_(&site), rho_(rho), plain_(restrict_to_rho(site, rho)) {}

std::vector<std::size_t> Bridge::lift(const Sieve& plain_sieve) const {
  std::vector<std::size_t> out;
  for (std::size_t g : plain_sieve.arrows) out.push_back(eta(g));
  std::sort(out.begin(), out.end());
  return out;
}

Sieve Bridge::sharp(const Sieve& plain_sieve) const {
  return generated_sieve(site_->category, extended_object(plain_sieve.base), lift(plain_sieve));
}

Sieve Bridge::flat(const Sieve& extended_sieve) const {
  const ObjectX& obj = site_->objects.at(extended_sieve.base);
  if (obj.rho != rho_) throw InconsistentSite("flat: sieve is not on a stage of this observable");
  Sieve out{obj.ray, {}};
  for (std::size_t g : plain_.category.out(obj.ray))
    if (extended_sieve.contains(eta(g))) out.arrows.push_back(g);
  return out;
}

Sieve Bridge::natural_implies(const Sieve& a, const Sieve& b) const {
  return sharp(heyting_implies(plain_.category, flat(a), flat(b)));
}

Sieve sharp_by_intersection(const FiniteCategory& cat, std::size_t base, const std::vector<std::size_t>& lifted,
                            const std::vector<Sieve>& candidates) {
  Sieve acc = top_sieve(cat, base);
  for (const Sieve& s : candidates) {
    if (s.base != base) continue;
    if (std::includes(s.arrows.begin(), s.arrows.end(), lifted.begin(), lifted.end())) acc = heyting_meet(acc, s);
  }
  return acc;
}

std::size_t same_rho_arrow(const ExtendedSite& site, std::size_t arrow) {
  const MorphismX& m = site.morphisms.at(arrow);
  const Arrow& a = site.category.arrow(arrow);
  auto cod = site.object_index(m.cod_ray, m.dom_rho);
  auto found = cod ? site.category.find(a.dom, a.op, *cod) : std::nullopt;
  if (!found) throw InconsistentSite("arrow " + std::to_string(arrow) + " has no matching same-observable arrow");
  return *found;
}

Sieve natural_by_restriction(const ExtendedSite& site, const Sieve& s) {
  const std::size_t rho = site.objects.at(s.base).rho;
  std::vector<std::size_t> same;
  for (std::size_t a : s.arrows)
    if (site.morphisms.at(a).cod_rho == rho) same.push_back(a);
  return generated_sieve(site.category, s.base, same);
}

Subobject natural_omega(const OmegaPresheaf& omega, const std::vector<Bridge>& bridges) {
  const FiniteCategory& cat = omega.presheaf.category();
  Subobject out(cat.num_objects());
  for (std::size_t o = 0; o < cat.num_objects(); ++o) {
    const Bridge& b = bridges.at(bridges.front().site().objects.at(o).rho);
    const auto& sieves = omega.stages[o].sieves;
    for (std::size_t i = 0; i < sieves.size(); ++i)
      if (b.is_natural(sieves[i])) out[o].push_back(i);
  }
  return out;
}

namespace {

std::vector<Sieve> stage_sieves(const FiniteCategory& cat, std::size_t object, std::size_t cap, bool& complete) {
  StageHeyting st = omega_at(cat, object, cap);
  if (!st.complete) complete = false;
  return st.sample;
}

}  // namespace

StageBridgeAudit audit_stage(const Bridge& bridge, std::size_t ray, std::size_t cap) {
  StageBridgeAudit r;
  const FiniteCategory& pcat = bridge.plain().category;
  const FiniteCategory& xcat = bridge.site().category;
  const std::size_t xobj = bridge.extended_object(ray);
  std::vector<Sieve> plain = stage_sieves(pcat, ray, cap, r.complete);
  std::vector<Sieve> ext = stage_sieves(xcat, xobj, cap, r.complete);
  r.plain_sieves = plain.size();
  r.extended_sieves = ext.size();
  auto note = [&](bool& flag, const std::string& what) {
    if (flag) r.violations.push_back(what);
    flag = false;
  };

  std::vector<Sieve> sharp_of(plain.size());
  for (std::size_t i = 0; i < plain.size(); ++i) {
    sharp_of[i] = bridge.sharp(plain[i]);
    if (!is_sieve(xcat, sharp_of[i])) note(r.lattice_homomorphisms, "sharp value is not a sieve");
    if (bridge.flat(sharp_of[i]) != plain[i]) note(r.flat_sharp_identity, "flat(sharp S) != S for " + sieve_to_string(plain[i]));
    if (r.complete && sharp_of[i] != sharp_by_intersection(xcat, xobj, bridge.lift(plain[i]), ext))
      note(r.sharp_matches_oracle, "closed-form sharp differs from the intersection for " + sieve_to_string(plain[i]));
  }

  std::set<Sieve> fix, image;
  for (const Sieve& s : ext) {
    Sieve n = bridge.natural(s);
    if (!sieve_leq(n, s)) note(r.natural_below_identity, "natural map exceeds " + sieve_to_string(s));
    if (bridge.natural(n) != n) note(r.natural_idempotent, "natural map is not idempotent at " + sieve_to_string(s));
    image.insert(n);
    if (n == s) fix.insert(s);
  }
  r.natural_sieves = fix.size();
  if (r.complete) {
    if (fix != image) note(r.fixpoints_are_image, "fixpoints differ from the image of the natural map");
    std::set<Sieve> sharp_image(sharp_of.begin(), sharp_of.end());
    if (sharp_image != fix) note(r.heyting_isomorphism, "sharp does not map onto the natural sieves");
  }

  const Sieve ptop = top_sieve(pcat, ray), xtop = top_sieve(xcat, xobj);
  if (bridge.sharp(ptop) != xtop || !bridge.sharp(bottom_sieve(ray)).empty() || bridge.flat(xtop) != ptop ||
      !bridge.flat(bottom_sieve(xobj)).empty())
    note(r.lattice_homomorphisms, "top or bottom not preserved");
  for (std::size_t i = 0; i < plain.size(); ++i)
    for (std::size_t j = 0; j < plain.size(); ++j) {
      const Sieve &a = plain[i], &b = plain[j];
      if (bridge.sharp(heyting_join(a, b)) != heyting_join(sharp_of[i], sharp_of[j]) ||
          bridge.sharp(heyting_meet(a, b)) != heyting_meet(sharp_of[i], sharp_of[j]))
        note(r.lattice_homomorphisms, "sharp fails to preserve join or meet");
      if (sieve_leq(a, b) && !sieve_leq(sharp_of[i], sharp_of[j])) note(r.order_and_implication, "sharp is not monotone");
      if (!sieve_leq(bridge.sharp(heyting_implies(pcat, a, b)), heyting_implies(xcat, sharp_of[i], sharp_of[j])))
        note(r.order_and_implication, "sharp breaks the implication inequality");
    }
  for (const Sieve& a : ext)
    for (const Sieve& b : ext) {
      Sieve fa = bridge.flat(a), fb = bridge.flat(b);
      if (bridge.flat(heyting_join(a, b)) != heyting_join(fa, fb) ||
          bridge.flat(heyting_meet(a, b)) != heyting_meet(fa, fb))
        note(r.lattice_homomorphisms, "flat fails to preserve join or meet");
      if (sieve_leq(a, b) && !sieve_leq(fa, fb)) note(r.order_and_implication, "flat is not monotone");
      if (!sieve_leq(bridge.flat(heyting_implies(xcat, a, b)), heyting_implies(pcat, fa, fb)))
        note(r.order_and_implication, "flat breaks the implication inequality");
    }

  std::vector<Sieve> fixed(fix.begin(), fix.end());
  std::set<Sieve> flats;
  for (const Sieve& s : fixed) {
    flats.insert(bridge.flat(s));
    if (bridge.sharp(bridge.flat(s)) != s) note(r.heyting_isomorphism, "sharp(flat S) != S on a natural sieve");
    for (std::size_t a : s.arrows)
      if (!s.contains(same_rho_arrow(bridge.site(), a)))
        note(r.natural_closure, "natural sieve " + sieve_to_string(s) + " lacks the same-observable arrow of " +
                                    std::to_string(a));
  }
  if (flats.size() != fixed.size()) note(r.heyting_isomorphism, "flat is not injective on natural sieves");
  if (r.complete && flats != std::set<Sieve>(plain.begin(), plain.end()))
    note(r.heyting_isomorphism, "flat does not map the natural sieves onto the plain stage");

  for (const Sieve& a : fixed)
    for (const Sieve& b : fixed) {
      Sieve nimp = bridge.natural_implies(a, b);
      Sieve imp = heyting_implies(xcat, a, b);
      if (!fix.count(heyting_meet(a, b)) || !fix.count(heyting_join(a, b)))
        note(r.heyting_isomorphism, "natural sieves not closed under meet or join");
      if (bridge.flat(nimp) != heyting_implies(pcat, bridge.flat(a), bridge.flat(b)))
        note(r.heyting_isomorphism, "flat does not transport the implication");
      if (!sieve_leq(nimp, imp)) note(r.heyting_isomorphism, "natural implication exceeds the plain implication");
      if (nimp != imp) ++r.strict_implication_pairs;
      if (!fix.count(imp)) ++r.implication_closure_failures;
      for (const Sieve& x : fixed)
        if (sieve_leq(heyting_meet(a, x), b) != sieve_leq(x, nimp))
          note(r.heyting_isomorphism, "natural implication is not the relative pseudocomplement");
    }
  return r;
}

ProjectivityVerdict projectivity_at(const Presheaf& m, const Subobject& n, const ExtendedSite& site, std::size_t object,
                                    std::size_t x) {
  const FiniteCategory& cat = site.category;
  ProjectivityVerdict v;
  for (std::size_t a : cat.out(object)) {
    if (!subobject_contains(n, cat.arrow(a).cod, m.apply(a, x))) continue;
    std::size_t b = same_rho_arrow(site, a);
    if (!subobject_contains(n, cat.arrow(b).cod, m.apply(b, x))) {
      v.projective = false;
      v.witness = a;
      break;
    }
  }
  Sieve chi = characteristic(m, n, object, x);
  v.characteristic_natural = natural_by_restriction(site, chi) == chi;
  return v;
}

std::vector<EquivalenceRow> equivalence_check(const Bridge& bridge, const PropositionUniverse& universe,
                                              std::size_t ray, const Subspace& eigenspace,
                                              const std::vector<std::size_t>& propositions) {
  const FiniteCategory& pcat = bridge.plain().category;
  const FiniteCategory& xcat = bridge.site().category;
  const std::size_t xobj = bridge.extended_object(ray);
  const std::size_t atom = universe.id(project_onto_eigenspace(bridge.site().rays.at(ray), eigenspace));
  std::vector<EquivalenceRow> rows;
  for (std::size_t p : propositions) {
    EquivalenceRow row;
    row.proposition = p;
    row.plain_value = valuation(pcat, universe, ray, atom, p);
    row.extended_value = valuation(xcat, universe, xobj, atom, p);
    row.natural_value = bridge.natural(row.extended_value);
    row.flat_value = bridge.flat(row.extended_value);
    row.outer = row.flat_value == row.plain_value;
    row.left = bridge.flat(row.natural_value) == row.plain_value;
    row.right = bridge.sharp(row.plain_value) == row.natural_value;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qtopos
