#include "qtopos/valuation.hpp"

namespace qtopos {

std::vector<Subspace> object_rays(const PlainSite& site) { return site.objects; }

std::vector<Subspace> object_rays(const ExtendedSite& site) {
  std::vector<Subspace> out;
  for (const ObjectX& o : site.objects) out.push_back(site.rays[o.ray]);
  return out;
}

GlobalElement atom_section(const PropositionUniverse& universe, const std::vector<Subspace>& rays,
                           const Subspace& eigenspace) {
  GlobalElement g;
  for (const auto& ray : rays) g.value.push_back(universe.id(project_onto_eigenspace(ray, eigenspace)));
  return g;
}

Subobject true_subobject(const PropositionUniverse& universe, const GlobalElement& section) {
  Subobject t(section.value.size());
  for (std::size_t o = 0; o < t.size(); ++o)
    for (std::size_t p = 0; p < universe.size(); ++p)
      if (universe.leq(section.value[o], p)) t[o].push_back(p);
  return t;
}

Sieve valuation(const FiniteCategory& cat, const PropositionUniverse& universe, std::size_t object, std::size_t atom,
                std::size_t p) {
  Sieve s{object, {}};
  for (std::size_t a : cat.out(object)) {
    std::size_t op = cat.arrow(a).op;
    if (universe.leq(universe.apply(op, atom), universe.apply(op, p))) s.arrows.push_back(a);
  }
  return s;
}

Sieve bottom_annihilator(const FiniteCategory& cat, const PropositionUniverse& universe, std::size_t object,
                         std::size_t atom) {
  Sieve s{object, {}};
  for (std::size_t a : cat.out(object))
    if (universe.apply(cat.arrow(a).op, atom) == universe.zero_id()) s.arrows.push_back(a);
  return s;
}

std::vector<Sieve> delta_omega_at(const StageHeyting& stage, const Sieve& bottom) {
  std::vector<Sieve> out;
  for (const Sieve& s : stage.sieves)
    if (sieve_leq(bottom, s)) out.push_back(s);
  return out;
}

Subobject delta_omega(const OmegaPresheaf& omega, const PropositionUniverse& universe, const GlobalElement& section) {
  const FiniteCategory& cat = omega.presheaf.category();
  Subobject d(cat.num_objects());
  for (std::size_t o = 0; o < cat.num_objects(); ++o) {
    Sieve bottom = bottom_annihilator(cat, universe, o, section.value.at(o));
    const auto& sieves = omega.stages[o].sieves;
    for (std::size_t i = 0; i < sieves.size(); ++i)
      if (sieve_leq(bottom, sieves[i])) d[o].push_back(i);
  }
  return d;
}

ConditionReport condition_check(const FiniteCategory& cat, const PropositionUniverse& universe, std::size_t object,
                                std::size_t atom, const std::vector<std::size_t>& propositions) {
  ConditionReport r;
  const Sieve top = top_sieve(cat, object);
  std::vector<Sieve> values;
  for (std::size_t p : propositions) values.push_back(valuation(cat, universe, object, atom, p));
  for (std::size_t i = 0; i < propositions.size(); ++i)
    for (std::size_t j = 0; j < propositions.size(); ++j) {
      std::size_t p = propositions[i], q = propositions[j];
      ++r.pairs;
      if (universe.leq(p, q) && !sieve_leq(values[i], values[j])) {
        r.monotone = false;
        r.violations.push_back("monotonicity: " + universe.element(p).to_string() + " <= " +
                               universe.element(q).to_string());
      }
      Sieve both = valuation(cat, universe, object, atom, universe.meet(p, q));
      if (both != top && values[i] == top && values[j] == top) {
        r.exclusive = false;
        r.violations.push_back("exclusivity: " + universe.element(p).to_string() + ", " +
                               universe.element(q).to_string());
      }
    }
  if (valuation(cat, universe, object, atom, universe.whole_id()) != top) {
    r.unit = false;
    r.violations.push_back("unit proposition is not top");
  }
  r.null_value = valuation(cat, universe, object, atom, universe.zero_id());
  r.annihilator = bottom_annihilator(cat, universe, object, atom);
  if (r.null_value != r.annihilator) r.violations.push_back("null proposition differs from the annihilator");
  r.null_fails_in_omega = r.null_value == r.annihilator && !r.annihilator.empty();
  r.null_is_delta_bottom = r.null_value == r.annihilator;
  return r;
}

}  // namespace qtopos
