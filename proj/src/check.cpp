#include <algorithm>
#include <set>

#include "qtopos/analysis.hpp"
#include "qtopos/error.hpp"

namespace qtopos {

namespace {

class Rows {
 public:
  void add(const std::string& tag, const std::string& scope, bool ok, std::string note, ordered_json detail = nullptr,
           bool degraded = false) {
    ordered_json row;
    row["tag"] = tag;
    row["scope"] = scope;
    row["status"] = !ok ? "fail" : (degraded ? "degraded" : "pass");
    row["note"] = std::move(note);
    if (!detail.is_null()) row["detail"] = std::move(detail);
    rows_.push_back(std::move(row));
  }
  void skipped(const std::string& tag, const std::string& scope, const CapExceeded& e) {
    add(tag, scope, true, std::string("not evaluated: ") + e.what(), {{"cap", e.kind()}, {"limit", e.cap()}}, true);
  }
  ordered_json take() { return std::move(rows_); }

 private:
  ordered_json rows_ = ordered_json::array();
};

std::string first_or(const std::vector<std::string>& v, const std::string& fallback) {
  return v.empty() ? fallback : v.front();
}

ordered_json sieve_json(const FiniteCategory& cat, const Sieve& s) {
  ordered_json out = ordered_json::array();
  for (std::size_t a : s.arrows) out.push_back({cat.arrow(a).op, cat.arrow(a).cod});
  return out;
}

// ---------------------------------------------------------------------------
// Scenario-wide audits

void check_arithmetic(const Analysis& an, Rows& rows) {
  const OperatorMonoid& m = an.monoid();
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const ExactMatrix& f = m.element(i);
    if (conj_transpose(conj_transpose(f)) != f) bad.push_back("conjugate transpose is not an involution");
    RrefResult r = rref(f);
    if (rref(r.form).form != r.form) bad.push_back("rref is not idempotent");
    for (const auto& v : kernel_basis(f))
      for (const auto& x : mat_vec(f, v))
        if (!x.is_zero()) bad.push_back("kernel vector not annihilated");
  }
  std::size_t triples = 0;
  const std::size_t k = std::min<std::size_t>(m.size(), 24);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c, ++triples)
        if (mat_mul(mat_mul(m.element(a), m.element(b)), m.element(c)) !=
            mat_mul(m.element(a), mat_mul(m.element(b), m.element(c))))
          bad.push_back("matrix product is not associative");
  rows.add("exact-arithmetic", "scenario", bad.empty(), first_or(bad, "involution, rref idempotence, kernels, associativity"),
           {{"operators", m.size()}, {"associativity_triples", triples}}, k < m.size());

  bool closed = true;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b)
      for (std::size_t c = 0; c < m.size(); ++c)
        if (m.product(m.product(a, b), c) != m.product(a, m.product(b, c))) closed = false;
  rows.add("monoid-table", "scenario", closed && m.element(0) == ExactMatrix::identity(m.dimension()),
           "identity first, product table total and associative",
           {{"elements", m.size()}, {"generators", m.generator_indices().size()}});
}

void check_lattice(const Analysis& an, Rows& rows) {
  const Scenario& sc = an.scenario();
  std::vector<Subspace> seeds{Subspace::zero(sc.dimension), Subspace::whole(sc.dimension)};
  for (const auto& p : sc.propositions) seeds.push_back(p.space);
  std::vector<Subspace> lat;
  try {
    lat = generate_sublattice(seeds, sc.caps.lattice);
  } catch (const CapExceeded& e) {
    rows.skipped("lattice-laws", "scenario", e);
    return;
  }
  const std::size_t k = lat.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < k; ++i) index.emplace(lat[i].key(), i);
  std::vector<std::vector<std::size_t>> mt(k, std::vector<std::size_t>(k)), jt = mt;
  std::vector<std::size_t> ot(k);
  for (std::size_t i = 0; i < k; ++i) {
    ot[i] = index.at(ortho(lat[i]).key());
    for (std::size_t j = 0; j < k; ++j) {
      mt[i][j] = index.at(meet(lat[i], lat[j]).key());
      jt[i][j] = index.at(join(lat[i], lat[j]).key());
    }
  }
  std::vector<std::string> bad;
  for (std::size_t a = 0; a < k; ++a) {
    if (mt[a][a] != a || jt[a][a] != a) bad.push_back("idempotence");
    if (ot[ot[a]] != a || !meet(lat[a], lat[ot[a]]).is_zero() || !join(lat[a], lat[ot[a]]).is_whole())
      bad.push_back("orthocomplement");
    for (std::size_t b = 0; b < k; ++b) {
      if (mt[a][b] != mt[b][a] || jt[a][b] != jt[b][a]) bad.push_back("commutativity");
      if (mt[a][jt[a][b]] != a || jt[a][mt[a][b]] != a) bad.push_back("absorption");
      for (std::size_t c = 0; c < k; ++c)
        if (mt[mt[a][b]][c] != mt[a][mt[b][c]] || jt[jt[a][b]][c] != jt[a][jt[b][c]]) bad.push_back("associativity");
    }
  }
  rows.add("lattice-laws", "scenario", bad.empty(), first_or(bad, "meet/join/ortho laws on the generated sublattice"),
           {{"elements", k}});

  std::size_t pairs = 0;
  bool ok = true;
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q)
      if (mt[p][q] == p) {
        ++pairs;
        if (jt[p][mt[q][ot[p]]] != q) ok = false;
      }
  rows.add("orthomodularity", "scenario", ok, "q = p v (q ^ p-perp) whenever p <= q", {{"comparable_pairs", pairs}});
}

void check_projection_and_order(const Analysis& an, Rows& rows) {
  const Scenario& sc = an.scenario();
  std::vector<Subspace> rays;
  for (const auto& s : sc.states) rays.push_back(s.space);
  for (const auto& [obs, site] : an.plain_sites()) rays.insert(rays.end(), site.objects.begin(), site.objects.end());
  if (an.has_extended()) rays.insert(rays.end(), an.extended().rays.begin(), an.extended().rays.end());
  std::size_t checked = 0;
  bool ok = true;
  for (const auto& ray : rays)
    for (const auto& o : sc.observables)
      for (std::size_t i = 0; i < o.size(); ++i, ++checked)
        if (project_onto_eigenspace(ray, o.eigenspaces()[i]) != apply_operator(o.projectors()[i], ray)) ok = false;
  rows.add("projection-agreement", "scenario", ok, "lattice formula equals the orthogonal projector image",
           {{"pairs", checked}});

  const PropositionUniverse& u = an.universe();
  bool mono = true;
  for (std::size_t p = 0; p < u.size(); ++p)
    for (std::size_t q = 0; q < u.size(); ++q)
      if (u.leq(p, q))
        for (std::size_t op = 0; op < an.monoid().size(); ++op)
          if (!u.leq(u.apply(op, p), u.apply(op, q))) mono = false;
  rows.add("image-monotone", "scenario", mono, "p <= q implies F p <= F q for every operator",
           {{"propositions", u.size()}});

  const auto& obs = sc.observables;
  bool order = true;
  for (std::size_t a = 0; a < obs.size(); ++a) {
    if (!observable_leq(obs[a], obs[a])) order = false;
    for (std::size_t b = 0; b < obs.size(); ++b) {
      if (observable_leq(obs[a], obs[b]) && observable_leq(obs[b], obs[a]) && !obs[a].same_decomposition(obs[b]))
        order = false;
      for (std::size_t c = 0; c < obs.size(); ++c)
        if (observable_leq(obs[a], obs[b]) && observable_leq(obs[b], obs[c]) && !observable_leq(obs[a], obs[c]))
          order = false;
    }
  }
  rows.add("observable-order", "scenario", order, "refinement order is reflexive, antisymmetric, transitive",
           {{"observables", obs.size()}});

  bool com = true;
  std::size_t comparable = 0;
  for (const auto& a : obs)
    for (const auto& b : obs)
      if (observable_leq(a, b)) {
        ++comparable;
        for (const auto& f : an.monoid().elements())
          if (in_commutant(f, b) && !in_commutant(f, a)) com = false;
      }
  rows.add("commutant-order", "scenario", com, "rho <= rho' implies Com(rho') inside Com(rho)",
           {{"comparable_pairs", comparable}});
}

// ---------------------------------------------------------------------------
// Category-level audits shared by plain and extended sites

void check_category(const FiniteCategory& cat, const std::string& scope, Rows& rows, std::size_t sieve_cap) {
  bool assoc = true, ident = true;
  std::size_t triples = 0;
  for (std::size_t f = 0; f < cat.num_arrows(); ++f) {
    const Arrow& a = cat.arrow(f);
    if (cat.compose(cat.identity(a.cod), f) != f || cat.compose(f, cat.identity(a.dom)) != f) ident = false;
    for (const auto& [g, gf] : cat.postcompositions(f))
      for (const auto& [h, hg] : cat.postcompositions(g)) {
        ++triples;
        if (cat.compose(h, gf) != cat.compose(hg, f)) assoc = false;
      }
  }
  rows.add("site-associativity", scope, assoc && ident, "identities and associativity of composition",
           {{"objects", cat.num_objects()}, {"arrows", cat.num_arrows()}, {"triples", triples}});

  bool closure = true, census = true, degraded = false;
  std::size_t total = 0;
  ordered_json sizes = ordered_json::array();
  LawAudit laws;
  for (std::size_t o = 0; o < cat.num_objects(); ++o) {
    StageHeyting st = omega_at(cat, o, sieve_cap);
    if (!st.complete) degraded = true;
    sizes.push_back(st.complete ? ordered_json(st.sieves.size()) : ordered_json("capped"));
    for (const Sieve& s : st.sample)
      if (!is_sieve(cat, s)) closure = false;
    total += st.sample.size();
    if (st.complete && cat.out(o).size() <= 12 && enumerate_sieves_by_subsets(cat, o) != st.sieves) census = false;
    LawAudit a = audit_heyting_laws(cat, st.sample);
    if (!a.ok) laws.fail(a.first_violation);
    laws.sampled = laws.sampled || a.sampled || !st.complete;
    laws.checked += a.checked;
  }
  rows.add("sieve-enumeration", scope, closure && census,
           census ? "every enumerated set is a sieve; subset filtering agrees" : "enumeration differs from subset filtering",
           {{"stage_sizes", sizes}, {"total", total}}, degraded);
  rows.add("heyting-laws", scope, laws.ok, laws.ok ? "distributivity and implication adjunction" : laws.first_violation,
           {{"pairs", laws.checked}}, laws.sampled);
}

std::optional<OmegaPresheaf> omega_or_skip(const FiniteCategory& cat, std::size_t cap, const std::string& scope,
                                           Rows& rows) {
  try {
    OmegaPresheaf om = build_omega(cat, cap);
    auto v = om.presheaf.functoriality_violation();
    rows.add("omega-functoriality", scope, !v, v.value_or("pullback of sieves is functorial"));
    return om;
  } catch (const CapExceeded& e) {
    rows.skipped("omega-functoriality", scope, e);
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Plain sites and runs

void check_plain_site(const Analysis& an, std::size_t obs, Rows& rows) {
  const PlainSite& site = an.plain_site(obs);
  const std::string scope = "site:" + site.observable.name();
  check_category(site.category, scope, rows, an.scenario().caps.sieve_enum);

  bool part = true;
  for (std::size_t e = 0; e < site.objects.size(); ++e)
    for (std::size_t f = 0; f < site.monoid.size(); ++f) {
      Subspace img = apply_operator(site.monoid.element(f), site.objects[e]);
      std::size_t count = 0;
      for (std::size_t a : site.category.out(e))
        if (site.category.arrow(a).op == f) {
          ++count;
          if (site.objects[site.category.arrow(a).cod] != img) part = false;
        }
      if (count != (img.is_zero() ? 0u : 1u)) part = false;
    }
  rows.add("hom-partition", scope, part, "each operator gives exactly one arrow e -> Fe unless it annihilates e",
           {{"objects", site.objects.size()}, {"operators", site.monoid.size()}});

  Presheaf l = proposition_presheaf(site.category, an.plain_universe(obs));
  auto v = l.functoriality_violation();
  rows.add("proposition-functoriality", scope, !v, v.value_or("operators act functorially on propositions"));
}

void check_bub(const Analysis& an, std::size_t run, const std::string& scope, Rows& rows) {
  const TrueAtomSet& atoms = an.atoms(run);
  const std::vector<Subspace>& d = an.determinate(run);
  bool member = true, closed = true;
  std::set<std::string> keys;
  for (const auto& p : d) keys.insert(p.key());
  for (const auto& p : d) {
    if (!in_determinate_sublattice(p, atoms)) member = false;
    if (!keys.count(ortho(p).key())) closed = false;
    for (const auto& q : d)
      if (!keys.count(meet(p, q).key()) || !keys.count(join(p, q).key())) closed = false;
  }
  rows.add("determinate-sublattice", scope, member && closed, "every element is determinate; closed under meet/join/ortho",
           {{"elements", d.size()}, {"atoms", atoms.atoms.size()}});

  bool hom = true, excl = true, one_atom = true;
  std::vector<std::size_t> minimal;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].is_zero()) continue;
    bool min = true;
    for (const auto& q : d)
      if (!q.is_zero() && q != d[i] && leq(q, d[i])) min = false;
    if (min) minimal.push_back(i);
  }
  for (const auto& a : atoms.atoms) {
    if (bub_valuation(a, Subspace::whole(a.ambient_dim())) != 1 || bub_valuation(a, Subspace::zero(a.ambient_dim())) != 0)
      hom = false;
    for (const auto& p : d) {
      if (leq(a, p) == leq(a, ortho(p))) excl = false;
      for (const auto& q : d)
        if (bub_valuation(a, meet(p, q)) != bub_valuation(a, p) * bub_valuation(a, q) ||
            bub_valuation(a, join(p, q)) != std::max(bub_valuation(a, p), bub_valuation(a, q)))
          hom = false;
    }
    std::size_t ones = 0;
    for (std::size_t i : minimal) ones += bub_valuation(a, d[i]);
    if (ones != 1) one_atom = false;
  }
  rows.add("bub-homomorphism", scope, hom && one_atom, "two-valued lattice homomorphism on the determinate sublattice",
           {{"atom_choices", atoms.atoms.size()}, {"pairs", d.size() * d.size()}, {"minimal_elements", minimal.size()}});
  rows.add("bub-exclusive", scope, excl, "exactly one of e_r <= P, e_r <= P-perp");
}

void check_run(const Analysis& an, std::size_t run, Rows& rows) {
  const Scenario& sc = an.scenario();
  const RunSpec& spec = sc.runs[run];
  const std::string scope = "run:" + spec.name;
  const PlainSite& site = an.plain_site(spec.observable);
  const PropositionUniverse& u = an.plain_universe(spec.observable);
  const FiniteCategory& cat = site.category;
  const Subspace& r = site.observable.eigenspaces()[spec.eigenspace];
  const std::size_t e = *site.object_index(sc.states[spec.state].space);

  check_bub(an, run, scope, rows);

  Presheaf l = proposition_presheaf(cat, u);
  GlobalElement sigma = atom_section(u, object_rays(site), r);
  auto nat = naturality_violation(l, sigma);
  rows.add("global-element-naturality", scope, !nat, nat.value_or("F(e_r) = (Fe)_r along every arrow"));

  Subobject t = true_subobject(u, sigma);
  std::vector<std::string> tv;
  try {
    validate_subobject(l, t);
  } catch (const NotSubPresheaf& ex) {
    tv.push_back(ex.what());
  }
  auto fv = filter_check(u, t);
  tv.insert(tv.end(), fv.begin(), fv.end());
  rows.add("true-subobject-filter", scope, tv.empty(), first_or(tv, "sub-presheaf, up-closed and meet-closed at every stage"));

  bool pull = true, oracle = true, lower = true;
  std::size_t evaluations = 0;
  for (std::size_t o = 0; o < cat.num_objects(); ++o) {
    const Sieve top = top_sieve(cat, o);
    const Sieve bottom = bottom_annihilator(cat, u, o, sigma.value[o]);
    if (!is_sieve(cat, bottom)) lower = false;
    for (std::size_t p = 0; p < u.size(); ++p, ++evaluations) {
      Sieve chi = characteristic(l, t, o, p);
      Sieve val = valuation(cat, u, o, sigma.value[o], p);
      if (chi != val) oracle = false;
      if ((chi == top) != subobject_contains(t, o, p)) pull = false;
      if (!sieve_leq(bottom, val)) lower = false;
    }
  }
  rows.add("characteristic-oracle", scope, oracle, "characteristic sieve equals the valuation formula",
           {{"evaluations", evaluations}});
  rows.add("pullback", scope, pull, "T(e) = {P : chi_e(P) = top} at every stage");
  rows.add("annihilator-lower-bound", scope, lower, "annihilator is a sieve below every valuation");

  const std::size_t atom = sigma.value[e];
  bool bub_top = true;
  const Subspace& er = u.element(atom);
  std::size_t bub_ones = 0;
  if (!er.is_zero())
    for (const auto& p : an.determinate(run))
      if (bub_valuation(er, p) == 1) {
        ++bub_ones;
        if (valuation(cat, u, e, atom, u.id(p)) != top_sieve(cat, e)) bub_top = false;
      }
  rows.add("bub-implies-top", scope, bub_top, "bub value 1 forces the top sieve", {{"propositions", bub_ones}});

  PlainSite down = restrict_down(site, e);
  bool restr = true;
  GlobalElement dsigma = atom_section(u, object_rays(down), r);
  for (std::size_t o = 0; o < down.objects.size(); ++o)
    for (std::size_t p = 0; p < u.size(); ++p) {
      Sieve dv = valuation(down.category, u, o, dsigma.value[o], p);
      std::vector<std::size_t> mapped;
      for (std::size_t a : dv.arrows) mapped.push_back(down.arrow_origin[a]);
      std::sort(mapped.begin(), mapped.end());
      if (mapped != valuation(cat, u, down.object_origin[o], sigma.value[down.object_origin[o]], p).arrows)
        restr = false;
    }
  rows.add("restriction-equivalence", scope, restr, "valuations on the down-site equal those on the full site",
           {{"down_objects", down.objects.size()}, {"down_arrows", down.category.num_arrows()}});

  std::vector<std::size_t> all(u.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  ConditionReport cond;
  bool mono = true, excl = true, unit = true;
  std::vector<std::string> cv;
  for (std::size_t o = 0; o < cat.num_objects(); ++o) {
    ConditionReport c = condition_check(cat, u, o, sigma.value[o], all);
    mono = mono && c.monotone;
    excl = excl && c.exclusive;
    unit = unit && c.unit;
    cv.insert(cv.end(), c.violations.begin(), c.violations.end());
    if (o == e) cond = c;
  }
  rows.add("monotonicity", scope, mono, "P <= Q implies V(P) inside V(Q)", {{"pairs_per_stage", cond.pairs}});
  rows.add("exclusivity", scope, excl, "V(P ^ Q) below top and V(P) top imply V(Q) below top");
  rows.add("unit-proposition", scope, unit, "V(I) is top at every stage");

  std::optional<OmegaPresheaf> omega = omega_or_skip(cat, sc.caps.sieve_enum, scope, rows);
  ordered_json null_detail{{"null_value", sieve_json(cat, cond.null_value)},
                           {"annihilator", sieve_json(cat, cond.annihilator)},
                           {"omega_verdict", cond.null_fails_in_omega ? "fails" : "holds"},
                           {"delta_verdict", cond.null_is_delta_bottom ? "holds" : "fails"}};
  rows.add("null-proposition", scope, cond.null_value == cond.annihilator && cond.null_is_delta_bottom,
           cond.null_fails_in_omega ? "V({0}) is the annihilator, above the empty sieve; it is the restricted bottom"
                                    : "V({0}) is the empty sieve",
           null_detail);

  StageHeyting st = omega_at(cat, e, sc.caps.sieve_enum);
  if (!st.complete) {
    rows.skipped("delta-omega", scope, CapExceeded("sieve_enum", sc.caps.sieve_enum));
  } else {
    std::vector<Sieve> delta = delta_omega_at(st, cond.annihilator);
    bool ok = std::find(delta.begin(), delta.end(), st.top) != delta.end() && !delta.empty() &&
              delta.front() == cond.annihilator;
    bool chain = true;
    for (const Sieve& a : delta)
      for (const Sieve& b : delta) {
        for (const Sieve& c : {heyting_join(a, b), heyting_meet(a, b), heyting_implies(cat, a, b)})
          if (std::find(delta.begin(), delta.end(), c) == delta.end()) ok = false;
        if (!sieve_leq(a, b) && !sieve_leq(b, a)) chain = false;
      }
    // Bottoms differ exactly when the annihilator is nonempty.
    bool bottoms = (delta.front() != st.bottom) == !cond.annihilator.empty();
    ordered_json members = ordered_json::array();
    for (const Sieve& s : delta) members.push_back(sieve_json(cat, s));
    rows.add("delta-omega", scope, ok && bottoms, "sieves above the annihilator, closed under join, meet, implication",
             {{"size", delta.size()}, {"omega_size", st.sieves.size()}, {"chain", chain}, {"members", members}});
  }

  if (omega) {
    Subobject d = delta_omega(*omega, u, sigma);
    std::string stab = "restricted stages are stable under pullback";
    bool stable = true;
    try {
      validate_subobject(omega->presheaf, d);
    } catch (const NotSubPresheaf& ex) {
      stable = false;
      stab = ex.what();
    }
    rows.add("delta-omega-stability", scope, stable, stab);
    Subobject everything(cat.num_objects());
    for (std::size_t o = 0; o < cat.num_objects(); ++o) everything[o] = omega->presheaf.values(o);
    ClassifierAudit full = classifier_audit(l, t, *omega, everything);
    rows.add("classifier-omega", scope, full.ok(), first_or(full.violations, "ordinary classifier for T inside L"),
             {{"uniqueness", full.uniqueness_mode}, {"candidates", full.candidates}});
    if (stable) {
      ClassifierAudit semi = classifier_audit(l, t, *omega, d);
      rows.add("semiclassifier-delta", scope, semi.ok(),
               first_or(semi.violations, "factors through the restricted stages; pullback; unique"),
               {{"uniqueness", semi.uniqueness_mode}, {"candidates", semi.candidates}});
    }
  }
}

// ---------------------------------------------------------------------------
// Extended site

void check_extended(const Analysis& an, Rows& rows) {
  const ExtendedSite& x = an.extended();
  const Scenario& sc = an.scenario();
  const std::string scope = "extended";
  check_category(x.category, scope, rows, sc.caps.sieve_enum);

  bool inv = true;
  for (std::size_t a = 0; a < x.morphisms.size(); ++a) {
    const MorphismX& m = x.morphisms[a];
    const ExactMatrix& f = x.monoid.element(m.op);
    Subspace img = apply_operator(f, x.rays[m.dom_ray]);
    if (img.is_zero() || img != x.rays[m.cod_ray] || !x.rho_leq[m.dom_rho][m.cod_rho] ||
        !in_commutant(f, x.observables[m.dom_rho]) || x.atoms(m.cod_ray, m.dom_rho) != x.atoms(m.cod_ray, m.cod_rho))
      inv = false;
  }
  rows.add("extended-morphisms", scope, inv, "order, commutant, nonvanishing and atom conditions on every arrow",
           {{"objects", x.objects.size()}, {"arrows", x.category.num_arrows()}});

  bool embed = true;
  for (std::size_t k = 0; k < x.observables.size(); ++k) {
    const PlainSite& viaext = an.bridge(k).plain();
    OperatorMonoid sub = x.monoid.submonoid([&](const ExactMatrix& f) { return in_commutant(f, x.observables[k]); });
    PlainSite direct = build_plain_site(x.observables[k], sub, x.rays, sc.caps.orbit);
    if (direct.objects != viaext.objects) {
      embed = false;
      continue;
    }
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> a1, a2;
    for (const Arrow& a : viaext.category.arrows()) a1.insert({a.dom, a.op, a.cod});
    for (const Arrow& a : direct.category.arrows()) a2.insert({a.dom, *x.monoid.index_of(sub.element(a.op)), a.cod});
    if (a1 != a2) embed = false;
  }
  rows.add("rho-embedding", scope, embed, "same-observable arrows form the plain site of that observable");

  bool reach = true;
  std::size_t tested = 0;
  for (std::size_t o = 0; o < x.objects.size(); ++o)
    for (std::size_t k = 0; k < x.observables.size(); ++k) {
      if (!x.rho_leq[x.objects[o].rho][k]) continue;
      bool has_projectors = true;
      for (const auto& p : x.observables[k].projectors())
        if (!x.monoid.index_of(p)) has_projectors = false;
      if (!has_projectors) continue;
      ++tested;
      bool found = false;
      for (std::size_t a : x.category.out(o))
        if (x.objects[x.category.arrow(a).cod].rho == k) found = true;
      if (!found) reach = false;
    }
  rows.add("rho-reachability", scope, reach, "every object reaches each finer observable", {{"pairs", tested}});

  bool b1 = true, b2 = true;
  std::size_t chains = 0;
  const std::size_t nr = x.observables.size();
  auto subset = [](const std::vector<Subspace>& a, const std::vector<Subspace>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  for (std::size_t ray = 0; ray < x.rays.size(); ++ray)
    for (std::size_t a = 0; a < nr; ++a)
      for (std::size_t c = 0; c < nr; ++c) {
        if (!x.rho_leq[a][c]) continue;
        auto aa = x.atoms(ray, a), ac = x.atoms(ray, c);
        if (subset(aa, ac) && aa != ac) b1 = false;
        for (std::size_t b = 0; b < nr; ++b) {
          if (!x.rho_leq[a][b] || !x.rho_leq[b][c]) continue;
          ++chains;
          auto ab = x.atoms(ray, b);
          if (subset(aa, ac) && !(subset(aa, ab) && subset(ab, ac))) b2 = false;
        }
      }
  rows.add("atom-set-equality", scope, b1, "atom-set inclusion along rho <= rho' is equality");
  rows.add("atom-set-interpolation", scope, b2, "inclusion passes through every intermediate observable",
           {{"chains", chains}});

  std::optional<OmegaPresheaf> omega = omega_or_skip(x.category, sc.caps.sieve_enum, scope, rows);

  struct Flag {
    const char* tag;
    const char* note;
    bool StageBridgeAudit::*field;
  };
  const Flag flags[] = {
      {"flat-sharp-identity", "flat after sharp is the identity on plain sieves", &StageBridgeAudit::flat_sharp_identity},
      {"natural-below-identity", "natural map is deflationary", &StageBridgeAudit::natural_below_identity},
      {"natural-idempotent", "natural map is idempotent", &StageBridgeAudit::natural_idempotent},
      {"fixpoints-image", "natural sieves are exactly the image of the natural map", &StageBridgeAudit::fixpoints_are_image},
      {"flat-sharp-lattice", "flat and sharp preserve join, meet, top, bottom", &StageBridgeAudit::lattice_homomorphisms},
      {"implication-inequality", "f(S1 => S2) <= f(S1) => f(S2) and monotonicity", &StageBridgeAudit::order_and_implication},
      {"sharp-oracle", "closed-form sharp equals the intersection of containing sieves", &StageBridgeAudit::sharp_matches_oracle},
      {"heyting-isomorphism", "flat is a Heyting isomorphism from natural sieves onto the plain stage",
       &StageBridgeAudit::heyting_isomorphism},
      {"natural-closure", "natural sieves contain the same-observable arrow of each member", &StageBridgeAudit::natural_closure},
  };
  std::vector<StageBridgeAudit> audits;
  ordered_json stages = ordered_json::array();
  bool complete = true;
  std::size_t strict = 0, closure_failures = 0;
  for (std::size_t o = 0; o < x.objects.size(); ++o) {
    audits.push_back(audit_stage(an.bridge(x.objects[o].rho), x.objects[o].ray, sc.caps.sieve_enum));
    const StageBridgeAudit& a = audits.back();
    complete = complete && a.complete;
    strict += a.strict_implication_pairs;
    closure_failures += a.implication_closure_failures;
    stages.push_back({{"object", o},
                      {"ray", x.objects[o].ray},
                      {"observable", x.observables[x.objects[o].rho].name()},
                      {"plain_sieves", a.plain_sieves},
                      {"extended_sieves", a.extended_sieves},
                      {"natural_sieves", a.natural_sieves}});
  }
  for (const Flag& f : flags) {
    std::vector<std::string> bad;
    for (std::size_t o = 0; o < audits.size(); ++o)
      if (!(audits[o].*f.field)) bad.push_back("object " + std::to_string(o) + ": " + first_or(audits[o].violations, ""));
    ordered_json detail = nullptr;
    if (std::string(f.tag) == "heyting-isomorphism")
      detail = {{"stages", stages}, {"strict_implication_pairs", strict}, {"implication_closure_failures", closure_failures}};
    rows.add(f.tag, scope, bad.empty(), first_or(bad, f.note), detail, !complete);
  }

  if (!omega) return;
  Subobject nat = natural_omega(*omega, an.bridges());
  bool same = true;
  for (std::size_t o = 0; o < x.objects.size(); ++o)
    for (std::size_t i = 0; i < omega->stages[o].sieves.size(); ++i) {
      const Sieve& s = omega->stages[o].sieves[i];
      if ((natural_by_restriction(x, s) == s) != subobject_contains(nat, o, i)) same = false;
    }
  std::string stab = "pullback of a natural sieve is natural";
  bool stable = same;
  if (!same) stab = "bridge and in-site natural maps disagree";
  try {
    validate_subobject(omega->presheaf, nat);
  } catch (const NotSubPresheaf& ex) {
    stable = false;
    stab = ex.what();
  }
  rows.add("natural-omega-stability", scope, stable, stab);

  Presheaf l = proposition_presheaf(x.category, an.universe());
  for (std::size_t i = 0; i < sc.subobjects.size(); ++i) {
    const SubobjectSpec& spec = sc.subobjects[i];
    const Subobject& n = an.declared_subobjects()[i];
    const std::string sscope = "subobject:" + spec.name;
    bool agree = true, projective = true;
    std::optional<std::pair<std::size_t, std::size_t>> witness;
    std::size_t pairs = 0;
    for (std::size_t o = 0; o < x.objects.size(); ++o)
      for (std::size_t p = 0; p < an.universe().size(); ++p, ++pairs) {
        ProjectivityVerdict v = projectivity_at(l, n, x, o, p);
        if (!v.agree()) agree = false;
        if (!v.projective && !witness) witness = {*v.witness, p};
        projective = projective && v.projective;
      }
    rows.add("projectivity-detectors-agree", sscope, agree, "arrow-condition detector and naturality detector agree",
             {{"pairs", pairs}});
    ordered_json detail{{"projective", projective}};
    if (witness) {
      const MorphismX& m = x.morphisms[witness->first];
      detail["witness"] = {{"arrow", witness->first},
                           {"operator", m.op},
                           {"from", {m.dom_ray, x.observables[m.dom_rho].name()}},
                           {"to", {m.cod_ray, x.observables[m.cod_rho].name()}},
                           {"proposition", an.universe().element(witness->second).to_string()}};
    }
    bool expected = spec.expect_projective.value_or(true);
    rows.add("projectivity", sscope, projective == expected,
             projective ? "projective" : "not projective: membership along a finer arrow without the same-observable arrow",
             detail);
    if (projective) {
      ClassifierAudit audit = classifier_audit(l, n, *omega, nat);
      rows.add("semiclassifier-natural", sscope, audit.ok(), first_or(audit.violations, "classified by natural sieves"),
               {{"uniqueness", audit.uniqueness_mode}, {"candidates", audit.candidates}});
    }
  }
}

void check_extended_run(const Analysis& an, std::size_t run, std::size_t rho, Rows& rows) {
  const Scenario& sc = an.scenario();
  const RunSpec& spec = sc.runs[run];
  const std::string scope = "run:" + spec.name;
  const ExtendedSite& x = an.extended();
  const PropositionUniverse& u = an.universe();
  const Subspace& r = x.observables[rho].eigenspaces()[spec.eigenspace];
  const std::size_t ray = *x.ray_index(sc.states[spec.state].space);
  const std::size_t root = *x.object_index(ray, rho);

  ExtendedSite down = restrict_down_extended(x, root);
  Presheaf l = proposition_presheaf(down.category, u);
  GlobalElement sigma = atom_section(u, object_rays(down), r);
  auto nat = naturality_violation(l, sigma);
  rows.add("extended-global-element", scope, !nat, nat.value_or("section is natural on the down-site"),
           {{"down_objects", down.objects.size()}, {"down_arrows", down.category.num_arrows()}});
  Subobject t = true_subobject(u, sigma);
  std::vector<std::string> tv;
  try {
    validate_subobject(l, t);
  } catch (const NotSubPresheaf& ex) {
    tv.push_back(ex.what());
  }
  auto fv = filter_check(u, t);
  tv.insert(tv.end(), fv.begin(), fv.end());
  rows.add("extended-true-subobject", scope, tv.empty(), first_or(tv, "sub-presheaf and filter at every stage"));

  bool oracle = true;
  for (std::size_t o = 0; o < down.objects.size(); ++o)
    for (std::size_t p = 0; p < u.size(); ++p)
      if (characteristic(l, t, o, p) != valuation(down.category, u, o, sigma.value[o], p)) oracle = false;
  std::size_t droot = 0;
  while (down.object_origin[droot] != root) ++droot;
  for (std::size_t p = 0; p < u.size(); ++p) {
    std::vector<std::size_t> mapped;
    for (std::size_t a : valuation(down.category, u, droot, sigma.value[droot], p).arrows)
      mapped.push_back(down.arrow_origin[a]);
    std::sort(mapped.begin(), mapped.end());
    if (mapped != valuation(x.category, u, root, sigma.value[droot], p).arrows) oracle = false;
  }
  rows.add("extended-characteristic-oracle", scope, oracle,
           "characteristic sieve equals the valuation formula; down-site agrees with the full site");

  bool agree = true, projective = true;
  for (std::size_t o = 0; o < down.objects.size(); ++o)
    for (std::size_t p = 0; p < u.size(); ++p) {
      ProjectivityVerdict v = projectivity_at(l, t, down, o, p);
      agree = agree && v.agree();
      projective = projective && v.projective;
    }
  rows.add("extended-projectivity", scope, agree && projective, "true subobject is projective; both detectors agree");

  try {
    OmegaPresheaf omega = build_omega(down.category, sc.caps.sieve_enum);
    Subobject natural(down.objects.size());
    for (std::size_t o = 0; o < down.objects.size(); ++o)
      for (std::size_t i = 0; i < omega.stages[o].sieves.size(); ++i)
        if (natural_by_restriction(down, omega.stages[o].sieves[i]) == omega.stages[o].sieves[i])
          natural[o].push_back(i);
    ClassifierAudit audit = classifier_audit(l, t, omega, natural);
    rows.add("semiclassifier-natural", scope, audit.ok(),
             first_or(audit.violations, "natural characteristic map; pullback of natural top; unique"),
             {{"uniqueness", audit.uniqueness_mode}, {"candidates", audit.candidates}});
  } catch (const CapExceeded& e) {
    rows.skipped("semiclassifier-natural", scope, e);
  }

  std::vector<std::size_t> all(u.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto eq = equivalence_check(an.bridge(rho), u, ray, r, all);
  std::size_t outer = 0, left = 0, right = 0;
  for (const auto& row : eq) {
    outer += row.outer;
    left += row.left;
    right += row.right;
  }
  bool ok = outer == eq.size() && left == eq.size() && right == eq.size();
  rows.add("equivalence", scope, ok, "flat of extended value, flat of its natural image, sharp of plain value all agree",
           {{"propositions", eq.size()}, {"outer", outer}, {"left", left}, {"right", right}});
}

}  // namespace

ordered_json run_check(const Analysis& an) {
  Rows rows;
  check_arithmetic(an, rows);
  check_lattice(an, rows);
  check_projection_and_order(an, rows);
  for (const auto& [obs, site] : an.plain_sites()) check_plain_site(an, obs, rows);
  for (std::size_t i = 0; i < an.scenario().runs.size(); ++i) check_run(an, i, rows);
  if (an.has_extended()) {
    check_extended(an, rows);
    for (std::size_t i = 0; i < an.scenario().runs.size(); ++i)
      if (auto rho = an.extended_rho(an.scenario().runs[i].observable)) check_extended_run(an, i, *rho, rows);
  }

  ordered_json report;
  report["scenario"] = an.scenario().name;
  report["truncation"] = describe(an);
  report["rows"] = rows.take();
  std::size_t pass = 0, fail = 0, degraded = 0;
  for (const auto& row : report["rows"]) {
    const auto& s = row["status"].get_ref<const std::string&>();
    if (s == "pass") ++pass;
    else if (s == "fail") ++fail;
    else ++degraded;
  }
  report["summary"] = {{"rows", pass + fail + degraded}, {"pass", pass}, {"fail", fail}, {"degraded", degraded}};
  return report;
}

}  // namespace qtopos
