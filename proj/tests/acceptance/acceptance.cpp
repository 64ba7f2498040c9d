// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "qtopos/analysis.hpp"
#include "qtopos/error.hpp"

using namespace qtopos;

namespace {

const std::string kRoot = QTOPOS_SOURCE_DIR;
const std::vector<std::string> kBundled = {"qubit", "qutrit", "qubit_extended", "qutrit_extended"};

std::unique_ptr<Analysis> open(const std::string& path) {
  return std::make_unique<Analysis>(load_scenario(kRoot + "/" + path));
}
std::unique_ptr<Analysis> bundled(const std::string& name) { return open("scenarios/" + name + ".json"); }

struct Outcome {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note.str("");
      note << what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<std::size_t> all_ids(const PropositionUniverse& u) {
  std::vector<std::size_t> v(u.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

struct RunView {
  const PlainSite& site;
  const PropositionUniverse& u;
  GlobalElement sigma;
  std::size_t e;
};

RunView view(const Analysis& an, std::size_t run) {
  const Scenario& sc = an.scenario();
  const RunSpec& spec = sc.runs[run];
  const PlainSite& site = an.plain_site(spec.observable);
  const PropositionUniverse& u = an.plain_universe(spec.observable);
  GlobalElement sigma = atom_section(u, object_rays(site), site.observable.eigenspaces()[spec.eigenspace]);
  return {site, u, std::move(sigma), *site.object_index(sc.states[spec.state].space)};
}

void bub_layer(Outcome& out) {
  auto t0 = Clock::now();
  auto an = bundled("qutrit");
  std::size_t pairs = 0;
  for (std::size_t run = 0; run < an->scenario().runs.size(); ++run) {
    const auto& d = an->determinate(run);
    out.require(d.size() == 8, "determinate sublattice has " + std::to_string(d.size()) + " elements");
    for (const Subspace& atom : an->atoms(run).atoms)
      for (const Subspace& p : d)
        for (const Subspace& q : d) {
          ++pairs;
          out.require(bub_valuation(atom, meet(p, q)) == bub_valuation(atom, p) * bub_valuation(atom, q), "meet");
          out.require(bub_valuation(atom, join(p, q)) == std::max(bub_valuation(atom, p), bub_valuation(atom, q)),
                      "join");
          out.require(bub_valuation(atom, ortho(p)) == 1 - bub_valuation(atom, p), "ortho");
        }
  }
  double s = seconds_since(t0);
  out.require(s < 1.0, "took " + std::to_string(s) + " s");
  if (out.ok) out.note << "|D| = 8 for both runs, " << pairs << " (atom, P, Q) triples, " << s << " s";
}

void sieve_census(Outcome& out) {
  auto t0 = Clock::now();
  auto an = bundled("qubit");
  RunView v = view(*an, *an->run_index("plus-up"));
  const FiniteCategory& c = v.site.category;
  StageHeyting st = omega_at(c, v.e, 4096);
  out.require(st.complete && st.sieves.size() == 5, "Omega(e) has " + std::to_string(st.sieves.size()) + " sieves");
  Sieve bottom = bottom_annihilator(c, v.u, v.e, v.sigma.value[v.e]);
  auto delta = delta_omega_at(st, bottom);
  out.require(delta.size() == 3, "restricted stage has " + std::to_string(delta.size()) + " sieves");
  for (const Sieve& a : delta)
    for (const Sieve& b : delta) out.require(sieve_leq(a, b) || sieve_leq(b, a), "restricted stage is not a chain");
  const ExactMatrix pi2{{0, 0}, {0, 1}};
  out.require(bottom.size() == 1 && v.site.monoid.element(c.arrow(bottom.arrows[0]).op) == pi2,
              "bottom is not {pi2}");
  out.require(!delta.empty() && delta.front() == bottom, "bottom of the restricted stage is not the annihilator");
  double s = seconds_since(t0);
  out.require(s < 1.0, "took " + std::to_string(s) + " s");
  if (out.ok) out.note << "|Omega(e)| = 5, restricted chain of 3 with bottom {pi2}, " << s << " s";
}

void conditions(Outcome& out) {
  std::size_t runs = 0, pairs = 0;
  for (const auto& name : kBundled) {
    auto an = bundled(name);
    ordered_json report = run_check(*an);
    for (std::size_t run = 0; run < an->scenario().runs.size(); ++run, ++runs) {
      RunView v = view(*an, run);
      const FiniteCategory& c = v.site.category;
      for (std::size_t o = 0; o < c.num_objects(); ++o) {
        ConditionReport r = condition_check(c, v.u, o, v.sigma.value[o], all_ids(v.u));
        pairs += r.pairs;
        const std::string where = name + "/" + an->scenario().runs[run].name + " stage " + std::to_string(o);
        out.require(r.monotone, where + ": monotonicity");
        out.require(r.exclusive, where + ": exclusivity");
        out.require(r.unit, where + ": unit proposition");
        out.require(r.null_value == r.annihilator, where + ": V({0}) is not the annihilator");
        out.require(r.null_is_delta_bottom, where + ": V({0}) is not the restricted bottom");
        if (o == v.e) {
          out.require(!r.annihilator.empty() && r.null_fails_in_omega, where + ": null proposition holds in Omega");
        }
      }
      const std::string scope = "run:" + an->scenario().runs[run].name;
      for (const auto& row : report["rows"])
        if (row["scope"] == scope && row["tag"] == "null-proposition") {
          out.require(row["status"] == "pass", name + " " + scope + ": null-proposition row");
          out.require(row["detail"]["omega_verdict"] == "fails", name + " " + scope + ": Omega verdict");
          out.require(row["detail"]["delta_verdict"] == "holds", name + " " + scope + ": restricted verdict");
        }
    }
  }
  if (out.ok) out.note << runs << " runs, " << pairs << " proposition pairs; null fails in Omega, holds restricted";
}

void oracle_equality(Outcome& out) {
  std::size_t evaluations = 0;
  for (const auto& name : kBundled) {
    auto an = bundled(name);
    for (std::size_t run = 0; run < an->scenario().runs.size(); ++run) {
      RunView v = view(*an, run);
      Presheaf l = proposition_presheaf(v.site.category, v.u);
      Subobject t = true_subobject(v.u, v.sigma);
      for (std::size_t o = 0; o < v.site.objects.size(); ++o)
        for (std::size_t p = 0; p < v.u.size(); ++p, ++evaluations)
          out.require(characteristic(l, t, o, p) == valuation(v.site.category, v.u, o, v.sigma.value[o], p),
                      name + ": plain stage " + std::to_string(o));
      auto rho = an->extended_rho(an->scenario().runs[run].observable);
      if (!rho) continue;
      const ExtendedSite& x = an->extended();
      const RunSpec& spec = an->scenario().runs[run];
      const std::size_t root = *x.object_index(*x.ray_index(an->scenario().states[spec.state].space), *rho);
      ExtendedSite down = restrict_down_extended(x, root);
      GlobalElement sg = atom_section(an->universe(), object_rays(down),
                                      x.observables[*rho].eigenspaces()[spec.eigenspace]);
      Presheaf xl = proposition_presheaf(down.category, an->universe());
      Subobject xt = true_subobject(an->universe(), sg);
      for (std::size_t o = 0; o < down.objects.size(); ++o)
        for (std::size_t p = 0; p < an->universe().size(); ++p, ++evaluations)
          out.require(characteristic(xl, xt, o, p) == valuation(down.category, an->universe(), o, sg.value[o], p),
                      name + ": extended stage " + std::to_string(o));
    }
  }
  if (out.ok) out.note << evaluations << " (stage, P) evaluations agree";
}

void restriction(Outcome& out) {
  std::size_t evaluations = 0;
  for (const auto& name : kBundled) {
    auto an = bundled(name);
    for (std::size_t run = 0; run < an->scenario().runs.size(); ++run) {
      RunView v = view(*an, run);
      PlainSite down = restrict_down(v.site, v.e);
      GlobalElement ds = atom_section(v.u, object_rays(down), v.site.observable.eigenspaces()[
                                                                  an->scenario().runs[run].eigenspace]);
      for (std::size_t o = 0; o < down.objects.size(); ++o)
        for (std::size_t p = 0; p < v.u.size(); ++p, ++evaluations) {
          std::vector<std::size_t> mapped;
          for (std::size_t a : valuation(down.category, v.u, o, ds.value[o], p).arrows)
            mapped.push_back(down.arrow_origin[a]);
          std::sort(mapped.begin(), mapped.end());
          const std::size_t full = down.object_origin[o];
          out.require(mapped == valuation(v.site.category, v.u, full, v.sigma.value[full], p).arrows,
                      name + ": down-site valuation differs");
        }
    }
  }
  if (out.ok) out.note << evaluations << " (stage, P) evaluations equal on the down-site";
}

void bridge_identities(Outcome& out) {
  auto t0 = Clock::now();
  auto an = bundled("qubit_extended");
  const ExtendedSite& x = an->extended();
  std::size_t sieves = 0, stages = 0;
  for (const ObjectX& o : x.objects) {
    StageBridgeAudit a = audit_stage(an->bridge(o.rho), o.ray, 4096);
    ++stages;
    sieves += a.extended_sieves;
    const std::string where = "object (" + std::to_string(o.ray) + ", " + x.observables[o.rho].name() + ")";
    out.require(a.complete, where + ": stage enumeration capped");
    out.require(a.flat_sharp_identity, where + ": flat . sharp != id");
    out.require(a.natural_below_identity && a.natural_idempotent, where + ": natural map not a deflationary projection");
    out.require(a.fixpoints_are_image, where + ": fixpoints differ from image");
    out.require(a.lattice_homomorphisms, where + ": flat/sharp lattice laws");
    out.require(a.heyting_isomorphism, where + ": flat is not a Heyting isomorphism");
    out.require(a.natural_sieves == a.plain_sieves, where + ": natural and plain stage sizes differ");
  }
  double s = seconds_since(t0);
  out.require(s < 10.0, "took " + std::to_string(s) + " s");
  if (out.ok) out.note << stages << " stages, " << sieves << " extended sieves, " << s << " s";
}

void projectivity(Outcome& out) {
  std::size_t pairs = 0, projective = 0, non_projective = 0;
  for (const std::string path : {"scenarios/qubit_extended.json", "scenarios/qutrit_extended.json",
                                 "tests/fixtures/non_projective.json"}) {
    auto an = open(path);
    const ExtendedSite& x = an->extended();
    Presheaf l = proposition_presheaf(x.category, an->universe());
    for (std::size_t i = 0; i < an->declared_subobjects().size(); ++i) {
      bool all = true;
      for (std::size_t o = 0; o < x.objects.size(); ++o)
        for (std::size_t p = 0; p < an->universe().size(); ++p, ++pairs) {
          ProjectivityVerdict v = projectivity_at(l, an->declared_subobjects()[i], x, o, p);
          out.require(v.agree(), path + ": detectors disagree for " + an->scenario().subobjects[i].name);
          out.require(v.projective || v.witness.has_value(), path + ": non-projective without witness");
          all = all && v.projective;
        }
      ++(all ? projective : non_projective);
    }
  }
  out.require(projective > 0 && non_projective > 0, "fixtures lack a projective or a non-projective subobject");
  if (out.ok)
    out.note << pairs << " (N, x) pairs agree; " << projective << " projective, " << non_projective
             << " non-projective subobjects";
}

void equivalence(Outcome& out) {
  std::size_t rows = 0;
  for (const std::string name : {"qubit_extended", "qutrit_extended"}) {
    auto an = bundled(name);
    const ExtendedSite& x = an->extended();
    for (const RunSpec& spec : an->scenario().runs) {
      auto rho = an->extended_rho(spec.observable);
      if (!rho) continue;
      const std::size_t ray = *x.ray_index(an->scenario().states[spec.state].space);
      const Bridge& b = an->bridge(*rho);
      for (const auto& r : equivalence_check(b, an->universe(), ray, x.observables[*rho].eigenspaces()[spec.eigenspace],
                                             all_ids(an->universe()))) {
        ++rows;
        out.require(b.flat(r.extended_value) == r.plain_value, name + "/" + spec.name + ": flat of extended value");
        out.require(b.sharp(r.plain_value) == b.natural(r.extended_value), name + "/" + spec.name + ": sharp of plain value");
        out.require(r.ok(), name + "/" + spec.name + ": equivalence row");
      }
    }
  }
  if (out.ok) out.note << rows << " propositions: flat(ext) = plain and sharp(plain) = natural(ext)";
}

void classifiers_and_atom_sets(Outcome& out) {
  const std::vector<std::string> tags{"semiclassifier-delta", "semiclassifier-natural", "atom-set-equality",
                                      "atom-set-interpolation", "natural-closure"};
  std::map<std::string, std::size_t> seen;
  std::size_t chains = 0;
  for (const auto& name : kBundled) {
    auto an = bundled(name);
    ordered_json report = run_check(*an);
    for (const auto& row : report["rows"]) {
      const std::string tag = row["tag"];
      if (std::find(tags.begin(), tags.end(), tag) == tags.end()) continue;
      ++seen[tag];
      out.require(row["status"] == "pass", name + " " + row["scope"].get<std::string>() + ": " + tag + " is " +
                                               row["status"].get<std::string>());
      if (tag == "atom-set-interpolation") chains += row["detail"]["chains"].get<std::size_t>();
    }
  }
  for (const auto& t : tags) out.require(seen[t] > 0, "no " + t + " rows");
  if (out.ok)
    out.note << seen["semiclassifier-delta"] << " restricted and " << seen["semiclassifier-natural"]
             << " natural classifier audits, " << chains << " observable chains, closure on every natural sieve";
}

void determinism(Outcome& out) {
  auto t0 = Clock::now();
  std::size_t rows = 0;
  for (const auto& name : kBundled) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      auto an = bundled(name);
      ordered_json report = run_check(*an);
      out.require(check_exit_code(report) == 0, name + ": check is not green");
      std::string text = report.dump(2);
      if (rep == 0) {
        first = text;
        rows += report["rows"].size();
      } else {
        out.require(text == first, name + ": reports differ between runs");
      }
    }
  }
  double s = seconds_since(t0);
  out.require(s < 60.0, "took " + std::to_string(s) + " s");
  if (out.ok) out.note << "4 scenarios, " << rows << " rows, green and byte-identical twice, " << s << " s";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"bub layer on the qutrit", bub_layer},
      {"sieve census on the qubit", sieve_census},
      {"valuation conditions and null proposition", conditions},
      {"characteristic map equals valuation", oracle_equality},
      {"down-site restriction equivalence", restriction},
      {"bridge identities on the extended qubit", bridge_identities},
      {"projectivity detectors agree", projectivity},
      {"plain/extended equivalence", equivalence},
      {"semi-classifiers, atom sets, closure", classifiers_and_atom_sets},
      {"determinism and run time", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.ok = false;
      out.note.str("");
      out.note << "exception: " << e.what();
    }
    failed += !out.ok;
    std::cout << (out.ok ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first << ": " << out.note.str()
              << "\n";
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
