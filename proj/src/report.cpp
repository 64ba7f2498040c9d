#include <set>
#include <sstream>

#include "qtopos/analysis.hpp"
#include "qtopos/error.hpp"

namespace qtopos {

namespace {

ordered_json arrows_json(const FiniteCategory& cat, const Sieve& s) {
  ordered_json out = ordered_json::array();
  for (std::size_t a : s.arrows) out.push_back({cat.arrow(a).op, cat.arrow(a).cod});
  return out;
}

ordered_json category_json(const FiniteCategory& cat) {
  ordered_json arrows = ordered_json::array();
  for (const Arrow& a : cat.arrows()) arrows.push_back({{"dom", a.dom}, {"op", a.op}, {"cod", a.cod}});
  return arrows;
}

ordered_json monoid_json(const OperatorMonoid& m) {
  ordered_json elements = ordered_json::array();
  for (const auto& e : m.elements()) elements.push_back(e.key());
  return {{"size", m.size()}, {"elements", elements}, {"product", m.product_table()}};
}

}  // namespace

ordered_json describe(const Analysis& an) {
  const Scenario& sc = an.scenario();
  ordered_json out;
  out["dimension"] = sc.dimension;
  out["caps"] = {{"monoid", sc.caps.monoid},
                 {"orbit", sc.caps.orbit},
                 {"sieve_enum", sc.caps.sieve_enum},
                 {"lattice", sc.caps.lattice}};
  out["monoid_size"] = an.monoid().size();
  out["universe_size"] = an.universe().size();
  ordered_json sites = ordered_json::object();
  for (const auto& [obs, site] : an.plain_sites())
    sites[site.observable.name()] = {{"monoid", site.monoid.size()},
                                     {"objects", site.objects.size()},
                                     {"arrows", site.category.num_arrows()}};
  out["plain_sites"] = sites;
  if (an.has_extended()) {
    const ExtendedSite& x = an.extended();
    ordered_json names = ordered_json::array();
    for (const auto& o : x.observables) names.push_back(o.name());
    out["extended"] = {{"observables", names},
                       {"rays", x.rays.size()},
                       {"objects", x.objects.size()},
                       {"arrows", x.category.num_arrows()}};
  }
  return out;
}

ordered_json run_valuate(const Analysis& an, const std::string& name) {
  auto idx = an.run_index(name);
  if (!idx) throw UnknownObject("run '" + name + "'");
  const Scenario& sc = an.scenario();
  const RunSpec& spec = sc.runs[*idx];
  const PlainSite& site = an.plain_site(spec.observable);
  const PropositionUniverse& u = an.plain_universe(spec.observable);
  const FiniteCategory& cat = site.category;
  const Subspace& r = site.observable.eigenspaces()[spec.eigenspace];
  const std::size_t e = *site.object_index(sc.states[spec.state].space);
  GlobalElement sigma = atom_section(u, object_rays(site), r);
  const std::size_t atom = sigma.value[e];
  const Sieve annihilator = bottom_annihilator(cat, u, e, atom);
  const Sieve top = top_sieve(cat, e);

  std::set<std::string> determinate;
  for (const auto& p : an.determinate(*idx)) determinate.insert(p.key());

  std::optional<std::size_t> rho = an.extended_rho(spec.observable);
  std::size_t ext_object = 0;
  std::vector<std::size_t> ext_sigma;
  if (rho) {
    const ExtendedSite& x = an.extended();
    ext_object = *x.object_index(*x.ray_index(sc.states[spec.state].space), *rho);
    ext_sigma = atom_section(an.universe(), object_rays(x), r).value;
  }

  ordered_json props = ordered_json::array();
  std::vector<std::string> names{"zero", "identity"};
  std::vector<std::size_t> chosen = spec.propositions;
  if (chosen.empty())
    for (std::size_t i = 0; i < sc.propositions.size(); ++i) chosen.push_back(i);
  for (std::size_t i : chosen) names.push_back(sc.propositions[i].name);
  std::vector<std::size_t> ids = an.run_propositions(*idx);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const Subspace& p = an.universe().element(ids[k]);
    const std::size_t pid = u.id(p);
    Sieve v = valuation(cat, u, e, atom, pid);
    ordered_json row;
    row["name"] = names[k];
    row["subspace"] = p.to_string();
    const bool in_d = determinate.count(p.key()) > 0;
    row["determinate"] = in_d;
    row["bub"] = in_d && !u.element(atom).is_zero() ? ordered_json(bub_valuation(u.element(atom), p)) : nullptr;
    row["sieve"] = arrows_json(cat, v);
    row["is_top"] = v == top;
    row["is_annihilator"] = v == annihilator;
    row["in_delta_omega"] = sieve_leq(annihilator, v);
    if (rho) {
      const Bridge& b = an.bridge(*rho);
      const ExtendedSite& x = an.extended();
      Sieve xv = valuation(x.category, an.universe(), ext_object, ext_sigma[ext_object], ids[k]);
      Sieve nat = b.natural(xv);
      row["extended"] = {{"sieve", arrows_json(x.category, xv)},
                         {"natural", nat == xv},
                         {"flat", arrows_json(b.plain().category, b.flat(xv))}};
    }
    props.push_back(std::move(row));
  }

  ordered_json out;
  out["scenario"] = sc.name;
  out["run"] = spec.name;
  out["state"] = sc.states[spec.state].name;
  out["observable"] = site.observable.name();
  out["eigenspace"] = spec.eigenspace;
  out["true_atom"] = u.element(atom).to_string();
  out["annihilator"] = arrows_json(cat, annihilator);
  out["determinate_size"] = an.determinate(*idx).size();
  out["propositions"] = props;
  out["truncation"] = describe(an);
  return out;
}

ordered_json dump_site(const Analysis& an) {
  ordered_json out;
  out["scenario"] = an.scenario().name;
  out["monoid"] = monoid_json(an.monoid());
  ordered_json plain = ordered_json::array();
  for (const auto& [obs, site] : an.plain_sites()) {
    ordered_json objects = ordered_json::array();
    for (const auto& o : site.objects) objects.push_back(o.to_string());
    ordered_json ops = ordered_json::array();
    for (const auto& f : site.monoid.elements()) ops.push_back(*an.monoid().index_of(f));
    plain.push_back({{"observable", site.observable.name()},
                     {"operators", ops},
                     {"objects", objects},
                     {"arrows", category_json(site.category)}});
  }
  out["plain_sites"] = plain;
  if (an.has_extended()) {
    const ExtendedSite& x = an.extended();
    ordered_json rays = ordered_json::array();
    for (const auto& r : x.rays) rays.push_back(r.to_string());
    ordered_json objects = ordered_json::array();
    for (const auto& o : x.objects) objects.push_back({o.ray, x.observables[o.rho].name()});
    out["extended"] = {{"rays", rays}, {"objects", objects}, {"arrows", category_json(x.category)}};
  }
  return out;
}

std::string render_check_text(const ordered_json& report) {
  std::ostringstream os;
  os << "scenario " << report["scenario"].get<std::string>() << "\n";
  for (const auto& row : report["rows"]) {
    const auto& status = row["status"].get_ref<const std::string&>();
    std::string mark = status == "pass" ? "PASS" : status == "fail" ? "FAIL" : "DEGR";
    os << mark << "  " << row["scope"].get<std::string>() << "  " << row["tag"].get<std::string>() << "  "
       << row["note"].get<std::string>() << "\n";
    if (status == "fail" && row.contains("detail") && row["detail"].contains("witness"))
      os << "      witness " << row["detail"]["witness"].dump() << "\n";
  }
  const auto& s = report["summary"];
  os << s["rows"].get<std::size_t>() << " rows: " << s["pass"].get<std::size_t>() << " pass, "
     << s["fail"].get<std::size_t>() << " fail, " << s["degraded"].get<std::size_t>() << " degraded\n";
  return os.str();
}

std::string render_valuate_text(const ordered_json& report) {
  std::ostringstream os;
  os << "run " << report["run"].get<std::string>() << "  state " << report["state"].get<std::string>()
     << "  observable " << report["observable"].get<std::string>() << "\n";
  os << "true atom " << report["true_atom"].get<std::string>() << "\n";
  os << "annihilator " << report["annihilator"].dump() << "\n";
  for (const auto& p : report["propositions"]) {
    os << "  " << p["name"].get<std::string>() << " " << p["subspace"].get<std::string>() << "\n";
    os << "    sieve " << p["sieve"].dump();
    if (p["is_top"].get<bool>()) os << " (top)";
    if (p["is_annihilator"].get<bool>()) os << " (annihilator)";
    os << "\n    bub " << (p["bub"].is_null() ? std::string("-") : p["bub"].dump()) << "\n";
    if (p.contains("extended"))
      os << "    extended " << p["extended"]["sieve"].dump() << " natural "
         << (p["extended"]["natural"].get<bool>() ? "yes" : "no") << "\n";
  }
  return os.str();
}

}  // namespace qtopos
