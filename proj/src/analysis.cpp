#include "qtopos/analysis.hpp"

#include <algorithm>
#include <set>

#include "qtopos/error.hpp"

namespace qtopos {

Analysis::Analysis(Scenario scenario) : scenario_(std::move(scenario)) {
  const Scenario& sc = scenario_;
  const std::size_t n = sc.dimension;
  std::vector<ExactMatrix> gens;
  for (const auto& g : sc.generators) gens.push_back(g.matrix);
  monoid_ = close_monoid(gens, n, sc.caps.monoid);

  std::vector<Subspace> seeds;
  for (const auto& s : sc.states) seeds.push_back(s.space);

  for (const RunSpec& run : sc.runs) {
    if (plain_.count(run.observable)) continue;
    const Observable& r = sc.observables[run.observable];
    OperatorMonoid sub = monoid_.submonoid([&](const ExactMatrix& f) { return in_commutant(f, r); });
    plain_.emplace(run.observable, build_plain_site(r, sub, seeds, sc.caps.orbit));
  }

  if (!sc.extended.empty()) {
    std::vector<Observable> obs;
    for (std::size_t k : sc.extended) obs.push_back(sc.observables[k]);
    extended_ = std::make_unique<ExtendedSite>(build_extended_site(obs, monoid_, seeds, sc.caps.orbit));
    bridges_.reserve(obs.size());
    for (std::size_t k = 0; k < obs.size(); ++k) bridges_.emplace_back(*extended_, k);
  }

  std::vector<Subspace> props;
  for (const auto& p : sc.propositions) props.push_back(p.space);
  for (const auto& s : sc.states) props.push_back(s.space);
  for (std::size_t i = 0; i < sc.runs.size(); ++i) {
    const RunSpec& run = sc.runs[i];
    atoms_.push_back(compute_atoms(Ray(sc.states[run.state].space), sc.observables[run.observable]));
    determinate_.push_back(
        anchored_determinate(atoms_.back(), sc.caps.lattice, run.remainder_rays, "/runs/" + std::to_string(i)));
    props.insert(props.end(), determinate_.back().begin(), determinate_.back().end());
  }
  std::vector<Subspace> rays;
  for (const auto& [obs, site] : plain_) rays.insert(rays.end(), site.objects.begin(), site.objects.end());
  if (extended_) rays.insert(rays.end(), extended_->rays.begin(), extended_->rays.end());
  for (const auto& ray : rays)
    for (const auto& o : sc.observables)
      for (const auto& es : o.eigenspaces()) props.push_back(project_onto_eigenspace(ray, es));
  for (const auto& spec : sc.subobjects)
    if (spec.ray) props.push_back(*spec.ray);
  universe_ = PropositionUniverse(monoid_, props, sc.caps.lattice);
  for (const auto& [obs, site] : plain_) plain_universe_.emplace(obs, universe_.for_monoid(site.monoid));

  if (extended_) {
    Presheaf l = proposition_presheaf(extended_->category, universe_);
    for (std::size_t i = 0; i < sc.subobjects.size(); ++i) {
      const SubobjectSpec& spec = sc.subobjects[i];
      Subobject nsub(extended_->objects.size());
      for (std::size_t o = 0; o < nsub.size(); ++o) {
        const std::string& rule = spec.rules[extended_->objects[o].rho];
        for (std::size_t p = 0; p < universe_.size(); ++p) {
          bool keep = rule == "all";
          if (rule == "zero") keep = p == universe_.zero_id();
          if (rule == "contains_ray") keep = universe_.leq(universe_.id(*spec.ray), p);
          if (keep) nsub[o].push_back(p);
        }
      }
      try {
        validate_subobject(l, nsub);
      } catch (const NotSubPresheaf& e) {
        throw ValidationError("/subobjects/" + std::to_string(i), std::string("not a sub-presheaf: ") + e.what());
      }
      subobjects_.push_back(std::move(nsub));
    }
  }
}

std::vector<Subspace> Analysis::anchored_determinate(const TrueAtomSet& atoms, std::size_t cap,
                                                     const std::vector<Subspace>& extra, const std::string& path) {
  try {
    return enumerate_determinate_sublattice(atoms, cap, extra);
  } catch (const ValidationError& e) {
    throw ValidationError(path + "/remainder_rays", e.what());
  }
}

std::optional<std::size_t> Analysis::extended_rho(std::size_t observable) const {
  for (std::size_t k = 0; k < scenario_.extended.size(); ++k)
    if (scenario_.extended[k] == observable) return k;
  return std::nullopt;
}

std::vector<std::size_t> Analysis::run_propositions(std::size_t run) const {
  std::vector<std::size_t> out{universe_.zero_id(), universe_.whole_id()};
  const RunSpec& spec = scenario_.runs.at(run);
  std::vector<std::size_t> chosen = spec.propositions;
  if (chosen.empty())
    for (std::size_t i = 0; i < scenario_.propositions.size(); ++i) chosen.push_back(i);
  for (std::size_t i : chosen) out.push_back(universe_.id(scenario_.propositions[i].space));
  return out;
}

std::optional<std::size_t> Analysis::run_index(const std::string& name) const {
  for (std::size_t i = 0; i < scenario_.runs.size(); ++i)
    if (scenario_.runs[i].name == name) return i;
  return std::nullopt;
}

int check_exit_code(const ordered_json& report) {
  return report.at("summary").at("fail").get<std::size_t>() == 0 ? 0 : 1;
}

}  // namespace qtopos
