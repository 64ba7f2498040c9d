#include "qtopos/site.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "qtopos/error.hpp"

namespace qtopos {

std::optional<std::size_t> OperatorMonoid::index_of(const ExactMatrix& m) const {
  auto it = index_.find(m.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void OperatorMonoid::build_table() {
  index_.clear();
  for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i].key(), i);
  product_.assign(elements_.size(), std::vector<std::size_t>(elements_.size()));
  for (std::size_t a = 0; a < elements_.size(); ++a)
    for (std::size_t b = 0; b < elements_.size(); ++b) {
      auto idx = index_of(mat_mul(elements_[a], elements_[b]));
      if (!idx) throw InconsistentSite("operator set is not closed under multiplication");
      product_[a][b] = *idx;
    }
}

OperatorMonoid OperatorMonoid::submonoid(const std::function<bool(const ExactMatrix&)>& keep) const {
  OperatorMonoid out;
  out.dim_ = dim_;
  std::vector<std::size_t> remap(elements_.size(), SIZE_MAX);
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (keep(elements_[i])) {
      remap[i] = out.elements_.size();
      out.elements_.push_back(elements_[i]);
    }
  if (out.elements_.empty() || out.elements_.front() != ExactMatrix::identity(dim_))
    throw InconsistentSite("submonoid does not contain the identity");
  for (std::size_t g : generators_)
    if (remap[g] != SIZE_MAX) out.generators_.push_back(remap[g]);
  out.build_table();
  return out;
}

OperatorMonoid close_monoid(const std::vector<ExactMatrix>& generators, std::size_t dimension, std::size_t cap) {
  OperatorMonoid m;
  m.dim_ = dimension;
  auto add = [&](const ExactMatrix& x) -> std::size_t {
    auto it = m.index_.find(x.key());
    if (it != m.index_.end()) return it->second;
    if (m.elements_.size() >= cap) throw CapExceeded("monoid", cap);
    m.index_.emplace(x.key(), m.elements_.size());
    m.elements_.push_back(x);
    return m.elements_.size() - 1;
  };
  add(ExactMatrix::identity(dimension));
  for (const auto& g : generators) {
    if (g.rows() != dimension || g.cols() != dimension)
      throw DimensionMismatch("generator is not " + std::to_string(dimension) + "x" + std::to_string(dimension));
    std::size_t idx = add(g);
    if (std::find(m.generators_.begin(), m.generators_.end(), idx) == m.generators_.end())
      m.generators_.push_back(idx);
  }
  // Every element is a word in the generators; right-multiplying each element
  // by each generator reaches all of them.
  for (std::size_t i = 0; i < m.elements_.size(); ++i)
    for (std::size_t g : m.generators_) {
      ExactMatrix prod = mat_mul(m.elements_[i], m.elements_[g]);
      add(prod);
    }
  m.build_table();
  return m;
}

std::vector<Subspace> ray_orbit(const std::vector<ExactMatrix>& ops, const std::vector<Subspace>& seeds,
                                std::size_t cap) {
  std::vector<Subspace> rays;
  std::unordered_set<std::string> seen;
  auto add = [&](const Subspace& s) {
    if (s.is_zero() || !seen.insert(s.key()).second) return;
    if (s.dim() != 1) throw ValidationError("seed state", s.to_string() + " is not a ray");
    if (rays.size() >= cap) throw CapExceeded("orbit", cap);
    rays.push_back(s);
  };
  for (const auto& s : seeds) add(s);
  for (std::size_t i = 0; i < rays.size(); ++i)
    for (const auto& f : ops) add(apply_operator(f, rays[i]));
  return rays;
}

namespace {

std::optional<std::size_t> find_subspace(const std::vector<Subspace>& list, const Subspace& s) {
  auto it = std::find(list.begin(), list.end(), s);
  if (it == list.end()) return std::nullopt;
  return static_cast<std::size_t>(it - list.begin());
}

}  // namespace

std::optional<std::size_t> PlainSite::object_index(const Subspace& ray) const { return find_subspace(objects, ray); }

std::vector<std::size_t> PlainSite::hom(std::size_t e, std::size_t e_prime) const {
  std::vector<std::size_t> ops;
  for (std::size_t id : category.out(e))
    if (category.arrow(id).cod == e_prime) ops.push_back(category.arrow(id).op);
  return ops;
}

PlainSite build_plain_site(const Observable& r, const OperatorMonoid& monoid, const std::vector<Subspace>& seeds,
                           std::size_t cap) {
  for (std::size_t i = 0; i < monoid.size(); ++i)
    if (!in_commutant(monoid.element(i), r))
      throw CommutantViolation("monoid element " + std::to_string(i),
                               "does not commute with observable '" + r.name() + "'");
  PlainSite site{r, monoid, ray_orbit(monoid.elements(), seeds, cap), {}, {}, {}};
  std::vector<Arrow> arrows;
  for (std::size_t e = 0; e < site.objects.size(); ++e)
    for (std::size_t f = 0; f < monoid.size(); ++f) {
      Subspace image = apply_operator(monoid.element(f), site.objects[e]);
      if (image.is_zero()) continue;
      auto cod = site.object_index(image);
      if (!cod) throw InconsistentSite("orbit is not closed under the monoid action");
      arrows.push_back({e, *cod, f});
    }
  site.category = FiniteCategory(site.objects.size(), std::move(arrows), monoid.product_table(), 0);
  for (std::size_t i = 0; i < site.objects.size(); ++i) site.object_origin.push_back(i);
  for (std::size_t i = 0; i < site.category.num_arrows(); ++i) site.arrow_origin.push_back(i);
  return site;
}

PlainSite restrict_down(const PlainSite& site, std::size_t e) {
  if (e >= site.objects.size()) throw UnknownObject("restrict_down: no object " + std::to_string(e));
  std::vector<std::size_t> keep = site.category.reachable(e);
  std::vector<std::size_t> remap(site.objects.size(), SIZE_MAX);
  PlainSite out{site.observable, site.monoid, {}, {}, {}, {}};
  for (std::size_t o : keep) {
    remap[o] = out.objects.size();
    out.objects.push_back(site.objects[o]);
    out.object_origin.push_back(site.object_origin[o]);
  }
  std::vector<Arrow> arrows;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> parent_of;
  for (std::size_t id = 0; id < site.category.num_arrows(); ++id) {
    const Arrow& a = site.category.arrow(id);
    if (remap[a.dom] == SIZE_MAX || remap[a.cod] == SIZE_MAX) continue;
    Arrow na{remap[a.dom], remap[a.cod], a.op};
    arrows.push_back(na);
    parent_of[{na.dom, na.op, na.cod}] = site.arrow_origin[id];
  }
  out.category = FiniteCategory(out.objects.size(), std::move(arrows), site.monoid.product_table(), 0);
  for (const Arrow& a : out.category.arrows()) out.arrow_origin.push_back(parent_of.at({a.dom, a.op, a.cod}));
  return out;
}

std::optional<std::size_t> ExtendedSite::object_index(std::size_t ray, std::size_t rho) const {
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (objects[i].ray == ray && objects[i].rho == rho) return i;
  return std::nullopt;
}

std::optional<std::size_t> ExtendedSite::ray_index(const Subspace& ray) const { return find_subspace(rays, ray); }

std::vector<Subspace> ExtendedSite::atoms(std::size_t ray, std::size_t rho) const {
  return augmented_atoms(rays.at(ray), observables.at(rho));
}

bool ExtendedSite::is_product_morphism(std::size_t ray, std::size_t rho, std::size_t op,
                                       std::size_t rho_prime) const {
  return rho_leq.at(rho).at(rho_prime) && in_commutant(monoid.element(op), observables.at(rho)) &&
         !apply_operator(monoid.element(op), rays.at(ray)).is_zero();
}

ExtendedSite build_extended_site(const std::vector<Observable>& observables, const OperatorMonoid& monoid,
                                 const std::vector<Subspace>& seeds, std::size_t cap) {
  if (observables.empty()) throw ValidationError("extended site", "no observables");
  ExtendedSite site;
  site.observables = observables;
  site.monoid = monoid;
  site.rays = ray_orbit(monoid.elements(), seeds, cap);
  const std::size_t nr = site.rays.size(), nrho = observables.size();
  site.rho_leq.assign(nrho, std::vector<bool>(nrho));
  for (std::size_t a = 0; a < nrho; ++a)
    for (std::size_t b = 0; b < nrho; ++b) site.rho_leq[a][b] = observable_leq(observables[a], observables[b]);

  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nrho; ++j) site.objects.push_back({i, j});

  std::vector<std::vector<std::vector<Subspace>>> atoms(nr, std::vector<std::vector<Subspace>>(nrho));
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nrho; ++j) atoms[i][j] = site.atoms(i, j);
  std::vector<std::vector<bool>> commutes(monoid.size(), std::vector<bool>(nrho));
  for (std::size_t f = 0; f < monoid.size(); ++f)
    for (std::size_t j = 0; j < nrho; ++j) commutes[f][j] = in_commutant(monoid.element(f), observables[j]);

  std::vector<Arrow> arrows;
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t f = 0; f < monoid.size(); ++f) {
      Subspace image = apply_operator(monoid.element(f), site.rays[i]);
      if (image.is_zero()) continue;
      auto cod_ray = site.ray_index(image);
      if (!cod_ray) throw InconsistentSite("orbit is not closed under the monoid action");
      for (std::size_t rho = 0; rho < nrho; ++rho) {
        if (!commutes[f][rho]) continue;
        for (std::size_t rho2 = 0; rho2 < nrho; ++rho2) {
          if (!site.rho_leq[rho][rho2]) continue;
          if (atoms[*cod_ray][rho] != atoms[*cod_ray][rho2]) continue;
          arrows.push_back({i * nrho + rho, *cod_ray * nrho + rho2, f});
        }
      }
    }
  site.category = FiniteCategory(site.objects.size(), std::move(arrows), monoid.product_table(), 0);
  for (const Arrow& a : site.category.arrows()) {
    const ObjectX& d = site.objects[a.dom];
    const ObjectX& c = site.objects[a.cod];
    site.morphisms.push_back({d.ray, d.rho, a.op, c.rho, c.ray});
  }
  for (std::size_t i = 0; i < site.objects.size(); ++i) site.object_origin.push_back(i);
  for (std::size_t i = 0; i < site.category.num_arrows(); ++i) site.arrow_origin.push_back(i);
  return site;
}

PlainSite restrict_to_rho(const ExtendedSite& site, std::size_t rho) {
  if (rho >= site.observables.size()) throw UnknownObject("restrict_to_rho: no observable " + std::to_string(rho));
  PlainSite out{site.observables[rho], site.monoid, site.rays, {}, {}, {}};
  std::vector<Arrow> arrows;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> parent_of;
  for (std::size_t id = 0; id < site.category.num_arrows(); ++id) {
    const MorphismX& m = site.morphisms[id];
    if (m.dom_rho != rho || m.cod_rho != rho) continue;
    arrows.push_back({m.dom_ray, m.cod_ray, m.op});
    parent_of[{m.dom_ray, m.op, m.cod_ray}] = site.arrow_origin[id];
  }
  out.category = FiniteCategory(out.objects.size(), std::move(arrows), site.monoid.product_table(), 0);
  for (std::size_t r = 0; r < site.rays.size(); ++r) out.object_origin.push_back(*site.object_index(r, rho));
  for (const Arrow& a : out.category.arrows()) out.arrow_origin.push_back(parent_of.at({a.dom, a.op, a.cod}));
  return out;
}

ExtendedSite restrict_down_extended(const ExtendedSite& site, std::size_t object) {
  if (object >= site.objects.size())
    throw UnknownObject("restrict_down_extended: no object " + std::to_string(object));
  std::vector<std::size_t> keep = site.category.reachable(object);
  std::vector<std::size_t> remap(site.objects.size(), SIZE_MAX);
  ExtendedSite out;
  out.observables = site.observables;
  out.monoid = site.monoid;
  out.rays = site.rays;
  out.rho_leq = site.rho_leq;
  for (std::size_t o : keep) {
    remap[o] = out.objects.size();
    out.objects.push_back(site.objects[o]);
    out.object_origin.push_back(site.object_origin[o]);
  }
  std::vector<Arrow> arrows;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> parent_of;
  for (std::size_t id = 0; id < site.category.num_arrows(); ++id) {
    const Arrow& a = site.category.arrow(id);
    if (remap[a.dom] == SIZE_MAX || remap[a.cod] == SIZE_MAX) continue;
    Arrow na{remap[a.dom], remap[a.cod], a.op};
    arrows.push_back(na);
    parent_of[{na.dom, na.op, na.cod}] = id;
  }
  out.category = FiniteCategory(out.objects.size(), std::move(arrows), site.monoid.product_table(), 0);
  for (const Arrow& a : out.category.arrows()) {
    std::size_t parent = parent_of.at({a.dom, a.op, a.cod});
    out.morphisms.push_back(site.morphisms[parent]);
    out.arrow_origin.push_back(site.arrow_origin[parent]);
  }
  return out;
}

}  // namespace qtopos
