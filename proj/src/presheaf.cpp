#include "qtopos/presheaf.hpp"

#include <algorithm>

#include "qtopos/error.hpp"

namespace qtopos {

PropositionUniverse::PropositionUniverse(const OperatorMonoid& monoid, const std::vector<Subspace>& seeds,
                                         std::size_t cap) {
  const std::size_t n = monoid.dimension();
  auto add = [&](const Subspace& s) {
    if (s.ambient_dim() != n) throw DimensionMismatch("proposition " + s.to_string() + " has the wrong ambient dimension");
    if (index_.count(s.key())) return;
    if (elements_.size() >= cap) throw CapExceeded("lattice", cap);
    index_.emplace(s.key(), elements_.size());
    elements_.push_back(s);
  };
  add(Subspace::zero(n));
  add(Subspace::whole(n));
  for (const auto& s : seeds) add(s);
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    for (const auto& f : monoid.elements()) add(apply_operator(f, elements_[i]));
    for (std::size_t j = 0; j < i; ++j) add(qtopos::meet(elements_[i], elements_[j]));
  }
  const std::size_t k = elements_.size();
  zero_ = id(Subspace::zero(n));
  whole_ = id(Subspace::whole(n));
  action_.assign(monoid.size(), std::vector<std::size_t>(k));
  for (std::size_t op = 0; op < monoid.size(); ++op)
    for (std::size_t p = 0; p < k; ++p) action_[op][p] = id(apply_operator(monoid.element(op), elements_[p]));
  leq_.assign(k, std::vector<char>(k));
  meet_.assign(k, std::vector<std::size_t>(k));
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q) {
      leq_[p][q] = qtopos::leq(elements_[p], elements_[q]);
      meet_[p][q] = q < p ? meet_[q][p] : id(qtopos::meet(elements_[p], elements_[q]));
    }
}

PropositionUniverse PropositionUniverse::for_monoid(const OperatorMonoid& sub) const {
  PropositionUniverse out = *this;
  out.action_.assign(sub.size(), std::vector<std::size_t>(size()));
  for (std::size_t op = 0; op < sub.size(); ++op)
    for (std::size_t p = 0; p < size(); ++p) out.action_[op][p] = id(apply_operator(sub.element(op), elements_[p]));
  return out;
}

std::optional<std::size_t> PropositionUniverse::find(const Subspace& s) const {
  auto it = index_.find(s.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t PropositionUniverse::id(const Subspace& s) const {
  auto found = find(s);
  if (!found) throw UnknownObject("subspace " + s.to_string() + " is not in the proposition universe");
  return *found;
}

Presheaf::Presheaf(const FiniteCategory& cat, std::vector<std::vector<std::size_t>> values,
                   std::vector<std::vector<std::size_t>> action)
    : cat_(&cat), values_(std::move(values)), action_(std::move(action)) {
  if (values_.size() != cat.num_objects() || action_.size() != cat.num_arrows())
    throw InconsistentSite("presheaf shape does not match its category");
  for (std::size_t m = 0; m < cat.num_arrows(); ++m) {
    const Arrow& a = cat.arrow(m);
    if (action_[m].size() != values_[a.dom].size()) throw InconsistentSite("presheaf action has the wrong length");
    for (std::size_t v : action_[m])
      if (!contains(a.cod, v)) throw InconsistentSite("presheaf action leaves the codomain values");
  }
}

std::size_t Presheaf::position(std::size_t object, std::size_t value) const {
  const auto& vs = values_.at(object);
  auto it = std::lower_bound(vs.begin(), vs.end(), value);
  if (it == vs.end() || *it != value)
    throw NotSubPresheaf("value " + std::to_string(value) + " is not present at object " + std::to_string(object));
  return static_cast<std::size_t>(it - vs.begin());
}

bool Presheaf::contains(std::size_t object, std::size_t value) const {
  const auto& vs = values_.at(object);
  return std::binary_search(vs.begin(), vs.end(), value);
}

std::size_t Presheaf::apply(std::size_t m, std::size_t value) const {
  return action_.at(m)[position(cat_->arrow(m).dom, value)];
}

std::optional<std::string> Presheaf::functoriality_violation() const {
  for (std::size_t o = 0; o < values_.size(); ++o)
    for (std::size_t v : values_[o])
      if (apply(cat_->identity(o), v) != v) return "identity at object " + std::to_string(o) + " moves a value";
  for (std::size_t m = 0; m < cat_->num_arrows(); ++m)
    for (const auto& [after, composite] : cat_->postcompositions(m))
      for (std::size_t v : values_[cat_->arrow(m).dom])
        if (apply(composite, v) != apply(after, apply(m, v)))
          return "composition fails for arrows " + std::to_string(after) + " after " + std::to_string(m);
  return std::nullopt;
}

Presheaf proposition_presheaf(const FiniteCategory& cat, const PropositionUniverse& universe) {
  std::vector<std::size_t> all(universe.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> action(cat.num_arrows());
  for (std::size_t m = 0; m < cat.num_arrows(); ++m)
    for (std::size_t p : all) action[m].push_back(universe.apply(cat.arrow(m).op, p));
  return Presheaf(cat, std::vector<std::vector<std::size_t>>(cat.num_objects(), all), std::move(action));
}

bool subobject_contains(const Subobject& n, std::size_t object, std::size_t value) {
  const auto& vs = n.at(object);
  return std::binary_search(vs.begin(), vs.end(), value);
}

void validate_subobject(const Presheaf& m, const Subobject& n) {
  const FiniteCategory& cat = m.category();
  if (n.size() != cat.num_objects()) throw NotSubPresheaf("subobject has the wrong number of stages");
  for (std::size_t o = 0; o < n.size(); ++o) {
    if (!std::is_sorted(n[o].begin(), n[o].end())) throw NotSubPresheaf("subobject stage is not sorted");
    for (std::size_t v : n[o])
      if (!m.contains(o, v))
        throw NotSubPresheaf("value " + std::to_string(v) + " at object " + std::to_string(o) +
                             " is not in the ambient presheaf");
  }
  for (std::size_t a = 0; a < cat.num_arrows(); ++a) {
    const Arrow& arr = cat.arrow(a);
    for (std::size_t v : n[arr.dom])
      if (!subobject_contains(n, arr.cod, m.apply(a, v)))
        throw NotSubPresheaf("arrow " + std::to_string(a) + " maps value " + std::to_string(v) +
                             " out of the subobject");
  }
}

Sieve characteristic(const Presheaf& m, const Subobject& n, std::size_t object, std::size_t x) {
  const FiniteCategory& cat = m.category();
  Sieve s{object, {}};
  for (std::size_t a : cat.out(object))
    if (subobject_contains(n, cat.arrow(a).cod, m.apply(a, x))) s.arrows.push_back(a);
  return s;
}

std::optional<std::string> naturality_violation(const Presheaf& m, const GlobalElement& g) {
  const FiniteCategory& cat = m.category();
  for (std::size_t a = 0; a < cat.num_arrows(); ++a) {
    const Arrow& arr = cat.arrow(a);
    if (m.apply(a, g.value.at(arr.dom)) != g.value.at(arr.cod))
      return "naturality square fails at arrow " + std::to_string(a);
  }
  return std::nullopt;
}

std::vector<std::string> filter_check(const PropositionUniverse& universe, const Subobject& n) {
  std::vector<std::string> out;
  for (std::size_t o = 0; o < n.size(); ++o) {
    for (std::size_t p : n[o]) {
      for (std::size_t q = 0; q < universe.size(); ++q)
        if (universe.leq(p, q) && !subobject_contains(n, o, q)) {
          out.push_back("object " + std::to_string(o) + ": not up-closed at " + universe.element(q).to_string());
          break;
        }
      for (std::size_t q : n[o])
        if (!subobject_contains(n, o, universe.meet(p, q))) {
          out.push_back("object " + std::to_string(o) + ": not closed under meet of " +
                        universe.element(p).to_string() + " and " + universe.element(q).to_string());
          break;
        }
    }
  }
  return out;
}

std::size_t OmegaPresheaf::id_of(const Sieve& s) const {
  auto idx = stages.at(s.base).index_of(s);
  if (!idx) throw InconsistentSite("sieve " + sieve_to_string(s) + " is not in the enumerated stage");
  return *idx;
}

std::size_t OmegaPresheaf::top_id(std::size_t object) const { return id_of(stages.at(object).top); }

OmegaPresheaf build_omega(const FiniteCategory& cat, std::size_t cap) {
  OmegaPresheaf omega;
  std::vector<std::vector<std::size_t>> values(cat.num_objects());
  for (std::size_t o = 0; o < cat.num_objects(); ++o) {
    omega.stages.push_back(omega_at(cat, o, cap));
    if (!omega.stages.back().complete) throw CapExceeded("sieve_enum", cap);
    for (std::size_t i = 0; i < omega.stages.back().sieves.size(); ++i) values[o].push_back(i);
  }
  std::vector<std::vector<std::size_t>> action(cat.num_arrows());
  for (std::size_t m = 0; m < cat.num_arrows(); ++m)
    for (const Sieve& s : omega.stages[cat.arrow(m).dom].sieves) action[m].push_back(omega.id_of(omega_transition(cat, m, s)));
  omega.presheaf = Presheaf(cat, std::move(values), std::move(action));
  return omega;
}

namespace {

// Candidate count of maps M -> classes, saturating at budget + 1.
std::size_t candidate_count(const Presheaf& m, const Subobject& classes, std::size_t budget) {
  std::size_t count = 1;
  for (std::size_t o = 0; o < classes.size(); ++o)
    for (std::size_t i = 0; i < m.values(o).size(); ++i) {
      count *= std::max<std::size_t>(classes[o].size(), 1);
      if (count > budget) return budget + 1;
    }
  return count;
}

}  // namespace

ClassifierAudit classifier_audit(const Presheaf& m, const Subobject& n, const OmegaPresheaf& omega,
                                 const Subobject& classes, std::size_t enumeration_budget) {
  const FiniteCategory& cat = m.category();
  validate_subobject(m, n);
  validate_subobject(omega.presheaf, classes);
  ClassifierAudit audit;
  for (std::size_t o = 0; o < cat.num_objects(); ++o)
    if (!subobject_contains(classes, o, omega.top_id(o))) {
      audit.factors = false;
      audit.violations.push_back("top sieve missing from the classifying stage at object " + std::to_string(o));
    }

  // chi[o][i]: sieve id of the characteristic value of the i-th value at o.
  std::vector<std::vector<std::size_t>> chi(cat.num_objects());
  for (std::size_t o = 0; o < cat.num_objects(); ++o)
    for (std::size_t x : m.values(o)) {
      Sieve s = characteristic(m, n, o, x);
      std::size_t id = omega.id_of(s);
      chi[o].push_back(id);
      if (!subobject_contains(classes, o, id)) {
        audit.factors = false;
        audit.violations.push_back("characteristic of value " + std::to_string(x) + " at object " +
                                   std::to_string(o) + " leaves the classifying stage");
      }
      if ((id == omega.top_id(o)) != subobject_contains(n, o, x)) {
        audit.pullback = false;
        audit.violations.push_back("pullback of top differs from the subobject at object " + std::to_string(o) +
                                   ", value " + std::to_string(x));
      }
    }

  auto value_pos = [&](std::size_t o, std::size_t x) {
    const auto& vs = m.values(o);
    return static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), x) - vs.begin());
  };
  for (std::size_t a = 0; a < cat.num_arrows(); ++a) {
    const Arrow& arr = cat.arrow(a);
    const auto& vs = m.values(arr.dom);
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (omega.presheaf.apply(a, chi[arr.dom][i]) != chi[arr.cod][value_pos(arr.cod, m.apply(a, vs[i]))]) {
        audit.natural = false;
        audit.violations.push_back("characteristic map is not natural at arrow " + std::to_string(a));
        break;
      }
  }

  audit.candidates = candidate_count(m, classes, enumeration_budget);
  if (audit.candidates <= enumeration_budget) {
    audit.uniqueness_mode = "enumerated";
    // Flatten (object, value) slots and run a mixed-radix counter over choices.
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t o = 0; o < cat.num_objects(); ++o)
      for (std::size_t i = 0; i < m.values(o).size(); ++i) slots.emplace_back(o, i);
    std::vector<std::size_t> digit(slots.size(), 0);
    std::vector<std::vector<std::size_t>> zeta(cat.num_objects());
    for (std::size_t o = 0; o < cat.num_objects(); ++o) zeta[o].assign(m.values(o).size(), 0);
    std::size_t accepted = 0;
    bool chi_accepted = false;
    while (true) {
      for (std::size_t s = 0; s < slots.size(); ++s)
        zeta[slots[s].first][slots[s].second] = classes[slots[s].first][digit[s]];
      bool good = true;
      for (std::size_t s = 0; s < slots.size() && good; ++s) {
        auto [o, i] = slots[s];
        if ((zeta[o][i] == omega.top_id(o)) != subobject_contains(n, o, m.values(o)[i])) good = false;
      }
      for (std::size_t a = 0; a < cat.num_arrows() && good; ++a) {
        const Arrow& arr = cat.arrow(a);
        const auto& vs = m.values(arr.dom);
        for (std::size_t i = 0; i < vs.size() && good; ++i)
          if (omega.presheaf.apply(a, zeta[arr.dom][i]) != zeta[arr.cod][value_pos(arr.cod, m.apply(a, vs[i]))])
            good = false;
      }
      if (good) {
        ++accepted;
        if (zeta == chi) chi_accepted = true;
      }
      std::size_t s = 0;
      while (s < slots.size() && ++digit[s] == classes[slots[s].first].size()) digit[s++] = 0;
      if (s == slots.size()) break;
    }
    if (accepted != 1 || !chi_accepted) {
      audit.unique = false;
      audit.violations.push_back(std::to_string(accepted) + " candidate maps make the square a pullback");
    }
  } else {
    // A natural map z with pullback N must satisfy: f in z(x) iff Omega(f)(z(x))
    // is top iff z(M(f) x) is top iff M(f) x in N. That pins z to chi.
    audit.uniqueness_mode = "forced-pointwise";
    for (std::size_t o = 0; o < cat.num_objects() && audit.unique; ++o)
      for (std::size_t i = 0; i < m.values(o).size() && audit.unique; ++i) {
        const Sieve& s = omega.sieve(o, chi[o][i]);
        for (std::size_t a : cat.out(o)) {
          bool member = s.contains(a);
          bool lands_top = omega.presheaf.apply(a, chi[o][i]) == omega.top_id(cat.arrow(a).cod);
          bool image_in_n = subobject_contains(n, cat.arrow(a).cod, m.apply(a, m.values(o)[i]));
          if (member != lands_top || member != image_in_n) {
            audit.unique = false;
            audit.violations.push_back("pointwise forcing fails at object " + std::to_string(o) + ", arrow " +
                                       std::to_string(a));
            break;
          }
        }
      }
  }
  return audit;
}

}  // namespace qtopos
