#include "qtopos/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qtopos/error.hpp"

namespace qtopos {

using nlohmann::json;

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ValidationError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(at(path, key), "missing field");
  return *it;
}

const json& require_array(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_array()) throw ValidationError(at(path, key), "expected an array");
  return v;
}

std::string require_string(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) throw ValidationError(at(path, key), "expected a string");
  return v.get<std::string>();
}

std::size_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) throw ValidationError(path, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

GaussianRational as_scalar(const json& v, const std::string& path) {
  if (v.is_number_integer()) return GaussianRational(v.get<long>());
  if (v.is_string()) {
    try {
      return GaussianRational::parse(v.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  if (v.is_number_float()) throw ParseError(path + ": floating-point literals are not exact; write \"a/b\"");
  throw ParseError(path + ": expected a rational literal");
}

Vector as_vector(const json& v, std::size_t n, const std::string& path) {
  if (!v.is_array()) throw ValidationError(path, "expected a vector");
  if (v.size() != n)
    throw ValidationError(path, "vector has " + std::to_string(v.size()) + " entries, dimension is " + std::to_string(n));
  Vector out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_scalar(v[i], at(path, i)));
  return out;
}

ExactMatrix as_matrix(const json& v, std::size_t n, const std::string& path) {
  if (!v.is_array() || v.size() != n) throw ValidationError(path, "expected " + std::to_string(n) + " rows");
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back(as_vector(v[i], n, at(path, i)));
  return ExactMatrix::from_rows(rows, n);
}

Subspace as_subspace(const json& v, std::size_t n, const std::string& path) {
  if (!v.is_array()) throw ValidationError(path, "expected a list of vectors");
  std::vector<Vector> vs;
  for (std::size_t i = 0; i < v.size(); ++i) vs.push_back(as_vector(v[i], n, at(path, i)));
  return Subspace::span(n, vs);
}

Subspace as_ray(const json& v, std::size_t n, const std::string& path) {
  Vector vec = as_vector(v, n, path);
  Subspace s = Subspace::span(n, {vec});
  if (s.dim() != 1) throw ValidationError(path, "the zero vector is not a state");
  return s;
}

// Re-raises a validation failure with the JSON path prepended, keeping its type.
template <class F>
auto anchored(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const CommutantViolation& e) {
    throw CommutantViolation(path, e.what());
  } catch (const OrthogonalityViolation& e) {
    throw OrthogonalityViolation(path, e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path, e.what());
  } catch (const DimensionMismatch& e) {
    throw DimensionMismatch(path + ": " + e.what());
  }
}

template <class T>
std::size_t lookup(const std::vector<T>& items, const std::string& name, const std::string& path,
                   const std::string& what) {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].name == name) return i;
  throw ValidationError(path, "unknown " + what + " '" + name + "'");
}

}  // namespace

void apply_cap_overrides(Caps& caps, const std::string& spec) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("cap override '" + item + "' is not key=value");
    std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), n);
    if (ec != std::errc() || ptr != val.data() + val.size() || n == 0)
      throw ParseError("cap override '" + item + "' needs a positive integer");
    if (key == "monoid") caps.monoid = n;
    else if (key == "orbit") caps.orbit = n;
    else if (key == "sieve_enum" || key == "sieve") caps.sieve_enum = n;
    else if (key == "lattice") caps.lattice = n;
    else throw ParseError("unknown cap '" + key + "'");
  }
}

std::optional<std::size_t> Scenario::observable_index(const std::string& name) const {
  for (std::size_t i = 0; i < observables.size(); ++i)
    if (observables[i].name() == name) return i;
  return std::nullopt;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  Scenario sc;
  const std::string root;
  sc.name = doc.contains("name") ? require_string(doc, "name", root) : "unnamed";
  sc.dimension = as_count(require(doc, "dimension", root), "/dimension");
  if (sc.dimension == 0) throw ValidationError("/dimension", "must be at least 1");
  const std::size_t n = sc.dimension;

  const json& obs = require_array(doc, "observables", root);
  if (obs.empty()) throw ValidationError("/observables", "at least one observable is required");
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const std::string p = at("/observables", i);
    std::string name = require_string(obs[i], "name", p);
    if (sc.observable_index(name)) throw ValidationError(at(p, "name"), "duplicate observable '" + name + "'");
    const json& es = require_array(obs[i], "eigenspaces", p);
    std::vector<Subspace> spaces;
    for (std::size_t k = 0; k < es.size(); ++k) spaces.push_back(as_subspace(es[k], n, at(at(p, "eigenspaces"), k)));
    std::vector<GaussianRational> labels;
    if (obs[i].contains("labels")) {
      const json& ls = require_array(obs[i], "labels", p);
      for (std::size_t k = 0; k < ls.size(); ++k) labels.push_back(as_scalar(ls[k], at(at(p, "labels"), k)));
    }
    Observable o = anchored(p, [&] { return Observable(name, spaces, labels); });
    if (obs[i].contains("matrix")) {
      ExactMatrix m = as_matrix(obs[i]["matrix"], n, at(p, "matrix"));
      anchored(at(p, "matrix"), [&] { o.validate_matrix(m); return 0; });
    }
    sc.observables.push_back(std::move(o));
  }

  if (doc.contains("generators")) {
    const json& gens = require_array(doc, "generators", root);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const std::string p = at("/generators", i);
      NamedMatrix g{require_string(gens[i], "name", p), as_matrix(require(gens[i], "matrix", p), n, at(p, "matrix")),
                    std::nullopt};
      if (gens[i].contains("observable")) {
        std::string oname = require_string(gens[i], "observable", p);
        auto idx = sc.observable_index(oname);
        if (!idx) throw ValidationError(at(p, "observable"), "unknown observable '" + oname + "'");
        g.observable = *idx;
        const Observable& r = sc.observables[*idx];
        for (std::size_t k = 0; k < r.size(); ++k)
          if (mat_mul(g.matrix, r.projectors()[k]) != mat_mul(r.projectors()[k], g.matrix))
            throw CommutantViolation(at(p, "matrix"), "generator '" + g.name + "' does not commute with eigenspace " +
                                                          std::to_string(k) + " " + r.eigenspaces()[k].to_string() +
                                                          " of observable '" + oname + "'");
      }
      sc.generators.push_back(std::move(g));
    }
  }

  const json& states = require_array(doc, "states", root);
  if (states.empty()) throw ValidationError("/states", "at least one state is required");
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string p = at("/states", i);
    sc.states.push_back({require_string(states[i], "name", p), as_ray(require(states[i], "vector", p), n, at(p, "vector"))});
  }

  if (doc.contains("propositions")) {
    const json& props = require_array(doc, "propositions", root);
    for (std::size_t i = 0; i < props.size(); ++i) {
      const std::string p = at("/propositions", i);
      sc.propositions.push_back(
          {require_string(props[i], "name", p), as_subspace(require(props[i], "basis", p), n, at(p, "basis"))});
    }
  }

  if (doc.contains("caps")) {
    const json& caps = require(doc, "caps", root);
    if (!caps.is_object()) throw ValidationError("/caps", "expected an object");
    for (const auto& [key, val] : caps.items()) {
      std::size_t v = as_count(val, at("/caps", key));
      if (v == 0) throw ValidationError(at("/caps", key), "caps must be positive");
      if (key == "monoid") sc.caps.monoid = v;
      else if (key == "orbit") sc.caps.orbit = v;
      else if (key == "sieve_enum") sc.caps.sieve_enum = v;
      else if (key == "lattice") sc.caps.lattice = v;
      else throw ValidationError(at("/caps", key), "unknown cap");
    }
  }

  if (doc.contains("extended")) {
    const json& ext = require_array(doc, "extended", root);
    for (std::size_t i = 0; i < ext.size(); ++i) {
      const std::string p = at("/extended", i);
      if (!ext[i].is_string()) throw ValidationError(p, "expected an observable name");
      auto idx = sc.observable_index(ext[i].get<std::string>());
      if (!idx) throw ValidationError(p, "unknown observable '" + ext[i].get<std::string>() + "'");
      for (std::size_t j : sc.extended)
        if (j == *idx) throw ValidationError(p, "observable listed twice");
      sc.extended.push_back(*idx);
    }
  }

  if (doc.contains("subobjects")) {
    const json& subs = require_array(doc, "subobjects", root);
    if (!subs.empty() && sc.extended.empty()) throw ValidationError("/subobjects", "subobjects need an extended site");
    for (std::size_t i = 0; i < subs.size(); ++i) {
      const std::string p = at("/subobjects", i);
      SubobjectSpec spec{require_string(subs[i], "name", p), std::vector<std::string>(sc.extended.size(), "all"),
                         std::nullopt, std::nullopt};
      const json& rules = require(subs[i], "rules", p);
      if (!rules.is_object()) throw ValidationError(at(p, "rules"), "expected an object keyed by observable name");
      for (const auto& [oname, rule] : rules.items()) {
        const std::string rp = at(at(p, "rules"), oname);
        auto idx = sc.observable_index(oname);
        std::size_t k = 0;
        while (idx && k < sc.extended.size() && sc.extended[k] != *idx) ++k;
        if (!idx || k == sc.extended.size()) throw ValidationError(rp, "not an observable of the extended site");
        if (!rule.is_string()) throw ValidationError(rp, "expected \"all\", \"none\", \"zero\" or \"contains_ray\"");
        std::string r = rule.get<std::string>();
        if (r != "all" && r != "none" && r != "zero" && r != "contains_ray")
          throw ValidationError(rp, "unknown rule '" + r + "'");
        spec.rules[k] = r;
      }
      if (subs[i].contains("ray")) spec.ray = as_ray(subs[i]["ray"], n, at(p, "ray"));
      for (const auto& r : spec.rules)
        if (r == "contains_ray" && !spec.ray) throw ValidationError(at(p, "ray"), "rule contains_ray needs a ray");
      if (subs[i].contains("expect")) {
        std::string e = require_string(subs[i], "expect", p);
        if (e != "projective" && e != "non-projective")
          throw ValidationError(at(p, "expect"), "expected \"projective\" or \"non-projective\"");
        spec.expect_projective = e == "projective";
      }
      sc.subobjects.push_back(std::move(spec));
    }
  }

  if (doc.contains("runs")) {
    const json& runs = require_array(doc, "runs", root);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const std::string p = at("/runs", i);
      RunSpec run;
      run.name = require_string(runs[i], "name", p);
      for (const auto& other : sc.runs)
        if (other.name == run.name) throw ValidationError(at(p, "name"), "duplicate run '" + run.name + "'");
      run.state = lookup(sc.states, require_string(runs[i], "state", p), at(p, "state"), "state");
      std::string oname = require_string(runs[i], "observable", p);
      auto idx = sc.observable_index(oname);
      if (!idx) throw ValidationError(at(p, "observable"), "unknown observable '" + oname + "'");
      run.observable = *idx;
      run.eigenspace = as_count(require(runs[i], "eigenspace", p), at(p, "eigenspace"));
      if (run.eigenspace >= sc.observables[*idx].size())
        throw ValidationError(at(p, "eigenspace"), "observable '" + oname + "' has " +
                                                       std::to_string(sc.observables[*idx].size()) + " eigenspaces");
      if (runs[i].contains("remainder_rays")) {
        const json& rr = require_array(runs[i], "remainder_rays", p);
        for (std::size_t k = 0; k < rr.size(); ++k)
          run.remainder_rays.push_back(as_ray(rr[k], n, at(at(p, "remainder_rays"), k)));
      }
      if (runs[i].contains("propositions")) {
        const json& ps = require_array(runs[i], "propositions", p);
        for (std::size_t k = 0; k < ps.size(); ++k) {
          const std::string pp = at(at(p, "propositions"), k);
          if (!ps[k].is_string()) throw ValidationError(pp, "expected a proposition name");
          run.propositions.push_back(lookup(sc.propositions, ps[k].get<std::string>(), pp, "proposition"));
        }
      }
      sc.runs.push_back(std::move(run));
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace qtopos
