#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtopos/bridge.hpp"
#include "qtopos/scenario.hpp"

namespace qtopos {

using ordered_json = nlohmann::ordered_json;

/// Everything built from a scenario: the operator monoid, one plain site per
/// observable used by a run, the extended site with its bridges, and the
/// proposition universe. Not copyable or movable: presheaves and bridges keep
/// pointers into the sites held here.
class Analysis {
 public:
  /// Throws CapExceeded, InconsistentSite, or ValidationError (for declared
  /// subobjects that are not sub-presheaves).
  explicit Analysis(Scenario scenario);
  Analysis(const Analysis&) = delete;
  Analysis& operator=(const Analysis&) = delete;

  const Scenario& scenario() const noexcept { return scenario_; }
  const OperatorMonoid& monoid() const noexcept { return monoid_; }
  const PropositionUniverse& universe() const noexcept { return universe_; }

  /// Plain site of an observable used by some run, and the universe with its
  /// action indexed by that site's monoid.
  const PlainSite& plain_site(std::size_t observable) const { return plain_.at(observable); }
  const PropositionUniverse& plain_universe(std::size_t observable) const { return plain_universe_.at(observable); }
  const std::map<std::size_t, PlainSite>& plain_sites() const noexcept { return plain_; }

  bool has_extended() const noexcept { return extended_ != nullptr; }
  const ExtendedSite& extended() const { return *extended_; }
  const Bridge& bridge(std::size_t rho) const { return bridges_.at(rho); }
  const std::vector<Bridge>& bridges() const noexcept { return bridges_; }
  /// Position of a scenario observable among the extended observables.
  std::optional<std::size_t> extended_rho(std::size_t observable) const;
  /// Declared subobjects of the proposition presheaf on the extended site.
  const std::vector<Subobject>& declared_subobjects() const noexcept { return subobjects_; }

  const TrueAtomSet& atoms(std::size_t run) const { return atoms_.at(run); }
  const std::vector<Subspace>& determinate(std::size_t run) const { return determinate_.at(run); }
  /// Universe ids of the propositions a run reports on: {0}, I, then the
  /// selected declared propositions.
  std::vector<std::size_t> run_propositions(std::size_t run) const;
  std::optional<std::size_t> run_index(const std::string& name) const;

 private:
  static std::vector<Subspace> anchored_determinate(const TrueAtomSet& atoms, std::size_t cap,
                                                    const std::vector<Subspace>& extra, const std::string& path);

  Scenario scenario_;
  OperatorMonoid monoid_;
  std::map<std::size_t, PlainSite> plain_;
  std::unique_ptr<ExtendedSite> extended_;
  std::vector<Bridge> bridges_;
  PropositionUniverse universe_;
  std::map<std::size_t, PropositionUniverse> plain_universe_;
  std::vector<Subobject> subobjects_;
  std::vector<TrueAtomSet> atoms_;
  std::vector<std::vector<Subspace>> determinate_;
};

/// Runs every audit and returns the report. Rows carry a tag, a scope, and a
/// status of "pass", "fail" or "degraded" (cap-bound, checked on a sample).
ordered_json run_check(const Analysis& analysis);
/// Valuation report for one run. Throws UnknownObject for an unknown run name.
ordered_json run_valuate(const Analysis& analysis, const std::string& run);
/// Objects, arrows and the monoid product table of every built site.
ordered_json dump_site(const Analysis& analysis);
/// Summary of a scenario after validation.
ordered_json describe(const Analysis& analysis);

/// 0 when no row failed, 1 otherwise.
int check_exit_code(const ordered_json& report);

std::string render_check_text(const ordered_json& report);
std::string render_valuate_text(const ordered_json& report);

}  // namespace qtopos
