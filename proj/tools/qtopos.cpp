// Command-line front end: validate, valuate, check, dump-site.
//
// Exit status: 0 all checks pass, 1 some check failed, 2 bad input or a cap
// that stopped the site from being built. QTOPOS_CAPS overrides caps, e.g.
// QTOPOS_CAPS="monoid=64,sieve=1024".

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "qtopos/analysis.hpp"
#include "qtopos/error.hpp"

namespace {

qtopos::Scenario load(const std::string& path) {
  qtopos::Scenario sc = qtopos::load_scenario(path);
  if (const char* env = std::getenv("QTOPOS_CAPS"); env && *env) qtopos::apply_cap_overrides(sc.caps, env);
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact sieve-valued valuations of quantum propositions"};
  app.require_subcommand(1);

  std::string path, run;
  bool as_json = false;

  auto* validate = app.add_subcommand("validate", "parse and build a scenario, print its sizes");
  validate->add_option("scenario", path, "scenario JSON file")->required();

  auto* valuate = app.add_subcommand("valuate", "valuations of the propositions of one run");
  valuate->add_option("scenario", path, "scenario JSON file")->required();
  valuate->add_option("--run", run, "run name")->required();
  valuate->add_flag("--json", as_json, "print the JSON report");

  auto* check = app.add_subcommand("check", "run every audit");
  check->add_option("scenario", path, "scenario JSON file")->required();
  check->add_flag("--json", as_json, "print the JSON report");

  auto* dump = app.add_subcommand("dump-site", "print the built sites as JSON");
  dump->add_option("scenario", path, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    qtopos::Analysis an(load(path));
    if (*validate) {
      std::cout << qtopos::describe(an).dump(2) << "\n";
      return 0;
    }
    if (*valuate) {
      auto report = qtopos::run_valuate(an, run);
      std::cout << (as_json ? report.dump(2) + "\n" : qtopos::render_valuate_text(report));
      return 0;
    }
    if (*check) {
      auto report = qtopos::run_check(an);
      std::cout << (as_json ? report.dump(2) + "\n" : qtopos::render_check_text(report));
      return qtopos::check_exit_code(report);
    }
    std::cout << qtopos::dump_site(an).dump(2) << "\n";
    return 0;
  } catch (const qtopos::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
