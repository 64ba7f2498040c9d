#include <doctest.h>

#include <string>

#include "qtopos/error.hpp"
#include "support.hpp"

using namespace qtest;

namespace {

const std::string kQubit = R"({
  "name": "q", "dimension": 2,
  "observables": [{"name": "z", "eigenspaces": [[[1, 0]], [[0, 1]]]}],
  "generators": [{"name": "p1", "matrix": [[1, 0], [0, 0]], "observable": "z"},
                 {"name": "p2", "matrix": [[0, 0], [0, 1]], "observable": "z"}],
  "states": [{"name": "plus", "vector": [1, 1]}],
  "propositions": [{"name": "up", "basis": [[1, 0]]}],
  "runs": [{"name": "r", "state": "plus", "observable": "z", "eigenspace": 0}]
})";

std::string field_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST_CASE("a valid scenario parses") {
  Scenario sc = parse_scenario(kQubit);
  CHECK(sc.dimension == 2);
  CHECK(sc.observables.size() == 1);
  CHECK(sc.runs.size() == 1);
  CHECK(sc.caps.monoid == 256);
  CHECK(sc.caps.sieve_enum == 4096);
}

TEST_CASE("malformed input is a parse error") {
  CHECK_THROWS_AS(parse_scenario("{"), ParseError);
  CHECK_THROWS_AS(parse_scenario(replace(kQubit, "[1, 1]", "[1.0, 1]")), ParseError);
  CHECK_THROWS_AS(parse_scenario(replace(kQubit, "[1, 1]", "[\"1/0\", 1]")), ParseError);
}

TEST_CASE("validation errors carry a JSON pointer") {
  CHECK(field_of(replace(kQubit, "\"dimension\": 2,", "")) == "/dimension");
  CHECK(field_of(replace(kQubit, "\"observable\": \"z\", \"eigenspace\"", "\"observable\": \"x\", \"eigenspace\"")) ==
        "/runs/0/observable");
  CHECK(field_of(replace(kQubit, "[[1, 0], [0, 0]]", "[[0, 1], [1, 0]]")) == "/generators/0/matrix");
  CHECK(field_of(replace(kQubit, "\"eigenspace\": 0", "\"eigenspace\": 5")) == "/runs/0/eigenspace");
  CHECK(field_of(replace(kQubit, "[1, 1]", "[0, 0]")) == "/states/0/vector");
  CHECK(field_of(replace(kQubit, "[1, 1]", "[1, 1, 1]")) == "/states/0/vector");
}

TEST_CASE("commutant violations keep their type") {
  CHECK_THROWS_AS(parse_scenario(replace(kQubit, "[[1, 0], [0, 0]]", "[[0, 1], [1, 0]]")), CommutantViolation);
}

TEST_CASE("cap overrides") {
  Caps caps;
  apply_cap_overrides(caps, "monoid=8,sieve=100");
  CHECK(caps.monoid == 8);
  CHECK(caps.sieve_enum == 100);
  CHECK(caps.orbit == 128);
  CHECK_THROWS_AS(apply_cap_overrides(caps, "bogus=1"), ParseError);
  CHECK_THROWS_AS(apply_cap_overrides(caps, "monoid=x"), ParseError);
}

TEST_CASE("a binding cap is reported, not silently truncated") {
  Scenario sc = parse_scenario(kQubit);
  sc.caps.monoid = 2;
  CHECK_THROWS_AS(Analysis(std::move(sc)), CapExceeded);
}

TEST_CASE("check on a valid scenario passes and is deterministic") {
  Analysis a(parse_scenario(kQubit));
  auto r1 = run_check(a);
  CHECK(check_exit_code(r1) == 0);
  CHECK(r1["summary"]["fail"] == 0);
  Analysis b(parse_scenario(kQubit));
  CHECK(run_check(b).dump() == r1.dump());
  auto v = run_valuate(a, "r");
  CHECK(v["propositions"].size() == 3);
  CHECK_THROWS_AS(run_valuate(a, "missing"), UnknownObject);
}
