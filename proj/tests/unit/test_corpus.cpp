// Copyright 2026 The asmstarve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <set>
#include <stdexcept>

#include "asmstarve/analysis.hpp"
#include "asmstarve/corpus.hpp"
#include "asmstarve/io.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace asmstarve;
using namespace asmstarve::testing;

namespace {

std::vector<std::string> risky_names(const VulnerabilityReport& r) {
  auto s = r.risk.names();
  return {s.begin(), s.end()};
}

void check_against_manifest(const VulnerabilityReport& r, const nlohmann::json& manifest) {
  CHECK_FALSE(r.truncated);
  CHECK(risky_names(r) == manifest["risky_functions"].get<std::vector<std::string>>());
  for (const auto& [name, verdict] : manifest["predicates"].items()) {
    CAPTURE(name);
    const auto* p = r.predicate(name);
    REQUIRE(p);
    CHECK(p->risky == (verdict.get<std::string>() == "risky"));
  }
  CHECK(r.vulnerable_ids() == manifest["vulnerable"].get<std::vector<std::string>>());
  CHECK(r.certificate == manifest["certificate"].get<bool>());
}

}  // namespace

TEST_CASE("every corpus entry has a model file and a manifest") {
  std::set<std::string> names;
  for (const auto& e : corpus_entries()) {
    CAPTURE(e.name);
    CHECK(names.insert(e.name).second);
    auto manifest = load_manifest(e.name);
    CHECK(manifest["model"] == e.file);
    CHECK(manifest.value("explorable", true) == e.explorable);
    // The built-in expectations say the same as the manifest.
    const auto& x = e.expected;
    auto risky = manifest["risky_functions"].get<std::vector<std::string>>();
    for (const auto& f : x.risky_functions_include) CHECK(std::count(risky.begin(), risky.end(), f) == 1);
    for (const auto& f : x.risky_functions_exclude) CHECK(std::count(risky.begin(), risky.end(), f) == 0);
    if (x.risky_functions_exact) CHECK(*x.risky_functions_exact == risky);
    for (const auto& p : x.risky_predicates) CHECK(manifest["predicates"][p] == "risky");
    for (const auto& p : x.safe_predicates) CHECK(manifest["predicates"][p] == "not-risky");
    CHECK(manifest["vulnerable"].get<std::vector<std::string>>() == x.vulnerable);
    CHECK(manifest["certificate"].get<bool>() == x.certificate);
  }
  CHECK(names.size() == 9);
}

TEST_CASE("environment files match the generated scripts") {
  for (const auto& e : corpus_entries()) {
    auto manifest = load_manifest(e.name);
    if (!manifest.contains("environment")) {
      CHECK(e.env().batches.empty());
      continue;
    }
    CAPTURE(e.name);
    auto m = load_corpus_machine(e.name);
    EnvironmentScript file = load_environment(*m, corpus_file(manifest["environment"].get<std::string>()));
    CHECK(file.batches == e.env().batches);
    CHECK(validate_script(*m, file).empty());
    REQUIRE(m->model().environment);
    CHECK(*m->model().environment == manifest["environment"].get<std::string>());
  }
}

TEST_CASE("syntactic analysis reproduces every manifest") {
  for (const auto& e : corpus_entries()) {
    CAPTURE(e.name);
    auto m = load_corpus_machine(e.name);
    check_against_manifest(certify_starvation_free(*m), load_manifest(e.name));
  }
}

TEST_CASE("exploration reproduces every explorable manifest") {
  for (const auto& e : corpus_entries()) {
    if (!e.explorable) continue;
    CAPTURE(e.name);
    auto m = load_corpus_machine(e.name);
    AnalysisOptions o;
    o.mode = Method::kExploration;
    o.env = e.env();
    auto r = certify_starvation_free(*m, o);
    check_against_manifest(r, load_manifest(e.name));
    for (const auto& p : r.predicates) CHECK(p.risky_symbols.empty() == (p.evidence == "mentions no risky function"));
  }
}

TEST_CASE("builders") {
  CHECK_THROWS_AS(build_dining_philosophers(1), std::invalid_argument);
  CHECK_THROWS_AS(build_dining_philosophers(0, DpVariant::kBakery), std::invalid_argument);
  for (std::size_t n = 2; n <= 7; ++n) {
    Machine m(build_dining_philosophers(n));
    CHECK(m.agents().size() == n);
    Machine b(build_dining_philosophers(n, DpVariant::kBakery));
    CHECK(b.agents().size() == n + 1);
    CHECK_FALSE(has_errors(validate_model(b.model())));
  }
  // Fork i is p_i's right fork and p_{i+1}'s left fork.
  Machine m(build_dining_philosophers(4));
  CHECK(m.initial_state().read(loc(m, "rightFork(p3)")) == atom(m, "f3"));
  CHECK(m.initial_state().read(loc(m, "leftFork(p1)")) == atom(m, "f4"));
  CHECK(m.initial_state().read(loc(m, "leftFork(p4)")) == atom(m, "f3"));

  AodvOptions o;
  o.topology = parse_topology(4, "line");
  auto inst = build_aodv(o);
  Machine a(inst.model);
  CHECK(a.agents().size() == 2);
  CHECK_FALSE(has_errors(validate_model(inst.model)));
  // Replies come back after as many steps as the route is long.
  CHECK(a.initial_state().read(loc(a, "hops(h1,h4)")) == Value::integer(3));
  CHECK(a.initial_state().read(loc(a, "via(h1,h4)")) == atom(a, "h2"));
}

TEST_CASE("topologies") {
  CHECK(parse_topology(3, "partitioned").links.empty());
  CHECK(parse_topology(3, "line").links == std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}, {2, 3}});
  CHECK(parse_topology(3, "ring").links.size() == 3);
  CHECK(parse_topology(2, "ring").links.size() == 1);
  CHECK(parse_topology(4, "full").links.size() == 6);
  CHECK(parse_topology(4, "1-3,2-4").links == std::vector<std::pair<std::size_t, std::size_t>>{{1, 3}, {2, 4}});
  for (const char* bad : {"1", "1-x", "0-1", "2-2", "1-9", "-", "1--2", "a-b"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_topology(4, bad), std::invalid_argument);
  }
  CHECK_THROWS_AS(parse_topology(1, "line"), std::invalid_argument);
}
