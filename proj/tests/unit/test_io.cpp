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


#include <random>
#include <sstream>

#include "asmstarve/analysis.hpp"
#include "asmstarve/io.hpp"
#include "asmstarve/monitor.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace asmstarve;
using namespace asmstarve::testing;

namespace {

Value random_value(const Machine& m, std::mt19937_64& rng, int depth) {
  switch (rng() % (depth > 0 ? 5 : 4)) {
    case 0:
      return Value::undef();
    case 1:
      return Value::boolean(rng() % 2 == 0);
    case 2:
      return Value::integer(static_cast<std::int64_t>(rng() % 2001) - 1000);
    case 3: {
      auto forks = m.domain_values("forks");
      return forks[rng() % forks.size()];
    }
    default: {
      std::vector<Value> items(rng() % 4);
      for (auto& v : items) v = random_value(m, rng, depth - 1);
      return Value::sequence(std::move(items));
    }
  }
}

void check_same_steps(const Trace& a, const Trace& b) {
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].step == b.steps[i].step);
    CHECK(a.steps[i].agent == b.steps[i].agent);
    CHECK(a.steps[i].fired_rules == b.steps[i].fired_rules);
    CHECK(a.steps[i].updates == b.steps[i].updates);
    CHECK(a.steps[i].env_updates == b.steps[i].env_updates);
  }
}

}  // namespace

TEST_CASE("values round-trip through JSON") {
  auto m = load_corpus_machine("dining_philosophers");
  CHECK(value_to_json(Value::undef()).is_null());
  CHECK(value_to_json(atom(*m, "p3")) == "p3");
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    Value v = random_value(*m, rng, 3);
    CHECK(value_from_json(*m, value_to_json(v)) == v);
  }
  CHECK_THROWS_AS(value_from_json(*m, "nobody"), IoError);
  CHECK_THROWS_AS(value_from_json(*m, 1.5), IoError);
}

TEST_CASE("locations") {
  auto m = load_corpus_machine("dining_philosophers");
  Location l = parse_location(*m, " owner( f2 ) ");
  CHECK(l.symbol == "owner");
  REQUIRE(l.args.size() == 1);
  CHECK(l.args[0] == atom(*m, "f2"));
  for (const char* bad : {"", "owner(f2", "nope(f1)", "owner(f1,f2)", "owner(zz)", "(f1)"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_location(*m, bad), IoError);
  }
  Machine local(parse_or_throw(
      "dasm locals domain d = {a, b} function n : -> integer controlled local init { skip } "
      "rule P() = n := 1 agent x in d runs P()"));
  CHECK_THROWS_AS(parse_location(local, "n"), IoError);
  Location owned = parse_location(local, "n@b");
  REQUIRE(owned.owner);
  CHECK(*owned.owner == atom(local, "b"));
}

TEST_CASE("environment scripts round-trip") {
  auto m = load_corpus_machine("aodv3_line");
  EnvironmentScript env = corpus_entry("aodv3_line").env();
  auto j = environment_to_json(env);
  CHECK(environment_from_json(*m, nlohmann::json::parse(j.dump())).batches == env.batches);

  CHECK_THROWS_AS(environment_from_json(*m, nlohmann::json::array()), IoError);
  CHECK_THROWS_AS(environment_from_json(*m, nlohmann::json::parse(R"({"x": {}})")), IoError);
  CHECK_THROWS_AS(environment_from_json(*m, nlohmann::json::parse(R"j({"0": {"nope(h1)": true}})j")), IoError);
  // Scripts may not write controlled symbols.
  CHECK_THROWS_AS(environment_from_json(*m, nlohmann::json::parse(R"j({"0": {"waiting(h1,h3)": true}})j")),
                  IoError);
  CHECK_THROWS_AS(load_environment(*m, "/nonexistent/env.json"), IoError);
}

TEST_CASE("traces round-trip through JSON lines") {
  for (const char* name : {"dining_philosophers", "aodv_timeout", "dp_bakery"}) {
    CAPTURE(name);
    auto m = load_corpus_machine(name);
    EnvironmentScript env = corpus_entry(name).env();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Trace t = run_distributed(*m, Scheduler::random(seed), env, 50);
      std::string text = trace_to_jsonl(*m, t);
      std::istringstream in(text);
      Trace back = trace_from_jsonl(*m, in);
      check_same_steps(t, back);
      CHECK(replay_states(back) == replay_states(t));
      CHECK(trace_to_jsonl(*m, back) == text);

      // The predicate columns alone give the same annotation as the model.
      std::istringstream again(text);
      AnnotatedTrace from_file = annotated_trace_from_jsonl(again);
      AnnotatedTrace direct = annotate_trace(*m, t);
      REQUIRE(from_file.rows.size() == direct.rows.size());
      for (std::size_t i = 0; i < direct.rows.size(); ++i) {
        CHECK(from_file.rows[i].step == direct.rows[i].step);
        CHECK(from_file.rows[i].agent == direct.rows[i].agent);
        CHECK(from_file.rows[i].predicates == direct.rows[i].predicates);
      }
    }
  }
  auto m = load_corpus_machine("dining_philosophers");
  std::istringstream bad("{\"step\": 0}\n");
  CHECK_THROWS_AS(trace_from_jsonl(*m, bad), IoError);
  std::istringstream garbage("not json\n");
  CHECK_THROWS_AS(annotated_trace_from_jsonl(garbage), IoError);
}

TEST_CASE("report JSON") {
  auto m = load_corpus_machine("aodv_timeout");
  auto r = certify_starvation_free(*m);
  auto j = report_to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"risky_functions", "non_risky_controlled", "predicates", "rules",
                                         "rankings", "certificate", "truncated", "notes"});
  CHECK(j["certificate"] == true);
  CHECK(j["predicates"][0]["name"] == "waiting");
  CHECK(j["predicates"][0]["verdict"] == "not-risky");
  for (const auto& rule : j["rules"]) {
    CHECK(rule.contains("id"));
    CHECK(rule["verdict"] == "not-vulnerable");
    CHECK(rule.contains("f1_evidence"));
    CHECK(rule.contains("f2_evidence"));
  }
  std::string text = report_to_text(r);
  CHECK(text.find("waiting") != std::string::npos);

  auto dp = load_corpus_machine("dining_philosophers");
  auto jd = report_to_json(certify_starvation_free(*dp));
  CHECK_FALSE(jd.contains("rankings"));
  CHECK(jd["certificate"] == false);
}

TEST_CASE("alarms JSON") {
  auto j = alarms_to_json({Alarm{"h1", "waiting", 0, 100, 20}});
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  CHECK(j[0]["agent"] == "h1");
  CHECK(j[0]["predicate"] == "waiting");
  CHECK(j[0]["start"] == 0);
  CHECK(j[0]["length"] == 100);
  CHECK(j[0]["threshold"] == 20);
}
