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

#include "asmstarve/monitor.hpp"

#include <set>
#include <stdexcept>

namespace asmstarve {

AnnotatedTrace annotate_trace(const Machine& m, const Trace& t) {
  AnnotatedTrace at;
  auto states = replay_states(t);
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& step = t.steps[i];
    AnnotatedRow row;
    row.step = step.step;
    if (step.agent) {
      if (!m.find_agent(*step.agent)) throw EvalError("trace names unknown agent " + step.agent->to_string());
      row.agent = step.agent->to_string();
    }
    for (const auto& p : m.model().predicates) {
      for (const auto* a : m.predicate_agents(p)) {
        row.predicates[a->id.to_string()][p.name] = m.eval_predicate(states[i + 1], p, *a);
      }
    }
    at.rows.push_back(std::move(row));
  }
  return at;
}

namespace {

/// Per agent, the sequence of (step, value) samples counted for runs.
std::map<std::string, std::vector<std::pair<std::size_t, bool>>> samples(const AnnotatedTrace& at,
                                                                          const std::string& predicate,
                                                                          const MonitorOptions& options) {
  std::map<std::string, std::vector<std::pair<std::size_t, bool>>> out;
  for (const auto& row : at.rows) {
    for (const auto& [agent, values] : row.predicates) {
      auto it = values.find(predicate);
      if (it == values.end()) continue;
      auto& seq = out[agent];
      if (!options.global_steps && row.agent != agent) continue;
      seq.emplace_back(row.step, it->second);
    }
  }
  return out;
}

bool declared(const AnnotatedTrace& at, const std::string& predicate) {
  for (const auto& row : at.rows) {
    for (const auto& [agent, values] : row.predicates) {
      if (values.count(predicate)) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Alarm> detect_cyclical_return(const AnnotatedTrace& at, const std::string& predicate,
                                          std::size_t k, const MonitorOptions& options) {
  if (k == 0) throw std::invalid_argument("threshold must be at least 1");
  if (!at.rows.empty() && !declared(at, predicate)) {
    throw std::invalid_argument("unknown predicate '" + predicate + "'");
  }
  std::vector<Alarm> alarms;
  for (const auto& [agent, seq] : samples(at, predicate, options)) {
    std::size_t run = 0;
    std::size_t start = 0;
    auto close = [&] {
      if (run >= k) alarms.push_back({agent, predicate, start, run, k});
      run = 0;
    };
    for (const auto& [step, value] : seq) {
      if (value) {
        if (run == 0) start = step;
        ++run;
      } else {
        close();
      }
    }
    close();
  }
  return alarms;
}

std::vector<ProgressEntry> progress_summary(const AnnotatedTrace& at, const MonitorOptions& options) {
  std::set<std::string> predicates;
  for (const auto& row : at.rows) {
    for (const auto& [agent, values] : row.predicates) {
      for (const auto& [p, v] : values) predicates.insert(p);
    }
  }
  std::vector<ProgressEntry> out;
  std::map<std::pair<std::string, std::string>, ProgressEntry> by_key;
  for (const auto& p : predicates) {
    for (const auto& [agent, seq] : samples(at, p, options)) {
      ProgressEntry e{agent, p, 0, 0};
      std::size_t run = 0;
      for (std::size_t i = 0; i < seq.size(); ++i) {
        run = seq[i].second ? run + 1 : 0;
        e.longest_run = std::max(e.longest_run, run);
        if (i > 0 && seq[i].second != seq[i - 1].second) ++e.flips;
      }
      by_key[{agent, p}] = e;
    }
  }
  for (auto& [key, e] : by_key) out.push_back(std::move(e));
  return out;
}

}  // namespace asmstarve
