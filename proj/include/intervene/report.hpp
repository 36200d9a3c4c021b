#pragma once

// JSON renderings of run results, verification reports and DAG listings.
// Field order is fixed so identical inputs give byte-identical output.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "intervene/io.hpp"
#include "intervene/simulation.hpp"
#include "intervene/verifier.hpp"

namespace intervene {

using Json = nlohmann::ordered_json;

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json relation_names(const PairState& s) {
  Json out = Json::array();
  if (s.allows(Relation::XToY)) out.push_back("x-to-y");
  if (s.allows(Relation::YToX)) out.push_back("y-to-x");
  if (s.allows(Relation::NoEdge)) out.push_back("no-edge");
  return out;
}

inline Json pair_lattice_json(const KnowledgeState& state) {
  Json out = Json::array();
  for (const auto& pr : all_pairs(state.variables())) {
    out.push_back(Json{{"x", pr.x}, {"y", pr.y}, {"possible", relation_names(state.at(pr.x, pr.y))}});
  }
  return out;
}

inline Json outcomes_json(const std::vector<PairOutcome>& outcomes) {
  Json out = Json::array();
  for (const auto& o : outcomes) {
    out.push_back(Json{{"x", o.x}, {"y", o.y}, {"kind", to_string(o.kind)}, {"verdict", to_string(o.verdict)}});
  }
  return out;
}

inline Json run_result_json(const RunResult& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    steps.push_back(Json{{"experiment", s.experiment.intervention.members()},
                         {"outcomes", outcomes_json(s.outcomes)},
                         {"resolved_pairs", s.resolved_pairs},
                         {"consistent_set_size", optional_json(s.consistent_set_size)}});
  }
  Json out;
  out["schedule"] = schedule_to_json(r.schedule);
  out["steps"] = std::move(steps);
  out["status"] = to_string(r.status);
  out["recovered_graph"] = r.recovered ? Json(write_dag_text(*r.recovered)) : Json(nullptr);
  out["experiment_count"] = r.experiment_count();
  out["consistent_set_size"] = optional_json(r.consistent_set_size);
  out["pair_lattice"] = r.pairwise ? pair_lattice_json(*r.pairwise) : Json(nullptr);
  if (r.status == RunStatus::Contradiction) out["contradiction"] = r.contradiction;
  return out;
}

inline Json witness_json(const Witness& w) {
  return Json{{"first", write_dag_text(w.first)}, {"second", write_dag_text(w.second)}};
}

inline Json length_search_json(const LengthSearch& s, bool with_defeats) {
  Json out{{"length", s.length}, {"candidates", s.candidates}, {"identifying", s.identifying.has_value()}};
  if (s.identifying) out["example"] = schedule_to_json(*s.identifying);
  if (with_defeats) {
    Json defeats = Json::array();
    for (const auto& d : s.defeats) {
      defeats.push_back(Json{{"schedule", schedule_to_json(d.schedule)}, {"witness", witness_json(d.witness)}});
    }
    out["defeats"] = std::move(defeats);
  }
  return out;
}

inline Json bench_json(const BenchSummary& b) {
  return Json{{"trials", b.trials},
              {"recovered", b.recovered},
              {"recovery_rate", b.recovery_rate()},
              {"contradictions", b.contradictions},
              {"mean_experiments", b.mean_experiments()},
              {"max_experiments", b.max_experiments},
              {"bound", b.bound},
              {"coverage_sufficient", b.coverage_sufficient}};
}

}  // namespace intervene
