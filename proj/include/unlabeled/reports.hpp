#pragma once

// JSON views of library results. Keys are snake_case; indices are 0-based.
// Non-finite numbers serialize as null.

#include <cmath>
#include <cstdint>
#include <vector>

#include "json.hpp"

#include "unlabeled/adversary.hpp"
#include "unlabeled/cycles.hpp"
#include "unlabeled/densela.hpp"
#include "unlabeled/model.hpp"
#include "unlabeled/robust.hpp"
#include "unlabeled/solver.hpp"

namespace unlabeled {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline json number_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json vec_json(const Vec& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number_json(v(i)));
  return out;
}

inline json mat_json(const Mat& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(vec_json(m.row(i).transpose()));
  return out;
}

inline json selection_json(const Selection& s) { return json(s.picks()); }

inline json recovery_json(const RecoveryReport& r) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["status"] = to_string(r.status);
  out["certified"] = r.certified;
  out["x_hat"] = r.x_hat ? vec_json(*r.x_hat) : json(nullptr);
  json sols = json::array();
  for (const Vec& v : r.distinct_solutions) sols.push_back(vec_json(v));
  out["distinct_solutions"] = std::move(sols);
  json wits = json::array();
  for (const Selection& s : r.witness_selections) wits.push_back(selection_json(s));
  out["witness_selections"] = std::move(wits);
  out["nodes_explored"] = r.nodes_explored;
  out["nodes_pruned"] = r.nodes_pruned;
  return out;
}

inline json robust_json(const RobustReport& r) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["x_hat"] = vec_json(r.x_hat);
  out["best_selection"] = selection_json(r.best_selection);
  out["best_residual"] = number_json(r.best_residual);
  out["runner_up_residual"] = number_json(r.runner_up_residual);
  return out;
}

inline json cycles_json(const CycleDecomposition& d) {
  json out;
  out["schema_version"] = kSchemaVersion;
  json cycles = json::array();
  for (const Cycle& c : d.cycles) {
    json jc;
    jc["row_ids"] = c.row_ids;
    jc["complete"] = c.complete;
    jc["length"] = c.length();
    cycles.push_back(std::move(jc));
  }
  out["cycles"] = std::move(cycles);
  out["n_complete"] = d.n_complete;
  out["n_total"] = d.n_total;
  return out;
}

inline json pair_json(const AmbiguousPair& p) {
  json out;
  out["x"] = vec_json(p.x);
  out["x_hat"] = vec_json(p.x_hat);
  out["pi"] = selection_json(p.pi);
  out["residual"] = number_json(p.residual);
  out["separation"] = number_json(p.separation);
  out["base_k"] = p.base_k;
  out["delta"] = number_json(p.delta);
  return out;
}

inline json sweep_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const SweepRow& r : rows) {
    json jr;
    jr["snr"] = number_json(r.snr);
    jr["mean_relative_error"] = number_json(r.mean_relative_error);
    jr["max_relative_error"] = number_json(r.max_relative_error);
    jr["selection_hits"] = r.selection_hits;
    out.push_back(std::move(jr));
  }
  return out;
}

}  // namespace unlabeled
