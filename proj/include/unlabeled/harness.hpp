#pragma once

// Seeded Monte Carlo campaigns.
//
// Trial t of a campaign with master seed s uses sub_seed = derive_seed(s, t)
// and splits it further per generated object:
//   derive_seed(sub_seed, 0)  sensing matrix
//   derive_seed(sub_seed, 1)  signal
//   derive_seed(sub_seed, 2)  true selection
//   derive_seed(sub_seed, 3)  sampling of selection pairs (nullspace_check)
// so any single trial can be replayed from (seed, t) alone. Trials run on
// worker threads (US_THREADS caps the count) and are stored by index, which
// keeps the report independent of scheduling.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "unlabeled/adversary.hpp"
#include "unlabeled/golden.hpp"
#include "unlabeled/model.hpp"
#include "unlabeled/reports.hpp"
#include "unlabeled/rng.hpp"
#include "unlabeled/robust.hpp"
#include "unlabeled/solver.hpp"

namespace unlabeled {

enum class ExperimentKind { montecarlo_exact, snr_sweep, converse, nullspace_check };

inline std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::montecarlo_exact: return "montecarlo_exact";
    case ExperimentKind::snr_sweep: return "snr_sweep";
    case ExperimentKind::converse: return "converse";
    case ExperimentKind::nullspace_check: return "nullspace_check";
  }
  return "unknown";
}

inline ExperimentKind parse_experiment_kind(std::string_view s) {
  if (s == "montecarlo_exact") return ExperimentKind::montecarlo_exact;
  if (s == "snr_sweep") return ExperimentKind::snr_sweep;
  if (s == "converse") return ExperimentKind::converse;
  if (s == "nullspace_check") return ExperimentKind::nullspace_check;
  throw ParseError("unknown experiment kind '" + std::string(s) + "'");
}

inline std::vector<double> default_snrs() { return {1e2, 1e4, 1e6, 1e8, 1e10, 1e12}; }

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::montecarlo_exact;
  std::size_t k = 2;
  std::size_t n = 4;
  std::size_t m = 4;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  Distribution dist = Distribution::gaussian;
  SolveConfig solve;
  double rank_tol = 1e-9;          // nullspace_check kernel tolerance; violations allowed up to 10x
  double stability_tol = 1e-4;     // snr_sweep: a trial succeeds when its error at the top SNR is below this
  std::vector<double> snrs;        // snr_sweep; empty means default_snrs()
  bool golden = false;             // snr_sweep on the 4x2 hand example instead of a random draw
  std::uint64_t max_pairs = 1'000'000;  // nullspace_check sampling budget
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t sub_seed = 0;
  bool success = false;
  bool degenerate = false;
  std::string status;
  double error = std::numeric_limits<double>::quiet_NaN();
  json detail = json::object();
  double seconds = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double mean_error = std::numeric_limits<double>::quiet_NaN();
  double max_error = std::numeric_limits<double>::quiet_NaN();
  std::size_t degenerate_draws = 0;
  std::vector<SweepRow> sweep;
  // Volatile run information, kept apart from everything that must reproduce.
  std::string timestamp;
  double wall_seconds = 0.0;
  unsigned threads = 1;
};

inline unsigned worker_count(std::size_t jobs) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("US_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(hw, jobs)));
}

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.k < 1) throw PreconditionError("k must be at least 1");
  if (cfg.trials < 1) throw PreconditionError("trials must be at least 1");
  if (cfg.n > cfg.m) throw PreconditionError("n must not exceed m");
  switch (cfg.kind) {
    case ExperimentKind::montecarlo_exact:
      if (cfg.n < cfg.k) throw PreconditionError("montecarlo_exact needs n >= k");
      break;
    case ExperimentKind::nullspace_check:
      if (cfg.n < 2 * cfg.k) throw PreconditionError("nullspace_check needs n >= 2k");
      break;
    case ExperimentKind::converse:
      if (cfg.k < 2) throw PreconditionError("converse needs k >= 2");
      if (cfg.n < 2 || cfg.n >= 2 * cfg.k)
        throw PreconditionError("converse needs 2 <= n < 2k (n = " + std::to_string(cfg.n) +
                                ", k = " + std::to_string(cfg.k) + ")");
      break;
    case ExperimentKind::snr_sweep:
      if (cfg.n < cfg.k) throw PreconditionError("snr_sweep needs n >= k");
      break;
  }
}

namespace detail {

/// Random signal: uniform direction, norm log-uniform on [0.1, 10].
inline Vec random_signal(std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  Vec x(static_cast<Index>(k));
  do {
    for (Index i = 0; i < x.size(); ++i) x(i) = rng.gaussian();
  } while (x.norm() == 0.0);
  const double norm = std::pow(10.0, rng.uniform(-1.0, 1.0));
  return x * (norm / x.norm());
}

inline TrialRecord run_exact_trial(const ExperimentConfig& cfg, std::uint64_t sub) {
  TrialRecord r;
  const Mat a = gen_matrix(cfg.m, cfg.k, cfg.dist, derive_seed(sub, 0));
  const Vec x = random_signal(cfg.k, derive_seed(sub, 1));
  Rng sel_rng(derive_seed(sub, 2));
  const Selection sel = random_selection(cfg.m, cfg.n, sel_rng);
  const Instance inst = measure(a, x, sel, NoiseSpec::none(), 0);
  const RecoveryReport rep = solve(a, inst.y, cfg.solve);

  r.status = std::string(to_string(rep.status));
  if (rep.x_hat) r.error = (*rep.x_hat - x).lpNorm<Eigen::Infinity>();
  r.success = rep.status == RecoveryStatus::unique && rep.x_hat &&
              r.error <= 1e-8 * (1.0 + x.norm());
  r.detail["x_norm"] = x.norm();
  r.detail["distinct_solutions"] = rep.distinct_solutions.size();
  r.detail["nodes_explored"] = rep.nodes_explored;
  r.detail["nodes_pruned"] = rep.nodes_pruned;
  return r;
}

inline TrialRecord run_nullspace_trial(const ExperimentConfig& cfg, std::uint64_t sub) {
  TrialRecord r;
  const Mat a = gen_matrix(cfg.m, cfg.k, cfg.dist, derive_seed(sub, 0));
  const NullspaceCheck c =
      nullspace_property_report(a, cfg.n, cfg.rank_tol, cfg.max_pairs, derive_seed(sub, 3));
  r.success = c.holds;
  r.status = c.holds ? "holds" : "violated";
  r.error = c.max_violation;
  r.detail["pairs_checked"] = c.pairs_checked;
  r.detail["nontrivial_kernels"] = c.nontrivial_kernels;
  r.detail["exhaustive"] = c.exhaustive;
  return r;
}

inline TrialRecord run_converse_trial(const ExperimentConfig& cfg, std::uint64_t sub) {
  TrialRecord r;
  const Mat b = gen_matrix(cfg.n, cfg.k, cfg.dist, derive_seed(sub, 0));
  try {
    const AmbiguousPair p = construct_ambiguous_pair(b);
    const double bound = 1e-8 * (1.0 + (b * p.x).norm());
    r.success = p.residual <= bound && p.separation >= 0.5;
    r.status = r.success ? "ambiguous_pair" : "unverified";
    r.error = p.residual;
    r.detail["separation"] = p.separation;
    r.detail["delta"] = number_json(p.delta);
    r.detail["base_k"] = p.base_k;
    // Close the loop through the exact solver where it is cheap and well posed.
    if (cfg.k <= cfg.n && cfg.n <= 6) {
      const RecoveryReport rep = solve(b, b * p.x, cfg.solve);
      r.detail["solver_status"] = to_string(rep.status);
    }
  } catch (const DegenerateInstance& e) {
    r.degenerate = true;
    r.status = "degenerate";
    r.detail["message"] = e.what();
  }
  return r;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.config = cfg;
  rep.timestamp = detail::utc_timestamp();
  rep.trials.resize(cfg.trials);

  if (cfg.kind == ExperimentKind::snr_sweep) {
    Mat a;
    Vec x;
    std::optional<Selection> sel;
    if (cfg.golden) {
      a = golden::unique_4x2();
      x = golden::signal();
      sel = Selection::identity(4);
      rep.config.k = 2;
      rep.config.n = 4;
      rep.config.m = 4;
    } else {
      a = gen_matrix(cfg.m, cfg.k, cfg.dist, derive_seed(cfg.seed, 0));
      x = detail::random_signal(cfg.k, derive_seed(cfg.seed, 1));
      Rng sel_rng(derive_seed(cfg.seed, 2));
      sel = random_selection(cfg.m, cfg.n, sel_rng);
    }
    if (rep.config.snrs.empty()) rep.config.snrs = default_snrs();
    rep.sweep = stability_sweep(a, x, *sel, rep.config.snrs, cfg.trials, derive_seed(cfg.seed, 3));
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      TrialRecord& r = rep.trials[t];
      r.trial = t;
      r.sub_seed = derive_seed(derive_seed(cfg.seed, 3), t);
      json errs = json::array();
      for (const SweepRow& row : rep.sweep) errs.push_back(number_json(row.relative_errors[t]));
      r.error = rep.sweep.back().relative_errors[t];
      r.success = r.error <= cfg.stability_tol;
      r.status = r.success ? "stable" : "unstable";
      r.detail["relative_errors"] = std::move(errs);
    }
  } else {
    const unsigned workers = worker_count(cfg.trials);
    rep.threads = workers;
    auto run_range = [&](unsigned w) {
      for (std::size_t t = w; t < cfg.trials; t += workers) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::uint64_t sub = derive_seed(cfg.seed, t);
        TrialRecord r;
        switch (cfg.kind) {
          case ExperimentKind::montecarlo_exact: r = detail::run_exact_trial(cfg, sub); break;
          case ExperimentKind::nullspace_check: r = detail::run_nullspace_trial(cfg, sub); break;
          case ExperimentKind::converse: r = detail::run_converse_trial(cfg, sub); break;
          case ExperimentKind::snr_sweep: break;
        }
        r.trial = t;
        r.sub_seed = sub;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.trials[t] = std::move(r);
      }
    };
    if (workers == 1) {
      run_range(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
    }
  }

  double sum = 0.0;
  std::size_t counted = 0;
  for (const TrialRecord& r : rep.trials) {
    if (r.success) ++rep.successes;
    if (r.degenerate) ++rep.degenerate_draws;
    if (std::isfinite(r.error)) {
      sum += r.error;
      ++counted;
      rep.max_error = counted == 1 ? r.error : std::max(rep.max_error, r.error);
    }
  }
  if (counted) rep.mean_error = sum / static_cast<double>(counted);
  rep.success_rate = static_cast<double>(rep.successes) / static_cast<double>(cfg.trials);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline json config_json(const ExperimentConfig& c) {
  json out;
  out["kind"] = to_string(c.kind);
  out["k"] = c.k;
  out["n"] = c.n;
  out["m"] = c.m;
  out["trials"] = c.trials;
  out["seed"] = c.seed;
  out["dist"] = to_string(c.dist);
  out["residual_tol"] = c.solve.residual_tol;
  out["uniqueness_tol"] = c.solve.uniqueness_tol;
  out["prune"] = c.solve.prune;
  out["first_hit"] = c.solve.first_hit;
  out["max_nodes"] = c.solve.max_nodes ? json(*c.solve.max_nodes) : json(nullptr);
  out["rank_tol"] = c.rank_tol;
  out["stability_tol"] = c.stability_tol;
  out["snrs"] = c.snrs;
  out["golden"] = c.golden;
  out["max_pairs"] = c.max_pairs;
  return out;
}

/// Everything except the "timing" object is a pure function of the config.
inline json report_json(const ExperimentReport& rep) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["config"] = config_json(rep.config);

  json agg;
  agg["trials"] = rep.trials.size();
  agg["successes"] = rep.successes;
  agg["success_rate"] = rep.success_rate;
  agg["mean_error"] = number_json(rep.mean_error);
  agg["max_error"] = number_json(rep.max_error);
  agg["degenerate_draws"] = rep.degenerate_draws;
  out["aggregates"] = std::move(agg);

  json records = json::array();
  for (const TrialRecord& r : rep.trials) {
    json jr;
    jr["trial"] = r.trial;
    jr["sub_seed"] = r.sub_seed;
    jr["success"] = r.success;
    jr["status"] = r.status;
    jr["error"] = number_json(r.error);
    for (const auto& [key, value] : r.detail.items()) jr[key] = value;
    records.push_back(std::move(jr));
  }
  out["records"] = std::move(records);
  if (rep.config.kind == ExperimentKind::snr_sweep) out["sweep"] = sweep_json(rep.sweep);

  json timing;
  timing["timestamp"] = rep.timestamp;
  timing["wall_seconds"] = rep.wall_seconds;
  timing["threads"] = rep.threads;
  json per_trial = json::array();
  for (const TrialRecord& r : rep.trials) per_trial.push_back(r.seconds);
  timing["trial_seconds"] = std::move(per_trial);
  out["timing"] = std::move(timing);
  return out;
}

}  // namespace unlabeled
