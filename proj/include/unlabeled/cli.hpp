#pragma once

// Command-line front end. Exit codes: 0 success, 1 when the outcome violates
// the subcommand's contract (non-unique recovery, degenerate draw, failed
// trials), 2 for usage, parse and I/O errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "unlabeled/adversary.hpp"
#include "unlabeled/csv.hpp"
#include "unlabeled/cycles.hpp"
#include "unlabeled/harness.hpp"
#include "unlabeled/model.hpp"
#include "unlabeled/reports.hpp"
#include "unlabeled/robust.hpp"
#include "unlabeled/solver.hpp"

namespace unlabeled::cli {

inline constexpr int kOk = 0;
inline constexpr int kContractFailed = 1;
inline constexpr int kUsage = 2;

namespace detail {

inline void emit_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError(path + ": cannot open file for writing");
  f << text;
  if (!f) throw ParseError(path + ": write failed");
}

inline void emit_json(const std::string& path, const json& j, std::ostream& out) {
  emit_text(path, j.dump(2) + "\n", out);
}

inline std::string matrix_csv(const Mat& m) {
  std::ostringstream s;
  csv::write_matrix(s, m);
  return s.str();
}

inline std::vector<double> parse_snr_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(csv::detail::parse_double(tok, "--snrs"));
  return out;
}

}  // namespace detail

/// Runs one invocation; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recover signals from shuffled, subsampled linear measurements.", "unlabeled"};
  app.require_subcommand(1);
  int code = kOk;

  // gen
  std::size_t gen_m = 0, gen_k = 0;
  std::string gen_dist = "gaussian", gen_out;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "Draw an M x K sensing matrix as CSV");
  gen->add_option("--m", gen_m, "Rows")->required();
  gen->add_option("--k", gen_k, "Columns")->required();
  gen->add_option("--dist", gen_dist, "gaussian or uniform");
  gen->add_option("--seed", gen_seed, "Seed")->required();
  gen->add_option("--out", gen_out, "Output CSV (stdout if omitted)");

  // measure
  std::string ms_a, ms_x, ms_picks, ms_out;
  std::optional<double> ms_snr;
  std::uint64_t ms_seed = 0;
  auto* meas = app.add_subcommand("measure", "Form y = S A x (+ noise) as CSV");
  meas->add_option("--a", ms_a, "Sensing matrix CSV")->required();
  meas->add_option("--x", ms_x, "Signal CSV (one column)")->required();
  meas->add_option("--picks", ms_picks, "Selected rows of A in order, e.g. \"2,0,1\"")->required();
  meas->add_option("--snr", ms_snr, "||S A x||^2 / ||w||^2; noiseless if omitted");
  meas->add_option("--seed", ms_seed, "Noise seed");
  meas->add_option("--out", ms_out, "Output CSV (stdout if omitted)");

  // recover
  std::string rc_a, rc_y, rc_json;
  SolveConfig rc_cfg;
  bool rc_first_hit = false, rc_no_prune = false;
  std::optional<std::uint64_t> rc_max_nodes;
  auto* rec = app.add_subcommand("recover", "Exact recovery by exhaustive search");
  rec->add_option("--a", rc_a, "Sensing matrix CSV")->required();
  rec->add_option("--y", rc_y, "Measurement CSV")->required();
  rec->add_flag("--first-hit", rc_first_hit, "Stop at the first feasible candidate");
  rec->add_flag("--no-prune", rc_no_prune, "Enumerate full selections without pruning");
  rec->add_option("--residual-tol", rc_cfg.residual_tol, "Feasibility tolerance, relative to 1+||y||");
  rec->add_option("--uniqueness-tol", rc_cfg.uniqueness_tol, "Inf-norm merge tolerance");
  rec->add_option("--max-nodes", rc_max_nodes, "Node budget");
  rec->add_option("--json", rc_json, "Report path (stdout if omitted)");

  // robust
  std::string rb_a, rb_y, rb_json;
  std::size_t rb_n = 0;
  auto* rob = app.add_subcommand("robust", "Least-squares recovery over all selections");
  rob->add_option("--a", rb_a, "Sensing matrix CSV")->required();
  rob->add_option("--y", rb_y, "Measurement CSV")->required();
  rob->add_option("--n", rb_n, "Number of measurements")->required();
  rob->add_option("--json", rb_json, "Report path (stdout if omitted)");

  // cycles
  std::string cy_true, cy_cand, cy_json;
  std::size_t cy_m = 0;
  auto* cyc = app.add_subcommand("cycles", "Cycle decomposition of a (true, candidate) pair");
  cyc->add_option("--true", cy_true, "True selection, e.g. \"0,1,2\"")->required();
  cyc->add_option("--cand", cy_cand, "Candidate selection")->required();
  cyc->add_option("--m", cy_m, "Rows of A")->required();
  cyc->add_option("--json", cy_json, "Output path (stdout if omitted)");

  // adversary
  std::size_t ad_k = 0, ad_n = 0;
  std::uint64_t ad_seed = 0;
  std::string ad_dist = "gaussian", ad_json;
  auto* adv = app.add_subcommand("adversary", "Ambiguous pair for a random N x K matrix, N < 2K");
  adv->add_option("--k", ad_k, "Signal dimension")->required();
  adv->add_option("--n", ad_n, "Measurements")->required();
  adv->add_option("--seed", ad_seed, "Matrix seed")->required();
  adv->add_option("--dist", ad_dist, "gaussian or uniform");
  adv->add_option("--json", ad_json, "Output path (stdout if omitted)");

  // montecarlo
  ExperimentConfig mc;
  std::string mc_kind, mc_dist = "gaussian", mc_snrs, mc_json;
  std::optional<std::uint64_t> mc_max_nodes;
  bool mc_no_prune = false;
  auto* mon = app.add_subcommand("montecarlo", "Seeded campaign; exit 1 unless every trial succeeds");
  mon->add_option("--kind", mc_kind, "montecarlo_exact, snr_sweep, converse or nullspace_check")
      ->required();
  mon->add_option("--k", mc.k, "Signal dimension")->required();
  mon->add_option("--n", mc.n, "Measurements")->required();
  mon->add_option("--m", mc.m, "Rows of A (defaults to n)");
  mon->add_option("--trials", mc.trials, "Trials")->required();
  mon->add_option("--seed", mc.seed, "Master seed")->required();
  mon->add_option("--dist", mc_dist, "gaussian or uniform");
  mon->add_option("--snrs", mc_snrs, "Comma-separated ascending SNRs (snr_sweep)");
  mon->add_flag("--golden", mc.golden, "snr_sweep on the 4x2 hand example");
  mon->add_flag("--no-prune", mc_no_prune, "Disable pruning");
  mon->add_option("--max-nodes", mc_max_nodes, "Per-trial node budget");
  mon->add_option("--rank-tol", mc.rank_tol, "Kernel tolerance (nullspace_check)");
  mon->add_option("--stability-tol", mc.stability_tol, "Error bound at the top SNR (snr_sweep)");
  mon->add_option("--json", mc_json, "Report path (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "unlabeled: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front())
      err << sub->help();
    return kUsage;
  }

  try {
    if (*gen) {
      const Mat a = gen_matrix(gen_m, gen_k, parse_distribution(gen_dist), gen_seed);
      detail::emit_text(gen_out, detail::matrix_csv(a), out);
    } else if (*meas) {
      const Mat a = csv::read_matrix_file(ms_a);
      const Vec x = csv::read_vector_file(ms_x);
      if (x.size() != a.cols())
        throw DimensionError(ms_x + ": signal has " + std::to_string(x.size()) + " entries but " +
                             ms_a + " has " + std::to_string(a.cols()) + " columns");
      const Selection sel = parse_selection(ms_picks, static_cast<std::size_t>(a.rows()));
      const NoiseSpec noise = ms_snr ? NoiseSpec::gaussian(*ms_snr) : NoiseSpec::none();
      const Instance inst = measure(a, x, sel, noise, ms_seed);
      detail::emit_text(ms_out, detail::matrix_csv(Mat(inst.y)), out);
    } else if (*rec) {
      const Mat a = csv::read_matrix_file(rc_a);
      const Vec y = csv::read_vector_file(rc_y);
      if (y.size() > a.rows() || y.size() < a.cols())
        throw DimensionError(rc_y + ": " + std::to_string(y.size()) + " measurements do not fit " +
                             rc_a + " (" + std::to_string(a.rows()) + " x " +
                             std::to_string(a.cols()) + "); need cols <= n <= rows");
      rc_cfg.first_hit = rc_first_hit;
      rc_cfg.prune = !rc_no_prune;
      rc_cfg.max_nodes = rc_max_nodes;
      const RecoveryReport r = solve(a, y, rc_cfg);
      detail::emit_json(rc_json, recovery_json(r), out);
      if (r.status != RecoveryStatus::unique) code = kContractFailed;
    } else if (*rob) {
      const Mat a = csv::read_matrix_file(rb_a);
      const Vec y = csv::read_vector_file(rb_y);
      detail::emit_json(rb_json, robust_json(robust_recover(a, y, rb_n)), out);
    } else if (*cyc) {
      const Selection t = parse_selection(cy_true, cy_m);
      const Selection c = parse_selection(cy_cand, cy_m);
      detail::emit_json(cy_json, cycles_json(decompose(t, c)), out);
    } else if (*adv) {
      const Mat b = gen_matrix(ad_n, ad_k, parse_distribution(ad_dist), ad_seed);
      json j;
      j["schema_version"] = kSchemaVersion;
      j["k"] = ad_k;
      j["n"] = ad_n;
      j["seed"] = ad_seed;
      j["b"] = mat_json(b);
      try {
        const AmbiguousPair p = construct_ambiguous_pair(b);
        j["status"] = "ambiguous_pair";
        const json pj = pair_json(p);
        for (const auto& [key, value] : pj.items()) j[key] = value;
      } catch (const DegenerateInstance& e) {
        j["status"] = "degenerate";
        j["message"] = e.what();
        code = kContractFailed;
      }
      detail::emit_json(ad_json, j, out);
    } else if (*mon) {
      mc.kind = parse_experiment_kind(mc_kind);
      if (mon->count("--m") == 0) mc.m = mc.n;
      mc.dist = parse_distribution(mc_dist);
      mc.solve.prune = !mc_no_prune;
      mc.solve.max_nodes = mc_max_nodes;
      if (!mc_snrs.empty()) mc.snrs = detail::parse_snr_list(mc_snrs);
      const ExperimentReport rep = run_experiment(mc);
      detail::emit_json(mc_json, report_json(rep), out);
      if (rep.successes != rep.trials.size()) code = kContractFailed;
    }
  } catch (const Error& e) {
    err << "unlabeled: " << e.what() << "\n";
    return kUsage;
  }
  return code;
}

inline int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace unlabeled::cli
