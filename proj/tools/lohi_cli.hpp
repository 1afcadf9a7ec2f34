#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "lohi/lohi.hpp"

namespace lohi::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInfeasible = 2, kTimeBudget = 3 };

namespace detail {

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

inline void emit(const std::string& path, const std::string& text, std::ostream& stdout_) {
  if (path.empty() || path == "-") stdout_ << text;
  else write_text(path, text);
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct FingerprintOptions {
  int radius = 2;
  std::size_t nbits = 1024;
  std::string format = "auto";

  void add_to(CLI::App& app) {
    app.add_option("--radius", radius, "Morgan radius for smiles-csv input")->capture_default_str();
    app.add_option("--nbits", nbits, "Fingerprint width for smiles-csv input")->capture_default_str();
    app.add_option("--format", format, "Input format")
        ->check(CLI::IsMember({"auto", "smiles-csv", "fingerprint-csv"}))
        ->capture_default_str();
  }

  FingerprintConfig config() const { return {radius, nbits}; }

  Dataset load(const std::string& path) const {
    DatasetFormat f;
    if (format == "smiles-csv") f = DatasetFormat::kSmilesCsv;
    else if (format == "fingerprint-csv") f = DatasetFormat::kFingerprintCsv;
    else f = detect_format(path);
    return load_dataset(path, f, config());
  }

  nlohmann::json to_json() const {
    return {{"radius", radius}, {"nbits", nbits}, {"format", format},
            {"hash", "splitmix64-combine v1"}};
  }
};

inline nlohmann::json input_provenance(const std::string& path) {
  return {{"path", path}, {"fnv1a64", hex64(fnv1a64(csv::read_file(path)))}};
}

inline void write_manifest_dir(const std::string& dir, const Dataset& ds, const SplitManifest& m,
                               const nlohmann::json& config) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < m.folds.size(); ++i) {
    const Fold& f = m.folds[i];
    const std::string suffix = std::to_string(i + 1) + ".csv";
    {
      std::ostringstream out;
      write_dataset(out, ds, f.train);
      write_text(dir + "/train_" + suffix, out.str());
    }
    std::ostringstream out;
    if (m.kind == "lo") {
      std::vector<std::size_t> rows;
      std::vector<std::string> labels;
      const auto& clusters = m.clusters.at(i);
      for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (std::size_t member : clusters[c].members) {
          if (member == clusters[c].center) continue;
          rows.push_back(member);
          labels.push_back(std::to_string(c));
        }
      }
      write_dataset(out, ds, rows, &labels);
    } else {
      write_dataset(out, ds, f.test);
    }
    write_text(dir + "/test_" + suffix, out.str());
  }
  nlohmann::json j = m.to_json(ds);
  j["config"] = config;
  write_text(dir + "/manifest.json", dump(j));
}

inline std::vector<std::uint64_t> fold_seeds(std::uint64_t seed, std::size_t folds) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < folds; ++i) seeds.push_back(seed + i);
  return seeds;
}

}  // namespace detail

inline std::string version_string() {
  return std::string(kToolName) + " " + kToolVersion + " (manifest format " +
         std::to_string(kManifestFormatVersion) + ", kcut json format " +
         std::to_string(kKCutJsonFormatVersion) + ", audit format " +
         std::to_string(kAuditFormatVersion) + ")";
}

// Parses argv and runs one subcommand. Exit codes: 0 success, 1 input error,
// 2 infeasible split, 3 time budget exhausted without a solution.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Leakage-controlled train/test splitting for molecular datasets", "lohi"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads for similarity graph construction")
      ->capture_default_str();

  // fingerprint
  auto* fp_cmd = app.add_subcommand("fingerprint", "Compute fingerprints and write fingerprint-csv");
  std::string fp_in, fp_out;
  detail::FingerprintOptions fp_opts;
  fp_cmd->add_option("--in", fp_in, "Input dataset")->required()->check(CLI::ExistingFile);
  fp_cmd->add_option("--out", fp_out, "Output CSV (default stdout)");
  fp_opts.add_to(*fp_cmd);

  // hi-split
  auto* hi_cmd = app.add_subcommand("hi-split", "Dissimilarity-constrained k-way split");
  std::string hi_in, hi_out, hi_edges;
  int hi_k = 3;
  double hi_threshold = kDefaultThreshold, hi_slack = kDefaultSlack;
  std::vector<double> hi_fractions;
  std::vector<Weight> hi_bounds;
  std::optional<double> hi_theta;
  std::optional<std::int64_t> hi_budget;
  std::optional<std::uint64_t> hi_nodes;
  std::uint64_t hi_seed = 0;
  detail::FingerprintOptions hi_fp;
  hi_cmd->add_option("--in", hi_in, "Input dataset")->required()->check(CLI::ExistingFile);
  hi_cmd->add_option("--out", hi_out, "Output directory")->required();
  hi_cmd->add_option("--k", hi_k, "Number of subsets")->capture_default_str()->check(CLI::Range(2, 62));
  hi_cmd->add_option("--threshold", hi_threshold, "Similarity threshold")->capture_default_str();
  auto* frac_opt = hi_cmd->add_option("--fractions", hi_fractions, "Target share per subset")->delimiter(',');
  hi_cmd->add_option("--bounds", hi_bounds, "Explicit lower bounds (molecules)")->delimiter(',')->excludes(frac_opt);
  hi_cmd->add_option("--slack", hi_slack, "Bound slack factor")->capture_default_str();
  hi_cmd->add_option("--theta", hi_theta, "Coarsening similarity cut (default: threshold)");
  hi_cmd->add_option("--time-budget-ms", hi_budget, "Solver wall-clock budget");
  hi_cmd->add_option("--node-limit", hi_nodes, "Solver node budget (deterministic)");
  hi_cmd->add_option("--seed", hi_seed, "Seed recorded in the manifest")->capture_default_str();
  hi_cmd->add_option("--edges", hi_edges, "Also write the similarity edge list CSV here");
  hi_fp.add_to(*hi_cmd);

  // greedy-split
  auto* gr_cmd = app.add_subcommand("greedy-split", "Random split, then drop leaking test molecules");
  std::string gr_in, gr_out;
  GreedySplitParams gr_params;
  detail::FingerprintOptions gr_fp;
  gr_cmd->add_option("--in", gr_in, "Input dataset")->required()->check(CLI::ExistingFile);
  gr_cmd->add_option("--out", gr_out, "Output directory")->required();
  gr_cmd->add_option("--threshold", gr_params.threshold)->capture_default_str();
  gr_cmd->add_option("--test-fraction", gr_params.test_fraction)->capture_default_str();
  gr_cmd->add_option("--seed", gr_params.seed)->capture_default_str();
  gr_fp.add_to(*gr_cmd);

  // lo-split
  auto* lo_cmd = app.add_subcommand("lo-split", "Extract similar-molecule test clusters");
  std::string lo_in, lo_out, lo_activity = "pki";
  LoSplitParams lo_params;
  std::optional<double> lo_std;
  std::optional<std::size_t> lo_max;
  std::size_t lo_folds = 1;
  detail::FingerprintOptions lo_fp;
  lo_cmd->add_option("--in", lo_in, "Input dataset with values")->required()->check(CLI::ExistingFile);
  lo_cmd->add_option("--out", lo_out, "Output directory")->required();
  lo_cmd->add_option("--threshold", lo_params.threshold)->capture_default_str();
  lo_cmd->add_option("--min-size", lo_params.min_size)->capture_default_str();
  lo_cmd->add_option("--max-clusters", lo_max, "Maximum clusters per fold (default unlimited)");
  auto* act_opt = lo_cmd->add_option("--activity", lo_activity, "Noise floor preset")
                      ->check(CLI::IsMember({"pki", "pic50"}))
                      ->capture_default_str();
  lo_cmd->add_option("--std-threshold", lo_std, "Explicit std threshold")->excludes(act_opt);
  lo_cmd->add_option("--folds", lo_folds, "Folds; fold i uses seed + i")->capture_default_str()->check(CLI::PositiveNumber);
  lo_cmd->add_option("--seed", lo_params.seed)->capture_default_str();
  lo_fp.add_to(*lo_cmd);

  // kcut-solve
  auto* kc_cmd = app.add_subcommand("kcut-solve", "Solve a balanced vertex k-cut problem JSON");
  std::string kc_problem, kc_out, kc_method = "bnb";
  std::optional<std::int64_t> kc_budget;
  std::optional<std::uint64_t> kc_nodes;
  kc_cmd->add_option("--problem", kc_problem, "Problem JSON")->required()->check(CLI::ExistingFile);
  kc_cmd->add_option("--out", kc_out, "Solution JSON (default stdout)");
  kc_cmd->add_option("--method", kc_method)->check(CLI::IsMember({"bnb", "brute", "greedy"}))->capture_default_str();
  kc_cmd->add_option("--time-budget-ms", kc_budget);
  kc_cmd->add_option("--node-limit", kc_nodes);

  // audit
  auto* au_cmd = app.add_subcommand("audit", "Nearest-neighbor leakage audit of a split");
  std::string au_train, au_test, au_out, au_hist;
  double au_threshold = kDefaultThreshold;
  detail::FingerprintOptions au_fp;
  au_cmd->add_option("--train", au_train)->required()->check(CLI::ExistingFile);
  au_cmd->add_option("--test", au_test)->required()->check(CLI::ExistingFile);
  au_cmd->add_option("--threshold", au_threshold)->capture_default_str();
  au_cmd->add_option("--out", au_out, "Report JSON (default stdout)");
  au_cmd->add_option("--histogram", au_hist, "Histogram CSV path");
  au_fp.add_to(*au_cmd);

  // metrics
  auto* me_cmd = app.add_subcommand("metrics", "PR AUC (hi) or mean per-cluster Spearman (lo)");
  std::string me_pred, me_mode = "hi", me_out;
  bool me_dummy = false;
  me_cmd->add_option("--predictions", me_pred)->required()->check(CLI::ExistingFile);
  me_cmd->add_option("--mode", me_mode)->check(CLI::IsMember({"hi", "lo"}))->capture_default_str();
  me_cmd->add_flag("--dummy", me_dummy, "Score the constant-prediction baseline instead");
  me_cmd->add_option("--out", me_out, "Result JSON (default stdout)");

  // circles
  auto* ci_cmd = app.add_subcommand("circles", "Greedy #Circles diversity count");
  std::string ci_in, ci_out;
  double ci_threshold = 0.5;
  detail::FingerprintOptions ci_fp;
  ci_cmd->add_option("--in", ci_in)->required()->check(CLI::ExistingFile);
  ci_cmd->add_option("--threshold", ci_threshold)->capture_default_str();
  ci_cmd->add_option("--out", ci_out, "Result JSON (default stdout)");
  ci_fp.add_to(*ci_cmd);

  // preprocess
  auto* pp_cmd = app.add_subcommand("preprocess", "Convert raw nM activities into a dataset");
  std::string pp_in, pp_out, pp_mode = "binary";
  detail::FingerprintOptions pp_fp;
  pp_cmd->add_option("--in", pp_in, "Raw CSV: smiles,value,relation")->required()->check(CLI::ExistingFile);
  pp_cmd->add_option("--out", pp_out, "Output smiles-csv (default stdout)");
  pp_cmd->add_option("--mode", pp_mode)->check(CLI::IsMember({"binary", "continuous"}))->capture_default_str();
  pp_fp.add_to(*pp_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*fp_cmd) {
      const Dataset ds = fp_opts.load(fp_in);
      std::ostringstream s;
      write_fingerprint_csv(s, ds);
      detail::emit(fp_out, s.str(), out);
    } else if (*hi_cmd) {
      const Dataset ds = hi_fp.load(hi_in);
      HiSplitParams p;
      p.threshold = hi_threshold;
      p.k = hi_k;
      if (!hi_bounds.empty()) p.bounds = hi_bounds;
      p.fractions = hi_fractions;
      p.slack = hi_slack;
      p.theta = hi_theta;
      if (hi_budget) p.time_budget = std::chrono::milliseconds(*hi_budget);
      p.node_limit = hi_nodes;
      p.threads = threads;
      p.seed = hi_seed;
      const SplitManifest m = hi_split(ds, p);
      nlohmann::json config = {{"subcommand", "hi-split"},
                               {"input", detail::input_provenance(hi_in)},
                               {"fingerprint", hi_fp.to_json()},
                               {"threads", threads}};
      detail::write_manifest_dir(hi_out, ds, m, config);
      if (!hi_edges.empty()) {
        std::ostringstream s;
        const auto fps = ds.fingerprints();
        build_neighborhood_graph(fps, hi_threshold, {true, threads}).write_edge_list(s);
        detail::write_text(hi_edges, s.str());
      }
      err << "hi-split: kept " << (ds.size() - m.removed.size()) << " of " << ds.size()
          << " molecules, removed " << m.removed.size() << "\n";
    } else if (*gr_cmd) {
      const Dataset ds = gr_fp.load(gr_in);
      const SplitManifest m = greedy_split(ds, gr_params);
      nlohmann::json config = {{"subcommand", "greedy-split"},
                               {"input", detail::input_provenance(gr_in)},
                               {"fingerprint", gr_fp.to_json()}};
      detail::write_manifest_dir(gr_out, ds, m, config);
      err << "greedy-split: removed " << m.removed.size() << " of " << ds.size() << " molecules\n";
    } else if (*lo_cmd) {
      const Dataset ds = lo_fp.load(lo_in);
      lo_params.std_threshold = lo_std ? *lo_std : (lo_activity == "pic50" ? kStdThresholdPIC50 : kStdThresholdPKi);
      if (lo_max) lo_params.max_clusters = *lo_max;
      lo_params.threads = threads;
      const SplitManifest m = get_lo_split(ds, lo_params, detail::fold_seeds(lo_params.seed, lo_folds));
      nlohmann::json config = {{"subcommand", "lo-split"},
                               {"input", detail::input_provenance(lo_in)},
                               {"fingerprint", lo_fp.to_json()},
                               {"activity", lo_std ? "explicit" : lo_activity},
                               {"threads", threads}};
      detail::write_manifest_dir(lo_out, ds, m, config);
    } else if (*kc_cmd) {
      nlohmann::json pj;
      try {
        pj = nlohmann::json::parse(csv::read_file(kc_problem));
      } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("invalid problem JSON: ") + e.what());
      }
      KCutProblem p = kcut_problem_from_json(pj);
      if (kc_budget) p.time_budget = std::chrono::milliseconds(*kc_budget);
      if (kc_nodes) p.node_limit = *kc_nodes;
      KCutSolution s;
      if (kc_method == "brute") s = brute_force_kcut(p);
      else if (kc_method == "greedy") s = greedy_kcut(p);
      else s = solve_balanced_kcut(p);
      nlohmann::json j = kcut_solution_to_json(p, s);
      j["method"] = kc_method;
      detail::emit(kc_out, detail::dump(j), out);
    } else if (*au_cmd) {
      const Dataset train = au_fp.load(au_train);
      const Dataset test = au_fp.load(au_test);
      const auto tr = train.fingerprints();
      const auto te = test.fingerprints();
      const AuditReport r = audit_split(tr, te, au_threshold);
      nlohmann::json j = audit_to_json(r, train, test);
      j["config"] = {{"subcommand", "audit"},
                     {"train", detail::input_provenance(au_train)},
                     {"test", detail::input_provenance(au_test)},
                     {"fingerprint", au_fp.to_json()}};
      detail::emit(au_out, detail::dump(j), out);
      if (!au_hist.empty()) {
        std::ostringstream s;
        r.write_histogram_csv(s);
        detail::write_text(au_hist, s.str());
      }
    } else if (*me_cmd) {
      const PredictionTable t = load_predictions(me_pred);
      nlohmann::json j = {{"mode", me_mode}, {"dummy", me_dummy}};
      if (me_mode == "hi") {
        j["metric"] = "pr_auc";
        j["value"] = me_dummy ? dummy_baseline(t, MetricMode::kHi) : pr_auc(t);
      } else {
        j["metric"] = "mean_cluster_spearman";
        if (me_dummy) {
          j["value"] = dummy_baseline(t, MetricMode::kLo);
        } else {
          const ClusterSpearman cs = cluster_spearman(t);
          j["value"] = cs.mean;
          j["per_cluster"] = cs.per_cluster;
        }
      }
      detail::emit(me_out, detail::dump(j), out);
    } else if (*ci_cmd) {
      const Dataset ds = ci_fp.load(ci_in);
      const auto fps = ds.fingerprints();
      const auto reps = circle_representatives(fps, ci_threshold);
      nlohmann::json ids = nlohmann::json::array();
      for (std::size_t r : reps) ids.push_back(ds[r].id);
      nlohmann::json j = {{"threshold", ci_threshold},
                          {"n_molecules", ds.size()},
                          {"n_circles", reps.size()},
                          {"representatives", ids}};
      detail::emit(ci_out, detail::dump(j), out);
    } else if (*pp_cmd) {
      const auto raw = load_raw_activity(pp_in);
      const Dataset ds = preprocess_activity(
          raw, pp_mode == "binary" ? ActivityMode::kBinary : ActivityMode::kContinuous, pp_fp.config());
      std::ostringstream s;
      write_dataset(s, ds);
      detail::emit(pp_out, s.str(), out);
      err << "preprocess: kept " << ds.size() << " of " << raw.size() << " rows\n";
    }
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const TimeBudgetError& e) {
    err << "error: " << e.what() << "\n";
    return kTimeBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}

}  // namespace lohi::cli
