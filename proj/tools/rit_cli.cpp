// rit: command-line front end for random intersection tree mining.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rit/dataset.hpp"
#include "rit/error.hpp"
#include "rit/minhash.hpp"
#include "rit/mining.hpp"
#include "rit/oracle.hpp"
#include "rit/pipeline.hpp"
#include "rit/planner.hpp"
#include "rit/tree.hpp"

namespace {

using namespace rit;

Pattern parse_pattern(const std::string& text) {
  IndexSet indices;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    std::size_t used = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ConfigError("bad pattern index '" + token + "'");
    indices.push_back(static_cast<Index>(value));
  }
  return Pattern::from_unsorted(std::move(indices));
}

std::vector<double> class_sparsities(const SparseDataset& ds, int label) {
  const auto rows = ds.class_rows(label);
  std::vector<double> delta(ds.p(), 0.0);
  for (auto row : rows)
    for (Index k : row) delta[k] += 1.0;
  for (auto& d : delta) d /= static_cast<double>(rows.size());
  return delta;
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  fn(out);
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random intersection trees: discover class-distinguishing interactions in sparse binary data"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset in tsv-sparse format");
  gen->require_subcommand(1);
  std::string gen_out;
  std::uint64_t gen_seed = 1;
  std::size_t ttt_noise = 0;
  double ttt_density = 0.5;
  auto* gen_ttt = gen->add_subcommand("tictactoe", "Tic-Tac-Toe endgames with a winner, plus noise columns");
  gen_ttt->add_option("--noise", ttt_noise, "Number of noise variables")->capture_default_str();
  gen_ttt->add_option("--density", ttt_density, "Noise activation probability")->capture_default_str();
  gen_ttt->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen_ttt->add_option("--out", gen_out, "Output file (default stdout)");
  std::size_t pl_p = 50, pl_n1 = 1000, pl_n0 = 1000;
  double pl_qz = 0.5;
  auto* gen_pl = gen->add_subcommand("planted", "Data with the interaction {0,1} planted in class 1");
  gen_pl->add_option("--p", pl_p, "Number of variables")->capture_default_str();
  gen_pl->add_option("--n1", pl_n1, "Class-1 observations")->capture_default_str();
  gen_pl->add_option("--n0", pl_n0, "Class-0 observations")->capture_default_str();
  gen_pl->add_option("--qz", pl_qz, "Per-variable activation probability")->capture_default_str();
  gen_pl->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen_pl->add_option("--out", gen_out, "Output file (default stdout)");

  // plan
  auto* plan = app.add_subcommand("plan", "Choose branching, depth and tree count for a target recovery probability");
  PlanInputs plan_in;
  double plan_delta = 0.0;
  std::string plan_data;
  plan->add_option("--p", plan_in.p, "Number of variables")->required();
  plan->add_option("--theta1", plan_in.theta1, "Assumed class-1 prevalence of the target")->capture_default_str();
  plan->add_option("--nu", plan_in.nu, "Assumed max conditional prevalence of other variables")->capture_default_str();
  plan->add_option("--eta", plan_in.eta, "Allowed failure probability")->capture_default_str();
  plan->add_option("--q", plan_in.q, "Branching fixed point")->capture_default_str();
  auto* delta_opt = plan->add_option("--delta", plan_delta, "Uniform variable sparsity for the work bound")->capture_default_str();
  plan->add_option("--data", plan_data, "Take class-1 sparsities from this dataset")->excludes(delta_opt);

  // mine
  auto* mine_cmd = app.add_subcommand("mine", "Grow intersection trees, verify and rank patterns");
  RitConfig cfg;
  std::string mine_data, mine_out;
  int mine_class = 1;
  std::size_t fixed_depth = 0, max_depth = 64;
  std::uint64_t node_budget = 10'000'000;
  bool recursive = false, no_early_stop = false, no_single_child_root = false, raw = false;
  unsigned threads = 1;
  mine_cmd->add_option("--data", mine_data, "Input dataset (tsv-sparse)")->required();
  mine_cmd->add_option("--class", mine_class, "Target class")->check(CLI::IsMember({0, 1}))->capture_default_str();
  mine_cmd->add_option("--theta0", cfg.theta0, "Max prevalence in the other class")->capture_default_str();
  mine_cmd->add_option("--theta1", cfg.theta1, "Min prevalence in the target class")->required();
  mine_cmd->add_option("--trees", cfg.trees, "Number of trees")->capture_default_str();
  mine_cmd->add_option("--branch", cfg.branch, "Base child count per node")->capture_default_str();
  mine_cmd->add_option("--branch-alpha", cfg.branch_alpha, "Probability of one extra child")->capture_default_str();
  auto* depth_opt = mine_cmd->add_option("--depth", fixed_depth, "Fixed tree depth");
  mine_cmd->add_flag("--recursive", recursive, "Grow until every branch stops (default)")->excludes(depth_opt);
  mine_cmd->add_option("--max-depth", max_depth, "Depth cap in recursive mode")->capture_default_str();
  mine_cmd->add_option("--node-budget", node_budget, "Per-tree node limit in recursive mode")->capture_default_str();
  mine_cmd->add_option("--hash-perms", cfg.hash_permutations, "Min-hash permutations for early stopping")->capture_default_str();
  mine_cmd->add_option("--min-tree-count", cfg.min_tree_count, "Drop patterns found by fewer trees")->capture_default_str();
  mine_cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  mine_cmd->add_flag("--no-early-stop", no_early_stop, "Never prune branches");
  mine_cmd->add_flag("--no-single-child-root", no_single_child_root, "Give the root the full child count");
  mine_cmd->add_flag("--raw", raw, "Skip exact verification; rank every candidate");
  mine_cmd->add_option("--threads", threads, "Worker threads")->capture_default_str();
  mine_cmd->add_option("--out", mine_out, "JSON-lines output (default stdout)");

  // classify
  auto* classify = app.add_subcommand("classify", "Fit the log-odds pattern classifier and report test error");
  std::string train_path, test_path;
  std::vector<std::string> pattern_paths;
  classify->add_option("--train", train_path, "Training dataset")->required();
  classify->add_option("--test", test_path, "Test dataset")->required();
  classify->add_option("--patterns", pattern_paths, "JSON-lines pattern files (repeatable)")->required();

  // hashcheck
  auto* hashcheck = app.add_subcommand("hashcheck", "Compare min-hash prevalence estimates with exact values");
  std::string hc_data, hc_pattern, hc_dump;
  int hc_class = 0;
  std::size_t hc_perms = 200, hc_mc = 100;
  std::uint64_t hc_seed = 1;
  hashcheck->add_option("--data", hc_data, "Input dataset")->required();
  hashcheck->add_option("--class", hc_class, "Class to hash")->check(CLI::IsMember({0, 1}))->capture_default_str();
  hashcheck->add_option("--perms", hc_perms, "Hash permutations")->capture_default_str();
  hashcheck->add_option("--pattern", hc_pattern, "Comma separated indices")->required();
  hashcheck->add_option("--mc", hc_mc, "Matrix redraws")->capture_default_str();
  hashcheck->add_option("--seed", hc_seed, "Random seed")->capture_default_str();
  hashcheck->add_option("--dump", hc_dump, "Write the first hash matrix in binary form");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive pattern search (small inputs only)");
  std::string or_data;
  std::size_t or_max = 3;
  double or_theta0 = 0.1, or_theta1 = 0.5;
  oracle_cmd->add_option("--data", or_data, "Input dataset")->required();
  oracle_cmd->add_option("--max-size", or_max, "Largest pattern size")->capture_default_str();
  oracle_cmd->add_option("--theta0", or_theta0, "Max class-0 prevalence")->capture_default_str();
  oracle_cmd->add_option("--theta1", or_theta1, "Min class-1 prevalence")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_ttt) {
      const auto ds = generate_tictactoe(ttt_noise, ttt_density, gen_seed);
      with_output(gen_out, [&](std::ostream& os) { write_tsv_sparse(os, ds); });
    } else if (*gen_pl) {
      const auto ds = generate_planted(pl_p, pl_n1, pl_n0, pl_qz, gen_seed);
      with_output(gen_out, [&](std::ostream& os) { write_tsv_sparse(os, ds); });
    } else if (*plan) {
      std::vector<double> delta;
      if (!plan_data.empty()) {
        const auto ds = load_dataset(plan_data);
        if (ds.p() != plan_in.p) throw ConfigError("--p does not match the dataset");
        delta = class_sparsities(ds, 1);
      } else {
        delta.assign(plan_in.p, plan_delta);
      }
      const auto result = make_plan(plan_in, delta);
      std::cout << std::setprecision(6) << "parameter      value\n"
                << "b              " << result.branching.b << '\n'
                << "alpha          " << result.branching.alpha << '\n'
                << "mean_branch    " << static_cast<double>(result.branching.b) + result.branching.alpha << '\n'
                << "depth          " << result.depth << '\n'
                << "trees          " << result.trees << '\n'
                << "epsilon        " << std::min(1.0, plan_in.epsilon()) << '\n'
                << "work_bound     " << result.bound << '\n';
    } else if (*mine_cmd) {
      cfg.early_stopping = !no_early_stop;
      cfg.single_child_root = !no_single_child_root;
      if (fixed_depth > 0) {
        cfg.depth = FixedDepth{fixed_depth};
      } else {
        cfg.depth = Recursive{max_depth, node_budget};
      }
      const auto ds = load_dataset(mine_data);
      const auto report = raw ? mine_unverified(ds, mine_class, cfg, threads) : mine(ds, mine_class, cfg, threads);
      with_output(mine_out, [&](std::ostream& os) { write_jsonl(os, report.data, report.ranked); });
      write_stats(std::cerr, report);
    } else if (*classify) {
      const auto train = load_dataset(train_path);
      const auto test = load_dataset(test_path);
      std::vector<Pattern> patterns;
      for (const auto& path : pattern_paths) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open " + path);
        auto more = read_patterns_jsonl(in);
        patterns.insert(patterns.end(), more.begin(), more.end());
      }
      if (patterns.empty()) throw DataError("pattern file is empty");
      std::sort(patterns.begin(), patterns.end());
      patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());
      const auto model = fit_classifier(train, patterns);
      const auto train_ev = evaluate(model, train);
      const auto test_ev = evaluate(model, test);
      std::cout << "patterns           " << patterns.size() << '\n'
                << "decision_offset    " << model.decision_offset << '\n'
                << "train_error        " << train_ev.error << '\n'
                << "test_n             " << test_ev.n << '\n'
                << "test_error         " << test_ev.error << '\n'
                << "test_error_class0  " << test_ev.error_class0 << '\n'
                << "test_error_class1  " << test_ev.error_class1 << '\n';
    } else if (*hashcheck) {
      const auto ds = load_dataset(hc_data);
      const auto pattern = parse_pattern(hc_pattern);
      if (!hc_dump.empty()) {
        const auto h = build_hash_matrix(ds, hc_class, hc_perms, hc_seed);
        std::ofstream out(hc_dump, std::ios::binary);
        if (!out) throw DataError("cannot write " + hc_dump);
        write_hash_matrix(out, h);
      }
      const auto check = hash_check(ds, hc_class, pattern, hc_perms, hc_mc, hc_seed);
      std::cout << std::setprecision(6) << "pattern        " << pattern << '\n'
                << "exact          " << check.exact << '\n'
                << "pi1            " << check.pi1 << '\n'
                << "pi2            " << check.pi2 << '\n'
                << "estimate       " << check.estimate << '\n'
                << "estimate_pi1   " << check.estimate_pi1 << '\n'
                << "estimate_pi2   " << check.estimate_pi2 << '\n'
                << "mc_redraws     " << check.redraws << '\n'
                << "mc_mean        " << check.mc_mean << '\n'
                << "mc_sd          " << check.mc_sd << '\n'
                << "theory_sd      " << check.theory_sd << '\n'
                << "subsample_sd   " << check.subsample_sd << '\n';
    } else if (*oracle_cmd) {
      const auto ds = load_dataset(or_data);
      for (const auto& pattern : oracle::brute_force_patterns(ds, or_max, or_theta0, or_theta1)) {
        nlohmann::ordered_json line;
        line["pattern"] = IndexSet(pattern.begin(), pattern.end());
        line["prev1"] = exact_prevalence(ds, pattern, ClassSelector::kClass1);
        line["prev0"] = exact_prevalence(ds, pattern, ClassSelector::kClass0);
        std::cout << line.dump() << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "rit: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
