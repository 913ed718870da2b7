// Copyright 2026 The policy_tree Authors.
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

#include "policy_tree/cli.h"

#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "policy_tree/bounded_search.h"
#include "policy_tree/exhaustive_search.h"
#include "policy_tree/io.h"
#include "policy_tree/simulation.h"

namespace policy_tree {
namespace {

using nlohmann::ordered_json;

class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Strategy {
  std::string method = "auto";
  bool no_cache = false;
  bool no_bounds = false;
  bool no_perfect = false;
};

struct Flags {
  std::string covariates;
  std::string rewards;
  std::string tree;
  std::string out;
  std::string stats;
  std::size_t depth = 2;
  Strategy strategy;
  std::uint64_t seed = 1;
  std::size_t n = 1000;
  std::size_t p = 10;
  std::size_t m = 2;
  std::string kind = "continuous";
  double noise = 1.0;
  std::size_t reps = 1;
  std::string format = "json";
  std::vector<std::string> variants;
};

const char* method_name(SetMethod method) {
  return method == SetMethod::kSortedFamily ? "method1" : "method2";
}

SearchOptions to_options(const Strategy& s) {
  SearchOptions options;
  options.use_cache = !s.no_cache;
  options.use_bounds = !s.no_bounds;
  options.perfect_exit = !s.no_perfect;
  if (s.method == "method1") options.method = SetMethod::kSortedFamily;
  if (s.method == "method2") options.method = SetMethod::kSingleSet;
  return options;
}

ordered_json strategy_json(const Strategy& s, const Dataset& ds) {
  SearchOptions options = to_options(s);
  ordered_json out;
  out["method"] = method_name(options.method.value_or(choose_method(ds)));
  out["bounds"] = options.use_bounds;
  out["cache"] = options.use_cache;
  out["perfect_exit"] = options.perfect_exit;
  return out;
}

// Strategy presets accepted by bench --variants.
std::optional<Strategy> preset(const std::string& name, const Strategy& configured) {
  if (name == "configured") return configured;
  if (name == "bounded") return Strategy{};
  if (name == "method1") return Strategy{.method = "method1"};
  if (name == "method2") return Strategy{.method = "method2"};
  if (name == "no-bounds") return Strategy{.no_bounds = true};
  if (name == "no-cache") return Strategy{.no_cache = true};
  if (name == "baseline") return Strategy{.method = "method1", .no_cache = true, .no_bounds = true};
  return std::nullopt;
}

std::string reward_line(double reward) { return "reward " + format_double(reward) + "\n"; }

SimConfig sim_config(const Flags& f, std::uint64_t seed) {
  return {.n = f.n,
          .p = f.p,
          .kind = f.kind == "discrete" ? CovariateKind::kDiscrete : CovariateKind::kContinuous,
          .m = f.m,
          .depth = f.depth,
          .noise_half_width = f.noise,
          .seed = seed};
}

int cmd_train(const Flags& f, std::ostream& out) {
  Dataset ds = load_csv(f.covariates, f.rewards);
  SearchStats stats;
  Solution s = train(ds, f.depth, to_options(f.strategy), &stats);
  const double reward = ds.to_real(s.reward);
  std::string tree = tree_to_json(s.tree) + "\n";

  std::vector<std::pair<std::filesystem::path, std::string>> files;
  if (!f.out.empty()) files.emplace_back(f.out, tree);
  if (!f.stats.empty()) {
    ordered_json doc;
    doc["n"] = ds.num_units();
    doc["p"] = ds.num_covariates();
    doc["m"] = ds.num_actions();
    doc["depth"] = f.depth;
    doc["strategy"] = strategy_json(f.strategy, ds);
    doc["reward"] = reward;
    doc["tree"] = tree_to_json_value(s.tree);
    doc["stats"] = stats_to_json(stats);
    files.emplace_back(f.stats, doc.dump(2) + "\n");
  }
  write_files_atomically(files);
  if (f.out.empty()) out << tree;
  out << reward_line(reward);
  return kExitOk;
}

int cmd_predict(const Flags& f, std::ostream& out) {
  PolicyTree tree = tree_from_json(read_text_file(f.tree));
  std::optional<Dataset> ds;
  NumericTable x;
  if (!f.rewards.empty()) {
    ds = load_csv(f.covariates, f.rewards);
  } else {
    x = read_numeric_csv(f.covariates, "x");
  }
  const std::size_t n = ds ? ds->num_units() : x.rows;
  const std::size_t p = ds ? ds->num_covariates() : x.header.size();
  const std::size_t m = ds ? ds->num_actions() : std::numeric_limits<std::uint32_t>::max();
  if (!is_valid_tree(tree, p, m, std::numeric_limits<std::size_t>::max())) {
    throw DataError("tree does not fit the data: covariate or action index out of range");
  }
  std::vector<std::uint32_t> actions(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = ds ? ds->covariate_row(static_cast<UnitIndex>(i))
                  : std::span<const double>(x.cells.data() + i * p, p);
    actions[i] = assign_action(tree, row);
  }
  std::string csv = column_to_csv("action", actions);

  std::optional<double> reward;
  if (ds) {
    Reward sum{};
    for (std::size_t i = 0; i < n; ++i) sum += ds->exact_reward(static_cast<UnitIndex>(i), actions[i]);
    reward = ds->to_real(sum);
  }
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  if (!f.out.empty()) files.emplace_back(f.out, csv);
  if (!f.stats.empty()) {
    ordered_json doc;
    doc["n"] = n;
    if (reward) doc["reward"] = *reward;
    files.emplace_back(f.stats, doc.dump(2) + "\n");
  }
  write_files_atomically(files);
  if (f.out.empty()) {
    out << csv;
  } else if (reward) {
    out << reward_line(*reward);
  }
  return kExitOk;
}

int cmd_simulate(const Flags& f, std::ostream& out) {
  SimDataset sim = generate(sim_config(f, f.seed));
  std::filesystem::path dir(f.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<double> y = sim.y;
  write_files_atomically({
      {dir / "covariates.csv", matrix_to_csv("x", sim.x, sim.p)},
      {dir / "treatment.csv", column_to_csv("w", sim.w)},
      {dir / "outcome.csv", matrix_to_csv("y", y, 1)},
      {dir / "rewards.csv", matrix_to_csv("a", sim.scores, sim.m)},
  });
  out << "wrote " << sim.n << " units to " << dir.string() << "\n";
  return kExitOk;
}

struct VariantRuns {
  std::string name;
  Strategy strategy;
  std::vector<double> values;
  std::vector<double> times;
  ordered_json runs = ordered_json::array();
  ordered_json describe;
};

int cmd_bench(const Flags& f, std::ostream& out) {
  std::vector<VariantRuns> variants;
  std::vector<std::string> names = f.variants;
  if (names.empty()) names.push_back("configured");
  for (const std::string& name : names) {
    auto s = preset(name, f.strategy);
    if (!s) throw CLI::ValidationError("--variants", "unknown variant " + name);
    VariantRuns v;
    v.name = name;
    v.strategy = *s;
    variants.push_back(std::move(v));
  }
  for (std::size_t rep = 0; rep < f.reps; ++rep) {
    const std::uint64_t seed = derive_seed(f.seed, rep);
    SimDataset sim = generate(sim_config(f, seed));
    Dataset ds = to_dataset(sim);
    for (VariantRuns& v : variants) {
      SearchStats stats;
      Solution s = train(ds, f.depth, to_options(v.strategy), &stats);
      const double value = policy_value(s.tree, sim);
      v.values.push_back(value);
      v.times.push_back(stats.elapsed_seconds);
      if (v.describe.is_null()) v.describe = strategy_json(v.strategy, ds);
      ordered_json run;
      run["rep"] = rep;
      run["seed"] = seed;
      run["reward"] = ds.to_real(s.reward);
      run["policy_value"] = value;
      run["stats"] = stats_to_json(stats);
      v.runs.push_back(std::move(run));
    }
  }

  ordered_json report;
  report["instance"] = {{"n", f.n}, {"p", f.p},       {"m", f.m},       {"depth", f.depth},
                        {"kind", f.kind}, {"reps", f.reps}, {"seed", f.seed}};
  report["variants"] = ordered_json::array();
  std::string csv =
      "variant,rep,seed,reward,policy_value,subproblems,splits_evaluated,bound_prunes,"
      "cache_hits,cache_misses,perfect_exits,elapsed_seconds,time_mean,time_sd,value_rmse\n";
  for (VariantRuns& v : variants) {
    double mean = 0;
    for (double t : v.times) mean += t;
    mean /= static_cast<double>(v.times.size());
    double ss = 0;
    for (double t : v.times) ss += (t - mean) * (t - mean);
    const double sd = v.times.size() > 1 ? std::sqrt(ss / static_cast<double>(v.times.size() - 1)) : 0.0;
    const double value_rmse = rmse(v.values, variants.front().values);

    ordered_json entry;
    entry["name"] = v.name;
    entry["strategy"] = v.describe;
    entry["time_mean"] = mean;
    entry["time_sd"] = sd;
    entry["value_rmse_vs_first"] = value_rmse;
    entry["runs"] = v.runs;
    for (const ordered_json& run : v.runs) {
      const ordered_json& st = run["stats"];
      std::ostringstream row;
      row << v.name << ',' << run["rep"].get<std::size_t>() << ',' << run["seed"].get<std::uint64_t>()
          << ',' << format_double(run["reward"].get<double>()) << ','
          << format_double(run["policy_value"].get<double>());
      for (const char* key : {"subproblems", "splits_evaluated", "bound_prunes", "cache_hits",
                              "cache_misses", "perfect_exits"}) {
        row << ',' << st[key].get<std::uint64_t>();
      }
      row << ',' << format_double(st["elapsed_seconds"].get<double>()) << ','
          << format_double(mean) << ',' << format_double(sd) << ',' << format_double(value_rmse)
          << '\n';
      csv += row.str();
    }
    report["variants"].push_back(std::move(entry));
  }
  std::string text = f.format == "csv" ? csv : report.dump(2) + "\n";
  if (f.out.empty()) {
    out << text;
  } else {
    write_files_atomically({{f.out, text}});
  }
  return kExitOk;
}

// Checks every strategy combination against the exhaustive search.
void verify_instance(const Dataset& ds, std::size_t depth, const std::string& label) {
  auto units = all_units(ds);
  const Reward want = search_exhaustive(ds, units, depth).reward;
  for (SetMethod method : {SetMethod::kSortedFamily, SetMethod::kSingleSet}) {
    for (int mask = 0; mask < 8; ++mask) {
      SearchOptions options;
      options.method = method;
      options.use_bounds = mask & 1;
      options.use_cache = mask & 2;
      options.perfect_exit = mask & 4;
      const Reward got = search_bounded(ds, units, depth, options).reward;
      if (got != want) {
        throw VerificationError(label + ": " + method_name(method) + " bounds=" +
                                std::to_string(options.use_bounds) +
                                " cache=" + std::to_string(options.use_cache) + " reward " +
                                format_double(ds.to_real(got)) + " != exhaustive " +
                                format_double(ds.to_real(want)));
      }
    }
  }
}

int cmd_verify(const Flags& f, std::ostream& out) {
  std::size_t checked = 0;
  if (!f.covariates.empty() || !f.rewards.empty()) {
    if (f.covariates.empty() || f.rewards.empty()) {
      throw CLI::ValidationError("verify", "--covariates and --rewards go together");
    }
    verify_instance(load_csv(f.covariates, f.rewards), f.depth, f.covariates);
    checked = 1;
  } else {
    for (std::size_t rep = 0; rep < f.reps; ++rep) {
      const std::uint64_t seed = derive_seed(f.seed, rep);
      SimDataset sim = generate(sim_config(f, seed));
      verify_instance(to_dataset(sim), f.depth, "seed " + std::to_string(seed));
      ++checked;
    }
  }
  out << "verified " << checked << " instance(s) at depth " << f.depth << "\n";
  return kExitOk;
}

void add_strategy_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--method", f.strategy.method, "Unit-set layout")
      ->check(CLI::IsMember({"auto", "method1", "method2"}));
  cmd->add_flag("--no-cache", f.strategy.no_cache, "Disable the subtree cache");
  cmd->add_flag("--no-bounds", f.strategy.no_bounds, "Disable bound pruning");
  cmd->add_flag("--no-perfect", f.strategy.no_perfect, "Disable the perfect-tree exit");
}

void add_depth_flag(CLI::App* cmd, Flags& f) {
  cmd->add_option("--depth", f.depth, "Maximum tree depth")->check(CLI::Range(1, 64));
}

void add_sim_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--n", f.n, "Number of units")->check(CLI::Range(1, 100'000'000));
  cmd->add_option("--p", f.p, "Number of covariates (>= 3)")->check(CLI::Range(3, 100'000));
  cmd->add_option("--m", f.m, "Number of treatments (>= 2)")->check(CLI::Range(2, 100'000));
  cmd->add_option("--kind", f.kind, "Covariate distribution")
      ->check(CLI::IsMember({"continuous", "discrete"}));
  cmd->add_option("--noise", f.noise, "Half-width of the uniform outcome noise")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact depth-limited policy tree learner", "ptree"};
  app.require_subcommand(1);
  Flags tf, pf, sf, bf, vf;
  vf.n = 20;
  vf.p = 3;
  vf.reps = 50;

  CLI::App* train_cmd = app.add_subcommand("train", "Fit an optimal tree");
  train_cmd->add_option("--covariates", tf.covariates, "Covariate CSV (x1..xp)")->required();
  train_cmd->add_option("--rewards", tf.rewards, "Reward CSV (a1..am)")->required();
  add_depth_flag(train_cmd, tf);
  add_strategy_flags(train_cmd, tf);
  train_cmd->add_option("--out", tf.out, "Tree JSON output (default stdout)");
  train_cmd->add_option("--stats", tf.stats, "Search statistics JSON output");

  CLI::App* predict_cmd = app.add_subcommand("predict", "Assign actions with a tree");
  predict_cmd->add_option("--tree", pf.tree, "Tree JSON")->required();
  predict_cmd->add_option("--covariates", pf.covariates, "Covariate CSV")->required();
  predict_cmd->add_option("--rewards", pf.rewards, "Reward CSV; reports the achieved reward");
  predict_cmd->add_option("--out", pf.out, "Action CSV output (default stdout)");
  predict_cmd->add_option("--stats", pf.stats, "Reward JSON output");

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic benchmark");
  add_sim_flags(simulate_cmd, sf);
  simulate_cmd->add_option("--out", sf.out, "Output directory")->required();

  CLI::App* bench_cmd = app.add_subcommand("bench", "Time search strategies on simulated data");
  add_sim_flags(bench_cmd, bf);
  add_depth_flag(bench_cmd, bf);
  add_strategy_flags(bench_cmd, bf);
  bench_cmd->add_option("--reps", bf.reps, "Repetitions")->check(CLI::Range(1, 1'000'000));
  bench_cmd->add_option("--variants", bf.variants,
                        "Strategies: configured, bounded, method1, method2, no-bounds, "
                        "no-cache, baseline")
      ->delimiter(',');
  bench_cmd->add_option("--format", bf.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  bench_cmd->add_option("--out", bf.out, "Report output (default stdout)");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Cross-check against exhaustive search");
  verify_cmd->add_option("--covariates", vf.covariates, "Covariate CSV");
  verify_cmd->add_option("--rewards", vf.rewards, "Reward CSV");
  add_depth_flag(verify_cmd, vf);
  add_sim_flags(verify_cmd, vf);
  verify_cmd->add_option("--reps", vf.reps, "Simulated instances")->check(CLI::Range(1, 1'000'000));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (train_cmd->parsed()) return cmd_train(tf, out);
    if (predict_cmd->parsed()) return cmd_predict(pf, out);
    if (simulate_cmd->parsed()) return cmd_simulate(sf, out);
    if (bench_cmd->parsed()) return cmd_bench(bf, out);
    return cmd_verify(vf, out);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::Error& e) {
    err << "ptree: " << e.what() << "\n";
    return kExitUsage;
  } catch (const VerificationError& e) {
    err << "ptree: verification failed: " << e.what() << "\n";
    return kExitVerification;
  } catch (const std::invalid_argument& e) {
    err << "ptree: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "ptree: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace policy_tree
