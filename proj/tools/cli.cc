// Copyright 2026 The amimort Authors
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

#include "cli.h"

#include <CLI11.hpp>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "amimort/cohort.h"
#include "amimort/cohort_summary.h"
#include "amimort/csv.h"
#include "amimort/error.h"
#include "amimort/keyvalue.h"
#include "amimort/nested_cv.h"
#include "amimort/report.h"

namespace amimort::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSeedEnv = "AMIMORT_SEED";

// Settings shared by all subcommands. Values come from defaults, then the
// --config file, then AMIMORT_SEED (seed only), then flags.
struct RunConfig {
  std::string data;
  std::string mapping;
  std::uint64_t seed = 20210121;
  int repeats = 10;
  int jobs = 1;
  std::string models = "rf,adaboost,gradboost,lr";
  std::string search;  // empty: per-model default
  std::uint64_t budget = 0;  // 0: per-model default
  bool fixed_params = false;
  double threshold = 0.5;
  std::string exclude_features;
  std::string out_dir = "results";
  bool unstratified = false;
  bool welch = false;
  bool no_yates = false;
  bool quiet = false;
  std::map<std::string, std::string> space_overrides;  // "rf.max_depth" -> "1,3"
};

// Flag values as parsed; applied only when the flag was given.
struct Flags {
  std::string config;
  RunConfig values;
  std::string matrix_dir;
};

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw ConfigError(origin + ": seed must be an unsigned 64-bit integer, got '" + text + "'");
  }
  return v;
}

bool parse_flag_value(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("config: " + key + " must be true or false");
}

int parse_int(const std::string& text, const std::string& key) {
  int v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) throw ConfigError("config: " + key + " must be an integer");
  return v;
}

void apply_config_file(RunConfig& rc, const fs::path& path) {
  const KeyValueFile kv = KeyValueFile::read(path);
  for (const auto& [key, value] : kv.entries()) {
    if (key == "data") rc.data = value;
    else if (key == "mapping") rc.mapping = value;
    else if (key == "seed") rc.seed = parse_seed(value, path.string());
    else if (key == "repeats") rc.repeats = parse_int(value, key);
    else if (key == "jobs") rc.jobs = parse_int(value, key);
    else if (key == "models") rc.models = value;
    else if (key == "search") rc.search = value;
    else if (key == "budget") rc.budget = parse_seed(value, key);
    else if (key == "fixed_params") rc.fixed_params = parse_flag_value(value, key);
    else if (key == "threshold") rc.threshold = std::stod(value);
    else if (key == "exclude_features") rc.exclude_features = value;
    else if (key == "out_dir") rc.out_dir = value;
    else if (key == "unstratified") rc.unstratified = parse_flag_value(value, key);
    else if (key == "welch") rc.welch = parse_flag_value(value, key);
    else if (key == "no_yates") rc.no_yates = parse_flag_value(value, key);
    else if (key.rfind("space.", 0) == 0) rc.space_overrides[key.substr(6)] = value;
    else throw ConfigError(path.string() + ": unknown key '" + key + "'");
  }
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  void add_common(CLI::App* cmd, bool training) {
    cmd->add_option("--config", flags_.config, "Flat key = value configuration file");
    cmd->add_option("--data", flags_.values.data, "Cohort CSV file");
    cmd->add_option("--mapping", flags_.values.mapping, "Column mapping file (default: built-in reference mapping)");
    cmd->add_option("--out-dir", flags_.values.out_dir, "Output directory");
    cmd->add_flag("--quiet,-q", flags_.values.quiet, "Suppress progress messages");
    if (!training) {
      cmd->add_flag("--welch", flags_.values.welch, "Welch t-test instead of pooled variance");
      cmd->add_flag("--no-yates", flags_.values.no_yates, "Chi-square without continuity correction");
      return;
    }
    cmd->add_option("--seed", flags_.values.seed, "Master seed (also " + std::string(kSeedEnv) + ")");
    cmd->add_option("--repeats", flags_.values.repeats, "Repetitions of the outer cross-validation");
    cmd->add_option("--jobs", flags_.values.jobs, "Worker threads (0 = all cores)");
    cmd->add_option("--models", flags_.values.models, "Comma-separated subset of rf,adaboost,gradboost,lr");
    cmd->add_option("--search", flags_.values.search, "Search mode for every model")
        ->check(CLI::IsMember({"exhaustive", "random"}));
    cmd->add_option("--budget", flags_.values.budget, "Candidates per inner search in random mode");
    cmd->add_flag("--fixed-params", flags_.values.fixed_params, "Use the reference optima, skip inner search");
    cmd->add_option("--threshold", flags_.values.threshold, "Score threshold for class predictions");
    cmd->add_option("--exclude-features", flags_.values.exclude_features, "Comma-separated features to drop");
    cmd->add_flag("--unstratified", flags_.values.unstratified, "Plain random folds");
  }

  RunConfig resolve(const CLI::App* cmd) const {
    RunConfig rc;
    if (!flags_.config.empty()) apply_config_file(rc, flags_.config);
    if (const char* env = std::getenv(kSeedEnv); env && *env) rc.seed = parse_seed(env, kSeedEnv);
    const RunConfig& f = flags_.values;
    auto given = [&](const char* name) { return cmd->get_option_no_throw(name) && cmd->count(name) > 0; };
    if (given("--data")) rc.data = f.data;
    if (given("--mapping")) rc.mapping = f.mapping;
    if (given("--out-dir")) rc.out_dir = f.out_dir;
    if (given("--quiet")) rc.quiet = true;
    if (given("--welch")) rc.welch = true;
    if (given("--no-yates")) rc.no_yates = true;
    if (given("--seed")) rc.seed = f.seed;
    if (given("--repeats")) rc.repeats = f.repeats;
    if (given("--jobs")) rc.jobs = f.jobs;
    if (given("--models")) rc.models = f.models;
    if (given("--search")) rc.search = f.search;
    if (given("--budget")) rc.budget = f.budget;
    if (given("--fixed-params")) rc.fixed_params = true;
    if (given("--threshold")) rc.threshold = f.threshold;
    if (given("--exclude-features")) rc.exclude_features = f.exclude_features;
    if (given("--unstratified")) rc.unstratified = true;
    if (rc.data.empty()) throw ConfigError("no dataset given (use --data or 'data' in the config file)");
    return rc;
  }

  CohortTable load(const RunConfig& rc) const {
    const SchemaMapping mapping = rc.mapping.empty() ? SchemaMapping::reference_default() : SchemaMapping::read(rc.mapping);
    return load_cohort(rc.data, mapping);
  }

  void log(const RunConfig& rc, const std::string& msg) const {
    if (!rc.quiet) err_ << msg << '\n';
  }

  int cohort_stats(const CLI::App* cmd) {
    const RunConfig rc = resolve(cmd);
    const CohortTable cohort = load(rc);
    SummaryOptions options;
    options.pooled_t = !rc.welch;
    options.yates = !rc.no_yates;
    const CohortSummary summary = cohort_summary(cohort, options);
    const std::string csv_text = render_summary_csv(summary);
    const std::string md = render_summary_markdown(summary);
    const fs::path dir = rc.out_dir;
    csv::write_atomic(dir / "cohort_summary.csv", csv_text);
    csv::write_atomic(dir / "cohort_summary.md", md);
    out_ << md;
    return 0;
  }

  NestedCvConfig cv_config(const RunConfig& rc, const CohortTable& cohort) const {
    NestedCvConfig config;
    config.algorithms.clear();
    for (const auto& name : split(rc.models, ',')) {
      const Algorithm a = parse_algorithm(name);
      if (std::find(config.algorithms.begin(), config.algorithms.end(), a) == config.algorithms.end()) {
        config.algorithms.push_back(a);
      }
    }
    config.seed = rc.seed;
    config.n_repeats = rc.repeats;
    config.jobs = rc.jobs;
    config.threshold = rc.threshold;
    config.folds.stratified = !rc.unstratified;
    for (Algorithm a : config.algorithms) {
      SearchSpace space = rc.fixed_params ? fixed_space(a) : default_space(a);
      std::map<std::string, std::string> overrides;
      const std::string prefix = std::string(to_string(a)) + ".";
      for (const auto& [k, v] : rc.space_overrides) {
        if (k.rfind(prefix, 0) == 0) overrides[k.substr(prefix.size())] = v;
      }
      if (!overrides.empty()) space = space.with_overrides(overrides);
      config.spaces.emplace(a, std::move(space));
      SearchSettings s = default_search(a);
      if (!rc.search.empty()) s.mode = parse_search_mode(rc.search);
      if (rc.budget > 0) s.budget = rc.budget;
      config.search[a] = s;
    }
    for (const auto& [k, v] : rc.space_overrides) {
      const auto dot = k.find('.');
      if (dot == std::string::npos) throw ConfigError("config: space keys look like space.<model>.<parameter>");
      parse_algorithm(k.substr(0, dot));
    }
    const AblationMask mask = parse_mask(rc.exclude_features);
    cohort.schema().validate_mask(mask);
    config.log = [this, quiet = rc.quiet](const std::string& m) {
      if (!quiet) err_ << m << '\n';
    };
    return config;
  }

  std::string metadata(const RunConfig& rc, const NestedCvConfig& config, const CohortTable& cohort) const {
    KeyValueFile kv;
    kv.set("data", fs::path(rc.data).filename().string());
    kv.set("rows", std::to_string(cohort.n_rows()));
    kv.set("seed", std::to_string(config.seed));
    kv.set("repeats", std::to_string(config.n_repeats));
    kv.set("outer_folds", std::to_string(config.folds.n_outer));
    kv.set("inner_folds", std::to_string(config.folds.n_inner));
    kv.set("stratified", config.folds.stratified ? "true" : "false");
    kv.set("threshold", csv::format_number(config.threshold));
    kv.set("fixed_params", rc.fixed_params ? "true" : "false");
    std::string models;
    for (Algorithm a : config.algorithms) {
      models += (models.empty() ? "" : ",") + std::string(to_string(a));
      const SearchSettings s = config.settings(a);
      const std::string p = std::string("search.") + to_string(a);
      kv.set(p + ".mode", to_string(s.mode));
      kv.set(p + ".budget", std::to_string(s.budget));
      kv.set(p + ".candidates", std::to_string(config.space(a).size()));
    }
    kv.set("models", models);
    for (const auto& e : config.experiments) {
      const std::string p = "experiment." + e.name;
      std::string excluded;
      for (const auto& f : e.mask) excluded += (excluded.empty() ? "" : ",") + f;
      kv.set(p + ".excluded", excluded);
      kv.set(p + ".features", std::to_string(encoded_columns(cohort.schema(), e.mask).size()));
    }
    return kv.render();
  }

  // Runs the configured experiments and writes every artifact.
  int run_experiments(const CLI::App* cmd, bool ablation) {
    const RunConfig rc = resolve(cmd);
    const CohortTable cohort = load(rc);
    NestedCvConfig config = cv_config(rc, cohort);
    const AblationMask mask = parse_mask(rc.exclude_features);
    if (ablation) {
      ExperimentSpec second = experiment_without_systolic_intervals();
      if (!mask.empty()) second.mask = mask;
      config.experiments = {experiment_all_features(), second};
    } else {
      config.experiments = {{"I", mask}};
    }
    const fs::path dir = rc.out_dir;
    config.checkpoint_dir = dir;

    const auto start = std::chrono::steady_clock::now();
    log(rc, "running " + std::to_string(config.n_repeats) + " repeats x " + std::to_string(config.folds.n_outer) +
                " folds x " + std::to_string(config.algorithms.size()) + " models x " +
                std::to_string(config.experiments.size()) + " experiments");
    const CvResultMatrix matrix = run_nested_cv(cohort, config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log(rc, "finished in " + std::to_string(seconds) + " s");

    csv::write_atomic(dir / "matrix.csv", matrix.to_csv());
    csv::write_atomic(dir / "predictions.csv", matrix.predictions_csv());
    csv::write_atomic(dir / "run.cfg", metadata(rc, config, cohort));
    write_reports(matrix, dir);
    fs::remove(dir / kPartialMatrixFile);
    fs::remove(dir / kPartialPredictionsFile);
    return 0;
  }

  void write_reports(const CvResultMatrix& matrix, const fs::path& dir) {
    const auto experiments = matrix.experiments();
    std::string summary;
    for (const auto& e : experiments) {
      for (bool train : {false, true}) {
        const PerformanceTable t = performance_table(matrix, e, train);
        const std::string stem = std::string(train ? "summary_train_" : "summary_test_") + e;
        csv::write_atomic(dir / (stem + ".csv"), render_performance_csv(t));
        const std::string md = render_performance_markdown(t);
        csv::write_atomic(dir / (stem + ".md"), md);
        if (!train) summary += md + "\n";
      }
      csv::write_atomic(dir / ("anova_" + e + ".md"), render_anova_markdown(anova_reports(matrix, e)));
      for (Algorithm a : matrix.models()) {
        if (matrix.units(a, e).empty()) continue;
        const std::string suffix = e + "_" + to_string(a) + ".csv";
        csv::write_atomic(dir / ("roc_" + suffix), render_roc_csv(mean_test_roc(matrix, a, e)));
        if (is_tree_based(a)) {
          csv::write_atomic(dir / ("importance_" + suffix), render_importance_csv(cv_importance(matrix, a, e)));
        }
      }
    }
    if (experiments.size() >= 2) {
      for (bool train : {false, true}) {
        const auto rows = ablation_table(matrix, experiments[0], experiments[1], train);
        const std::string stem = train ? "ablation_train" : "ablation";
        csv::write_atomic(dir / (stem + ".csv"), render_ablation_csv(rows));
        const std::string md = render_ablation_markdown(rows, experiments[0], experiments[1]);
        csv::write_atomic(dir / (stem + ".md"), md);
        if (!train) summary += md;
      }
    }
    out_ << summary;
  }

  int report(const CLI::App* cmd) {
    const fs::path src = flags_.matrix_dir;
    const fs::path dir = cmd->count("--out-dir") > 0 ? fs::path(flags_.values.out_dir) : src;
    CvResultMatrix matrix = CvResultMatrix::read(src / "matrix.csv");
    std::ifstream in(src / "predictions.csv", std::ios::binary);
    if (!in) throw DataError("cannot open '" + (src / "predictions.csv").string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    matrix.load_predictions_csv(buf.str());
    write_reports(matrix, dir);
    return 0;
  }

  Flags flags_;

 private:
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tree ensembles and nested cross-validation for AMI mortality prediction", "amimort"};
  app.require_subcommand(1);
  Runner runner(out, err);

  auto* stats = app.add_subcommand("cohort-stats", "Cohort summary table with group tests");
  runner.add_common(stats, false);
  auto* cv = app.add_subcommand("nested-cv", "Nested cross-validation on all (or masked) features");
  runner.add_common(cv, true);
  auto* ablation = app.add_subcommand("ablation", "Experiments I and II side by side");
  runner.add_common(ablation, true);
  auto* report = app.add_subcommand("report", "Re-render reports from a matrix directory");
  report->add_option("--matrix", runner.flags_.matrix_dir, "Directory holding matrix.csv and predictions.csv")
      ->required();
  report->add_option("--out-dir", runner.flags_.values.out_dir, "Output directory (default: the matrix directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (stats->parsed()) return runner.cohort_stats(stats);
    if (cv->parsed()) return runner.run_experiments(cv, false);
    if (ablation->parsed()) return runner.run_experiments(ablation, true);
    if (report->parsed()) return runner.report(report);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace amimort::cli
