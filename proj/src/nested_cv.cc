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

#include "amimort/nested_cv.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "amimort/csv.h"
#include "amimort/error.h"
#include "amimort/importance.h"

namespace amimort {

namespace {

constexpr std::uint64_t kSearchStream = 0x5EA4C4;
constexpr std::uint64_t kInnerStream = 0x1A4E4;
constexpr std::uint64_t kRefitStream = 0x4EF17;

struct InnerData {
  DesignMatrix train;
  DesignMatrix validation;
  RowIndices train_rows;
};

std::string describe(const CellKey& k) {
  return "repeat " + std::to_string(k.repeat) + ", fold " + std::to_string(k.fold) + ", model " +
         display_name(k.model) + ", experiment " + k.experiment;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void check_space(const SearchSpace& space) {
  const Assignment a = space.candidate(0);
  switch (space.algorithm()) {
    case Algorithm::kRandomForest: forest_params(a); break;
    case Algorithm::kAdaBoost: adaboost_params(a); break;
    case Algorithm::kGradBoost: gradboost_params(a); break;
    case Algorithm::kLogistic: logistic_params(a); break;
  }
}

// Appends completed cells to the checkpoint files.
class Checkpoint {
 public:
  Checkpoint(const std::filesystem::path& dir, const CvResultMatrix& existing) {
    std::filesystem::create_directories(dir);
    const auto matrix_path = dir / kPartialMatrixFile;
    const auto pred_path = dir / kPartialPredictionsFile;
    csv::write_atomic(matrix_path, existing.to_csv());
    csv::write_atomic(pred_path, existing.predictions_csv());
    matrix_.open(matrix_path, std::ios::binary | std::ios::app);
    predictions_.open(pred_path, std::ios::binary | std::ios::app);
    if (!matrix_ || !predictions_) throw Error("cannot open checkpoint files in '" + dir.string() + "'");
  }

  // Predictions first, then the metric rows ending with the completion
  // marker: a cell counts as done only when everything is on disk.
  void append(const CellResult& cell) {
    std::string text;
    for (const auto& p : cell.predictions) text += format_prediction(p);
    predictions_ << text;
    predictions_.flush();
    text.clear();
    for (const auto& e : cell.entries()) text += format_entry(e);
    matrix_ << text;
    matrix_.flush();
  }

 private:

  std::ofstream matrix_;
  std::ofstream predictions_;
};

}  // namespace

ExperimentSpec experiment_all_features() { return {"I", {}}; }
ExperimentSpec experiment_without_systolic_intervals() { return {"II", systolic_interval_mask()}; }

const SearchSpace& NestedCvConfig::space(Algorithm a) const {
  auto it = spaces.find(a);
  if (it != spaces.end()) return it->second;
  static const std::map<Algorithm, SearchSpace> defaults = [] {
    std::map<Algorithm, SearchSpace> m;
    for (Algorithm x : {Algorithm::kRandomForest, Algorithm::kAdaBoost, Algorithm::kGradBoost, Algorithm::kLogistic}) {
      m.emplace(x, default_space(x));
    }
    return m;
  }();
  return defaults.at(a);
}

SearchSettings NestedCvConfig::settings(Algorithm a) const {
  auto it = search.find(a);
  return it != search.end() ? it->second : default_search(a);
}

std::uint64_t cell_seed(std::uint64_t master, const CellKey& key) {
  return derive_seed(master, {static_cast<std::uint64_t>(key.repeat), static_cast<std::uint64_t>(key.fold),
                              static_cast<std::uint64_t>(key.model)});
}

InnerSelection inner_select(const CohortTable& cohort, const OuterFold& fold, const SearchSpace& space,
                            const SearchSettings& settings, const AblationMask& mask, std::uint64_t seed,
                            const FitObserver& observer, const CellKey& cell) {
  Rng search_rng(derive_seed(seed, {kSearchStream}));
  const std::vector<std::uint64_t> candidates = candidate_indices(space, settings, search_rng);
  InnerSelection best;
  if (candidates.size() == 1) {
    best.candidate = candidates.front();
    best.params = space.candidate(best.candidate);
    return best;
  }

  std::vector<InnerData> inner;
  for (std::size_t k = 0; k < fold.inner.size(); ++k) {
    InnerData d;
    d.train_rows = fold.inner_train(k);
    const Standardizer st = fit_standardizer(cohort, d.train_rows);
    d.train = encode(cohort, d.train_rows, st, mask);
    d.validation = encode(cohort, fold.inner[k], st, mask);
    inner.push_back(std::move(d));
  }

  bool found = false;
  std::string last_error;
  for (std::uint64_t c : candidates) {
    const ModelSpec spec{space.algorithm(), space.candidate(c)};
    double sum = 0.0;
    int defined = 0;
    try {
      for (std::size_t k = 0; k < inner.size(); ++k) {
        const auto& d = inner[k];
        if (observer) observer(FitEvent{cell, FitStage::kInnerSearch, d.train, d.train_rows});
        Rng rng(derive_seed(seed, {kInnerStream, c, k}));
        const TrainedModel model = fit_model(spec, d.train, rng);
        const double a = auc(model.predict_proba(d.validation), d.validation.labels);
        if (is_defined(a)) {
          sum += a;
          ++defined;
        }
      }
    } catch (const TrainingError& e) {
      ++best.failed;
      last_error = e.what();
      continue;
    }
    ++best.evaluated;
    if (defined == 0) continue;
    const double score = sum / defined;
    if (!found || score > best.score) {
      found = true;
      best.candidate = c;
      best.params = spec.params;
      best.score = score;
    }
  }
  if (!found) {
    throw TrainingError("inner search: no candidate could be evaluated" +
                        (last_error.empty() ? std::string() : " (last error: " + last_error + ")"));
  }
  return best;
}

CellResult run_cell(const CohortTable& cohort, const OuterFold& fold, const CellKey& key, const AblationMask& mask,
                    const NestedCvConfig& config) {
  const std::uint64_t seed = cell_seed(config.seed, key);
  const SearchSpace& space = config.space(key.model);
  const InnerSelection sel =
      inner_select(cohort, fold, space, config.settings(key.model), mask, seed, config.observer, key);

  const Standardizer st = fit_standardizer(cohort, fold.train);
  const DesignMatrix train = encode(cohort, fold.train, st, mask);
  const DesignMatrix test = encode(cohort, fold.test, st, mask);
  if (config.observer) config.observer(FitEvent{key, FitStage::kOuterRefit, train, fold.train});

  Rng rng(derive_seed(seed, {kRefitStream}));
  const TrainedModel model = fit_model(ModelSpec{key.model, sel.params}, train, rng);

  CellResult cell;
  cell.key = key;
  cell.params = format_assignment(sel.params);
  const auto train_scores = model.predict_proba(train);
  const auto test_scores = model.predict_proba(test);
  cell.train = evaluate(train_scores, train.labels, config.threshold);
  cell.test = evaluate(test_scores, test.labels, config.threshold);
  cell.columns = model.columns();
  if (is_tree_based(key.model)) cell.importance = model_importance(model).importance;
  for (std::size_t i = 0; i < test.n_rows; ++i) {
    cell.predictions.push_back({key, fold.test[i], test.labels[i], test_scores[i]});
  }
  return cell;
}

CvResultMatrix run_nested_cv(const CohortTable& cohort, const NestedCvConfig& config) {
  if (config.n_repeats < 1) throw ConfigError("nested cv: n_repeats must be >= 1");
  if (config.algorithms.empty()) throw ConfigError("nested cv: no models requested");
  if (config.experiments.empty()) throw ConfigError("nested cv: no experiments requested");
  if (config.jobs < 0) throw ConfigError("nested cv: jobs must be >= 0");
  std::set<std::string> names;
  for (const auto& e : config.experiments) {
    cohort.schema().validate_mask(e.mask);
    if (!names.insert(e.name).second) throw ConfigError("nested cv: duplicate experiment '" + e.name + "'");
  }
  for (Algorithm a : config.algorithms) {
    check_space(config.space(a));
    Rng probe(0);
    candidate_indices(config.space(a), config.settings(a), probe);
  }
  auto log = [&](const std::string& msg) {
    if (config.log) config.log(msg);
  };

  std::vector<FoldPlan> plans;
  for (int r = 1; r <= config.n_repeats; ++r) {
    plans.push_back(make_fold_plan(cohort.outcomes(), config.seed, r, config.folds));
    for (const auto& w : plans.back().warnings) log("repeat " + std::to_string(r) + ": " + w);
  }

  CvResultMatrix done;
  if (!config.checkpoint_dir.empty()) {
    CvResultMatrix prior =
        CvResultMatrix::from_csv(read_text(config.checkpoint_dir / kPartialMatrixFile), /*lenient=*/true);
    prior.load_predictions_csv(read_text(config.checkpoint_dir / kPartialPredictionsFile), /*lenient=*/true);
    done = prior.restricted_to(prior.cells());
    if (!done.cells().empty()) log("resuming: " + std::to_string(done.cells().size()) + " cells already complete");
  }
  const std::set<CellKey> finished = done.cells();

  struct Task {
    CellKey key;
    const OuterFold* fold;
    const AblationMask* mask;
  };
  std::vector<Task> tasks;
  for (const auto& e : config.experiments) {
    for (const auto& plan : plans) {
      for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        for (Algorithm a : config.algorithms) {
          CellKey key{plan.repeat, static_cast<int>(f + 1), a, e.name};
          if (!finished.contains(key)) tasks.push_back({key, &plan.folds[f], &e.mask});
        }
      }
    }
  }

  std::unique_ptr<Checkpoint> checkpoint;
  if (!config.checkpoint_dir.empty()) checkpoint = std::make_unique<Checkpoint>(config.checkpoint_dir, done);

  std::vector<CellResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mutex;
  std::exception_ptr failure;
  std::string failure_context;
  std::size_t completed = 0;

  auto worker = [&] {
    while (!stop) {
      const std::size_t i = next++;
      if (i >= tasks.size()) return;
      try {
        CellResult cell = run_cell(cohort, *tasks[i].fold, tasks[i].key, *tasks[i].mask, config);
        std::lock_guard lock(mutex);
        if (checkpoint) checkpoint->append(cell);
        results[i] = std::move(cell);
        ++completed;
        if (config.log && (completed % 10 == 0 || completed == tasks.size())) {
          log("completed " + std::to_string(completed) + "/" + std::to_string(tasks.size()) + " cells");
        }
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) {
          failure = std::current_exception();
          failure_context = describe(tasks[i].key);
        }
        stop = true;
      }
    }
  };

  unsigned n_threads = config.jobs == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                        : static_cast<unsigned>(config.jobs);
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const ConfigError& e) {
      throw ConfigError(failure_context + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(failure_context + ": " + e.what());
    } catch (const std::exception& e) {
      throw TrainingError(failure_context + ": " + e.what());
    }
  }

  CvResultMatrix matrix = done;
  for (const auto& cell : results) matrix.add(cell);
  return matrix;
}

}  // namespace amimort
