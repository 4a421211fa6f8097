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

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "amimort/error.h"
#include "amimort/folds.h"
#include "amimort/nested_cv.h"
#include "amimort/result_matrix.h"
#include "amimort/search_space.h"
#include "synthetic.h"

using namespace amimort;

namespace {

const CohortTable& cohort() {
  static const CohortTable c = testing::synthetic_cohort();
  return c;
}

std::vector<int> reference_labels() {
  std::vector<int> y(139, 0);
  std::fill(y.begin(), y.begin() + 87, 1);
  Rng rng(5);
  shuffle(y, rng);
  return y;
}

// Fixed optima with small ensembles so a full matrix runs in seconds.
NestedCvConfig fast_config() {
  NestedCvConfig c;
  c.n_repeats = 1;
  c.seed = 7;
  c.spaces.emplace(Algorithm::kRandomForest, fixed_space(Algorithm::kRandomForest).with_overrides({{"n_estimators", "10"}}));
  c.spaces.emplace(Algorithm::kAdaBoost, fixed_space(Algorithm::kAdaBoost));
  c.spaces.emplace(Algorithm::kGradBoost, fixed_space(Algorithm::kGradBoost).with_overrides({{"n_estimators", "10"}}));
  c.spaces.emplace(Algorithm::kLogistic, fixed_space(Algorithm::kLogistic));
  return c;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("outer folds partition the cohort with balanced sizes and classes") {
  const auto y = reference_labels();
  const auto plan = make_fold_plan(y, 20210121, 1);
  REQUIRE(plan.folds.size() == 10);
  CHECK(plan.warnings.empty());
  std::vector<int> seen(y.size(), 0);
  for (const auto& f : plan.folds) {
    CHECK((f.test.size() == 13 || f.test.size() == 14));
    CHECK(std::is_sorted(f.test.begin(), f.test.end()));
    CHECK(f.train.size() + f.test.size() == y.size());
    for (auto r : f.test) ++seen[r];
    RowIndices both;
    std::set_intersection(f.test.begin(), f.test.end(), f.train.begin(), f.train.end(), std::back_inserter(both));
    CHECK(both.empty());
    long died = 0;
    for (auto r : f.test) died += y[r];
    const double expected = 87.0 * static_cast<double>(f.test.size()) / 139.0;
    CHECK(std::abs(static_cast<double>(died) - expected) <= 1.0);

    REQUIRE(f.inner.size() == 5);
    std::vector<int> inner_seen(y.size(), 0);
    for (std::size_t k = 0; k < f.inner.size(); ++k) {
      for (auto r : f.inner[k]) ++inner_seen[r];
      const auto tr = f.inner_train(k);
      CHECK(tr.size() + f.inner[k].size() == f.train.size());
    }
    for (auto r : f.train) CHECK(inner_seen[r] == 1);
    for (auto r : f.test) CHECK(inner_seen[r] == 0);
  }
  for (int s : seen) CHECK(s == 1);
}

TEST_CASE("fold plans are a pure function of labels, seed and repeat") {
  const auto y = reference_labels();
  const auto a = make_fold_plan(y, 3, 2);
  const auto b = make_fold_plan(y, 3, 2);
  const auto c = make_fold_plan(y, 3, 3);
  for (std::size_t f = 0; f < a.folds.size(); ++f) {
    CHECK(a.folds[f].test == b.folds[f].test);
    CHECK(a.folds[f].inner == b.folds[f].inner);
  }
  bool differs = false;
  for (std::size_t f = 0; f < a.folds.size(); ++f) differs |= a.folds[f].test != c.folds[f].test;
  CHECK(differs);
}

TEST_CASE("fold edge cases") {
  std::vector<int> y = {1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  const auto plan = make_fold_plan(y, 1, 1, {.n_outer = 3, .n_inner = 2});
  CHECK_FALSE(plan.warnings.empty());
  const std::vector<int> tiny = {0, 1, 0};
  CHECK_THROWS_AS(make_fold_plan(tiny, 1, 1), ConfigError);
  const std::vector<int> bad = {0, 2, 0, 1};
  CHECK_THROWS_AS(make_fold_plan(bad, 1, 1, {.n_outer = 2, .n_inner = 2}), DataError);
  CHECK_THROWS_AS(make_fold_plan(reference_labels(), 1, 1, {.n_outer = 1}), ConfigError);
}

TEST_CASE("search spaces") {
  CHECK(default_space(Algorithm::kRandomForest).size() == 10ULL * 2 * 9 * 7 * 8 * 2 * 2);
  CHECK(default_space(Algorithm::kAdaBoost).size() == 35);
  CHECK(default_space(Algorithm::kLogistic).size() == 1);
  for (Algorithm a : {Algorithm::kRandomForest, Algorithm::kAdaBoost, Algorithm::kGradBoost, Algorithm::kLogistic}) {
    CHECK(fixed_space(a).size() == 1);
  }
  const auto rf = fixed_space(Algorithm::kRandomForest);
  const auto params = forest_params(rf.candidate(0));
  CHECK(params.n_estimators == 250);
  CHECK(params.tree.max_depth == 3);
  CHECK(params.tree.min_samples_split == 10);
  CHECK(params.tree.min_samples_leaf == 6);
  CHECK_FALSE(params.bootstrap);

  const SearchSpace s(Algorithm::kAdaBoost, {{"n_estimators", {"1", "2", "3"}}, {"learning_rate", {"0.1", "1"}}});
  CHECK(s.size() == 6);
  CHECK(s.candidate(0) == Assignment{{"n_estimators", "1"}, {"learning_rate", "0.1"}});
  CHECK(s.candidate(1) == Assignment{{"n_estimators", "1"}, {"learning_rate", "1"}});
  CHECK(s.candidate(5) == Assignment{{"n_estimators", "3"}, {"learning_rate", "1"}});
  CHECK(s.with_overrides({{"learning_rate", "0.5"}}).size() == 3);
  CHECK_THROWS_AS(s.with_overrides({{"depth", "1"}}), ConfigError);
  CHECK_THROWS_AS(adaboost_params({{"n_estimators", "x"}}), ConfigError);
  CHECK_THROWS_AS(adaboost_params({{"gamma", "3"}}), ConfigError);
}

TEST_CASE("candidate indices") {
  Rng rng(1);
  const auto rf = default_space(Algorithm::kRandomForest);
  const auto idx = candidate_indices(rf, {SearchMode::kRandom, 200}, rng);
  CHECK(idx.size() == 200);
  CHECK(std::is_sorted(idx.begin(), idx.end()));
  CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
  CHECK(idx.back() < rf.size());

  const SearchSpace small(Algorithm::kAdaBoost, {{"n_estimators", {"1", "2", "3"}}});
  const auto all = candidate_indices(small, {SearchMode::kRandom, 50}, rng);
  CHECK(all == std::vector<std::uint64_t>{0, 1, 2});
  CHECK(candidate_indices(small, {SearchMode::kExhaustive, 1}, rng) == all);

  Rng a(9), b(9);
  CHECK(candidate_indices(rf, {SearchMode::kRandom, 20}, a) == candidate_indices(rf, {SearchMode::kRandom, 20}, b));
  CHECK_THROWS_AS(candidate_indices(default_space(Algorithm::kGradBoost), {SearchMode::kExhaustive, 1}, rng),
                  ConfigError);
}

TEST_CASE("assignment text round trip") {
  const Assignment a = {{"n_estimators", "250"}, {"max_features", "sqrt"}};
  CHECK(format_assignment(a) == "n_estimators=250;max_features=sqrt");
  CHECK(parse_assignment(format_assignment(a)) == a);
  CHECK(parse_assignment("").empty());
  CHECK_THROWS_AS(parse_assignment("n_estimators"), ConfigError);
}

TEST_CASE("inner selection") {
  const auto plan = make_fold_plan(cohort().outcomes(), 1, 1);
  const auto& fold = plan.folds.front();
  int fits = 0;
  const FitObserver count = [&](const FitEvent&) { ++fits; };

  const auto single = inner_select(cohort(), fold, fixed_space(Algorithm::kAdaBoost), {}, {}, 1, count);
  CHECK(fits == 0);
  CHECK(single.evaluated == 0);
  CHECK(single.params == fixed_space(Algorithm::kAdaBoost).candidate(0));

  const SearchSpace tie(Algorithm::kLogistic, {{"l2_strength", {"1", "1.0"}}});
  const auto t = inner_select(cohort(), fold, tie, {}, {}, 1, count);
  CHECK(fits == 10);
  CHECK(t.candidate == 0);
  CHECK(t.evaluated == 2);

  fits = 0;
  const SearchSpace grid(Algorithm::kRandomForest,
                         {{"n_estimators", {"5", "10"}}, {"max_depth", {"1", "3"}}, {"min_samples_leaf", {"2"}}});
  std::set<std::size_t> train(fold.train.begin(), fold.train.end());
  bool inside = true;
  const FitObserver audit = [&](const FitEvent& e) {
    ++fits;
    CHECK(e.stage == FitStage::kInnerSearch);
    for (auto r : e.train.source_rows) inside &= train.contains(r);
  };
  const auto g = inner_select(cohort(), fold, grid, {}, {}, 1, audit);
  CHECK(fits == 20);
  CHECK(inside);
  CHECK(g.evaluated == 4);
  CHECK(g.score > 0.5);
  CHECK(g.params == grid.candidate(g.candidate));
}

TEST_CASE("nested cv produces a complete deterministic matrix") {
  const auto config = fast_config();
  const auto m = run_nested_cv(cohort(), config);
  CHECK(m.complete(1, 10));
  CHECK(m.cells().size() == 40);
  CHECK(m.models().size() == 4);
  CHECK(m.experiments() == std::vector<std::string>{"I"});
  for (Algorithm a : m.models()) {
    const auto auc = m.values(a, "I", "auc");
    CHECK(auc.size() == 10);
    for (double v : auc) CHECK(is_defined(v));
  }
  CHECK(m.predictions().size() == 4 * 139);
  std::set<std::size_t> rows;
  for (const auto& p : m.predictions()) {
    if (p.key.model == Algorithm::kLogistic) rows.insert(p.row);
  }
  CHECK(rows.size() == 139);
  CHECK(run_nested_cv(cohort(), config).to_csv() == m.to_csv());
}

TEST_CASE("serial and parallel runs produce identical matrices") {
  auto config = fast_config();
  config.experiments = {experiment_all_features(), experiment_without_systolic_intervals()};
  const auto serial = run_nested_cv(cohort(), config);
  config.jobs = 4;
  const auto parallel = run_nested_cv(cohort(), config);
  CHECK(serial.to_csv() == parallel.to_csv());
  CHECK(serial.predictions_csv() == parallel.predictions_csv());
}

TEST_CASE("outer test rows never reach a fitting routine") {
  auto config = fast_config();
  config.n_repeats = 2;
  config.jobs = 3;
  config.experiments = {experiment_all_features(), experiment_without_systolic_intervals()};
  config.spaces.insert_or_assign(Algorithm::kAdaBoost, SearchSpace(Algorithm::kAdaBoost, {{"n_estimators", {"5", "10"}}}));
  std::vector<FoldPlan> plans;
  for (int r = 1; r <= config.n_repeats; ++r) plans.push_back(make_fold_plan(cohort().outcomes(), config.seed, r));

  std::mutex mutex;
  std::size_t events = 0;
  std::size_t leaks = 0;
  std::size_t inner_events = 0;
  config.observer = [&](const FitEvent& e) {
    const auto& test = plans[e.cell.repeat - 1].folds[e.cell.fold - 1].test;
    const std::set<std::size_t> held(test.begin(), test.end());
    std::size_t bad = 0;
    for (auto r : e.train.source_rows) bad += held.contains(r);
    for (auto r : e.standardizer_rows) bad += held.contains(r);
    std::lock_guard lock(mutex);
    ++events;
    leaks += bad;
    if (e.stage == FitStage::kInnerSearch) ++inner_events;
  };
  const auto m = run_nested_cv(cohort(), config);
  CHECK(m.cells().size() == 2 * 2 * 10 * 4);
  CHECK(leaks == 0);
  CHECK(inner_events == 2 * 2 * 10 * 2 * 5);
  CHECK(events == inner_events + m.cells().size());
}

TEST_CASE("test metrics are computed on held-out rows only") {
  const auto config = fast_config();
  const auto plan = make_fold_plan(cohort().outcomes(), config.seed, 1);
  const auto m = run_nested_cv(cohort(), config);
  for (const auto& key : m.cells()) {
    const auto& test = plan.folds[key.fold - 1].test;
    std::vector<std::size_t> rows;
    for (const auto& p : m.predictions()) {
      if (p.key == key) rows.push_back(p.row);
    }
    CHECK(rows == test);
  }
}

TEST_CASE("an interrupted run resumes from its checkpoint") {
  const auto dir = fresh_dir("amimort_test_resume");
  auto config = fast_config();
  config.checkpoint_dir = dir;
  const auto full = run_nested_cv(cohort(), config);
  const std::string partial = read_file(dir / kPartialMatrixFile);
  CHECK(CvResultMatrix::from_csv(partial).cells().size() == 40);

  {
    std::ofstream out(dir / kPartialMatrixFile, std::ios::binary | std::ios::trunc);
    out << partial.substr(0, partial.size() * 3 / 5);
  }
  int refits = 0;
  config.observer = [&](const FitEvent& e) { refits += e.stage == FitStage::kOuterRefit; };
  const auto resumed = run_nested_cv(cohort(), config);
  CHECK(refits > 0);
  CHECK(refits < 40);
  CHECK(resumed.to_csv() == full.to_csv());
  CHECK(resumed.predictions_csv() == full.predictions_csv());
}

TEST_CASE("invalid settings are rejected with their context") {
  auto config = fast_config();
  config.algorithms = {Algorithm::kGradBoost};
  config.spaces.insert_or_assign(Algorithm::kGradBoost,
                                 SearchSpace(Algorithm::kGradBoost, {{"eta", {"-1"}}}));
  try {
    run_nested_cv(cohort(), config);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("eta") != std::string::npos);
  }
  config = fast_config();
  config.experiments = {{"I", {"nonexistent"}}};
  CHECK_THROWS_AS(run_nested_cv(cohort(), config), ConfigError);
  config = fast_config();
  config.n_repeats = 0;
  CHECK_THROWS_AS(run_nested_cv(cohort(), config), ConfigError);
}

TEST_CASE("experiments share folds and model seeds") {
  CellKey a{2, 3, Algorithm::kRandomForest, "I"};
  CellKey b = a;
  b.experiment = "II";
  CHECK(cell_seed(1, a) == cell_seed(1, b));
  b.fold = 4;
  CHECK(cell_seed(1, a) != cell_seed(1, b));
}

TEST_CASE("result matrix csv round trip") {
  auto config = fast_config();
  config.algorithms = {Algorithm::kRandomForest, Algorithm::kLogistic};
  const auto m = run_nested_cv(cohort(), config);
  const auto back = CvResultMatrix::from_csv(m.to_csv());
  CHECK(back.to_csv() == m.to_csv());
  CHECK(back.cells() == m.cells());
  for (const auto& key : m.cells()) CHECK(back.params(key) == m.params(key));
  CvResultMatrix with_predictions = back;
  with_predictions.load_predictions_csv(m.predictions_csv());
  CHECK(with_predictions.predictions_csv() == m.predictions_csv());

  const auto text = m.to_csv();
  CHECK_THROWS_AS(CvResultMatrix::from_csv(text + "garbage\n"), DataError);
  CHECK(CvResultMatrix::from_csv(text + "garbage", true).to_csv() == text);
  CHECK(m.restricted_to({}).cells().empty());
  const std::set<CellKey> one = {*m.cells().begin()};
  CHECK(m.restricted_to(one).cells() == one);
  CHECK_FALSE(m.restricted_to(one).complete(1, 10));
}
