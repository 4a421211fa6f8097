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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "amimort/cohort.h"
#include "amimort/folds.h"
#include "amimort/result_matrix.h"
#include "amimort/search_space.h"

namespace amimort {

struct ExperimentSpec {
  std::string name;
  AblationMask mask;
};

// Experiment I uses every feature; experiment II drops bPEP and bET.
ExperimentSpec experiment_all_features();
ExperimentSpec experiment_without_systolic_intervals();

enum class FitStage { kInnerSearch, kOuterRefit };

// Passed to the observer right before a model is fitted. `standardizer_rows`
// are the cohort rows the scaling statistics were computed from.
struct FitEvent {
  CellKey cell;
  FitStage stage;
  const DesignMatrix& train;
  std::span<const std::size_t> standardizer_rows;
};
using FitObserver = std::function<void(const FitEvent&)>;

struct InnerSelection {
  std::uint64_t candidate = 0;
  Assignment params;
  double score = kUndefined;  // mean inner-validation AUC
  std::size_t evaluated = 0;
  std::size_t failed = 0;
};

struct NestedCvConfig {
  std::vector<Algorithm> algorithms = {Algorithm::kRandomForest, Algorithm::kAdaBoost, Algorithm::kGradBoost,
                                       Algorithm::kLogistic};
  std::vector<ExperimentSpec> experiments = {experiment_all_features()};
  std::uint64_t seed = 20210121;
  int n_repeats = 10;
  FoldOptions folds;
  std::map<Algorithm, SearchSpace> spaces;       // missing entries use default_space
  std::map<Algorithm, SearchSettings> search;    // missing entries use default_search
  double threshold = 0.5;
  int jobs = 1;  // 0 = hardware concurrency
  // When set, completed cells are appended to matrix.partial.csv and
  // predictions.partial.csv here, and cells found there are not recomputed.
  std::filesystem::path checkpoint_dir;
  FitObserver observer;
  std::function<void(const std::string&)> log;

  const SearchSpace& space(Algorithm a) const;
  SearchSettings settings(Algorithm a) const;
};

// Chooses hyperparameters for one outer fold using only its training rows.
// A single-candidate space is returned without fitting anything.
InnerSelection inner_select(const CohortTable& cohort, const OuterFold& fold, const SearchSpace& space,
                            const SearchSettings& settings, const AblationMask& mask, std::uint64_t seed,
                            const FitObserver& observer = {}, const CellKey& cell = {});

// Evaluates one cell: inner selection, refit on the outer training rows,
// test and train metrics, importances and test predictions.
CellResult run_cell(const CohortTable& cohort, const OuterFold& fold, const CellKey& key, const AblationMask& mask,
                    const NestedCvConfig& config);

CvResultMatrix run_nested_cv(const CohortTable& cohort, const NestedCvConfig& config);

// Seed for the cell's random streams. Independent of the experiment so the
// two ablation arms see identical folds and model randomness.
std::uint64_t cell_seed(std::uint64_t master, const CellKey& key);

inline constexpr const char* kPartialMatrixFile = "matrix.partial.csv";
inline constexpr const char* kPartialPredictionsFile = "predictions.partial.csv";

}  // namespace amimort
