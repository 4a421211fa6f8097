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
#include <span>
#include <string>
#include <vector>

#include "amimort/preprocess.h"
#include "amimort/random.h"

namespace amimort {

struct OuterFold {
  RowIndices test;   // ascending cohort row indices
  RowIndices train;  // complement of `test`, ascending
  // Validation parts of the inner folds; they partition `train`.
  std::vector<RowIndices> inner;

  // Training rows of inner fold k (train minus inner[k]).
  RowIndices inner_train(std::size_t k) const;
};

struct FoldOptions {
  int n_outer = 10;
  int n_inner = 5;
  bool stratified = true;
};

struct FoldPlan {
  int repeat = 0;
  bool stratified = true;
  std::vector<OuterFold> folds;
  std::vector<std::string> warnings;
};

// Splits `rows` into k parts of sizes differing by at most one. Stratified
// splitting shuffles each class, lays the classes out one after the other
// and deals positions round-robin, so per-fold class counts are within one
// of proportional. Returned parts are ascending.
std::vector<RowIndices> split_rows(std::span<const std::size_t> rows, std::span<const int> labels, int k,
                                   bool stratified, Rng& rng);

// Outer and inner folds for one repetition, a pure function of
// (labels, master_seed, repeat). Stratification falls back to a plain
// shuffle, with a warning, when a class has fewer members than folds.
FoldPlan make_fold_plan(std::span<const int> labels, std::uint64_t master_seed, int repeat,
                        const FoldOptions& options = {});

}  // namespace amimort
