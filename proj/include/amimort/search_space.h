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
#include <string>
#include <utility>
#include <vector>

#include "amimort/ensembles.h"
#include "amimort/keyvalue.h"
#include "amimort/linear.h"
#include "amimort/model.h"
#include "amimort/random.h"

namespace amimort {

// Hyperparameter assignment as (name, value text) pairs in axis order.
using Assignment = std::vector<std::pair<std::string, std::string>>;

// "name=value;name=value".
std::string format_assignment(const Assignment& a);
Assignment parse_assignment(const std::string& text);

struct ParamAxis {
  std::string name;
  std::vector<std::string> values;
};

enum class SearchMode { kExhaustive, kRandom };
const char* to_string(SearchMode m);
SearchMode parse_search_mode(const std::string& text);

// Cartesian grid of candidate values. Candidate i is decoded in mixed radix
// with the last axis varying fastest.
class SearchSpace {
 public:
  SearchSpace(Algorithm algorithm, std::vector<ParamAxis> axes);

  Algorithm algorithm() const { return algorithm_; }
  const std::vector<ParamAxis>& axes() const { return axes_; }
  std::uint64_t size() const { return size_; }
  Assignment candidate(std::uint64_t index) const;

  // Replaces axes named in `entries` (name -> comma-separated values).
  SearchSpace with_overrides(const std::map<std::string, std::string>& entries) const;

 private:
  Algorithm algorithm_;
  std::vector<ParamAxis> axes_;
  std::uint64_t size_ = 1;
};

struct SearchSettings {
  SearchMode mode = SearchMode::kExhaustive;
  std::uint64_t budget = 1;  // candidates evaluated in random mode
};

// Hyperparameter grids searched by default.
SearchSpace default_space(Algorithm algorithm);
// Single-candidate space holding the reference optimum.
SearchSpace fixed_space(Algorithm algorithm);
// Exhaustive for AdaBoost and LR; random with budget 200 (RF) and 500
// (gradient boosting).
SearchSettings default_search(Algorithm algorithm);

// Candidate indices to evaluate, ascending. Random mode draws
// min(budget, size) distinct indices uniformly (Floyd's algorithm).
// Exhaustive enumeration of more than kMaxExhaustive candidates is refused.
inline constexpr std::uint64_t kMaxExhaustive = 5'000'000;
std::vector<std::uint64_t> candidate_indices(const SearchSpace& space, const SearchSettings& settings, Rng& rng);

struct ModelSpec {
  Algorithm algorithm = Algorithm::kRandomForest;
  Assignment params;
};

// Builders start from library defaults and apply the assignment; unknown
// names or malformed values raise ConfigError.
ForestParams forest_params(const Assignment& a);
AdaBoostParams adaboost_params(const Assignment& a);
GradBoostParams gradboost_params(const Assignment& a);
LogisticParams logistic_params(const Assignment& a);

TrainedModel fit_model(const ModelSpec& spec, const DesignMatrix& x, Rng& rng);

}  // namespace amimort
