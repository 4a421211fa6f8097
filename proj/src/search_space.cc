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

#include "amimort/search_space.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <set>

#include "amimort/error.h"

namespace amimort {

std::string format_assignment(const Assignment& a) {
  std::string s;
  for (const auto& [k, v] : a) s += (s.empty() ? "" : ";") + k + "=" + v;
  return s;
}

Assignment parse_assignment(const std::string& text) {
  Assignment a;
  if (trim(text).empty()) return a;
  for (const auto& part : split(text, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("hyperparameters: expected name=value, got '" + part + "'");
    a.emplace_back(trim(part.substr(0, eq)), trim(part.substr(eq + 1)));
  }
  return a;
}

const char* to_string(SearchMode m) { return m == SearchMode::kExhaustive ? "exhaustive" : "random"; }

SearchMode parse_search_mode(const std::string& text) {
  if (text == "exhaustive") return SearchMode::kExhaustive;
  if (text == "random" || text == "randomized") return SearchMode::kRandom;
  throw ConfigError("unknown search mode '" + text + "' (expected exhaustive or random)");
}

SearchSpace::SearchSpace(Algorithm algorithm, std::vector<ParamAxis> axes)
    : algorithm_(algorithm), axes_(std::move(axes)) {
  for (const auto& axis : axes_) {
    if (axis.values.empty()) throw ConfigError("search space: axis '" + axis.name + "' has no values");
    if (size_ > std::numeric_limits<std::uint64_t>::max() / axis.values.size()) {
      throw ConfigError("search space: too many candidates");
    }
    size_ *= axis.values.size();
  }
}

Assignment SearchSpace::candidate(std::uint64_t index) const {
  if (index >= size_) throw ConfigError("search space: candidate index out of range");
  Assignment a(axes_.size());
  for (std::size_t i = axes_.size(); i-- > 0;) {
    const auto& axis = axes_[i];
    a[i] = {axis.name, axis.values[index % axis.values.size()]};
    index /= axis.values.size();
  }
  return a;
}

SearchSpace SearchSpace::with_overrides(const std::map<std::string, std::string>& entries) const {
  std::vector<ParamAxis> axes = axes_;
  for (const auto& [name, text] : entries) {
    auto it = std::find_if(axes.begin(), axes.end(), [&](const ParamAxis& a) { return a.name == name; });
    if (it == axes.end()) {
      axes.push_back({name, split(text, ',')});
    } else {
      it->values = split(text, ',');
    }
  }
  SearchSpace out(algorithm_, std::move(axes));
  // Reject names the model builder does not understand.
  if (out.size() > 0) {
    Assignment probe = out.candidate(0);
    switch (algorithm_) {
      case Algorithm::kRandomForest: forest_params(probe); break;
      case Algorithm::kAdaBoost: adaboost_params(probe); break;
      case Algorithm::kGradBoost: gradboost_params(probe); break;
      case Algorithm::kLogistic: logistic_params(probe); break;
    }
  }
  return out;
}

SearchSpace default_space(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kRandomForest:
      return SearchSpace(algorithm, {
                                        {"n_estimators", {"20", "50", "150", "200", "250", "300", "350", "400", "500", "1000"}},
                                        {"max_features", {"auto", "sqrt"}},
                                        {"max_depth", {"1", "3", "5", "6", "7", "12", "14", "16", "18"}},
                                        {"min_samples_split", {"2", "4", "6", "8", "10", "12", "14"}},
                                        {"min_samples_leaf", {"2", "3", "4", "5", "6", "7", "9", "12"}},
                                        {"bootstrap", {"true", "false"}},
                                        {"criterion", {"entropy", "gini"}},
                                    });
    case Algorithm::kAdaBoost:
      return SearchSpace(algorithm, {
                                        {"n_estimators", {"20", "50", "100", "300", "400", "500", "1000"}},
                                        {"learning_rate", {"0.001", "0.01", "0.05", "0.1", "0.5"}},
                                    });
    case Algorithm::kGradBoost:
      return SearchSpace(algorithm, {
                                        {"n_estimators", {"20", "50", "100", "300", "400", "500", "1000"}},
                                        {"max_depth", {"1", "3", "5", "6", "7", "10"}},
                                        {"eta", {"0.01", "0.03", "0.05", "0.1", "0.2"}},
                                        {"min_child_weight", {"0.1", "0.3", "0.5"}},
                                        {"max_leaf_nodes", {"4", "6", "9", "10"}},
                                        {"subsample", {"0.1", "0.5", "0.8", "1"}},
                                        {"gamma", {"0.01", "0.05", "0.1", "0.2", "0.5", "0.8"}},
                                        {"alpha", {"0.001", "0.01", "0.1", "0.5"}},
                                        {"max_delta_step", {"0", "1", "2", "5"}},
                                        {"colsample_bytree", {"0.5", "0.6", "0.8"}},
                                        {"colsample_bylevel", {"0.4", "0.6", "0.8"}},
                                        {"colsample_bynode", {"0.2", "0.3", "0.5", "0.8"}},
                                        {"lambda", {"0.01", "0.05", "0.1", "0.3", "0.5"}},
                                    });
    case Algorithm::kLogistic:
      return SearchSpace(algorithm, {{"l2_strength", {"1"}}});
  }
  throw ConfigError("default_space: unknown algorithm");
}

SearchSpace fixed_space(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kRandomForest:
      return SearchSpace(algorithm, {
                                        {"n_estimators", {"250"}},
                                        {"max_features", {"sqrt"}},
                                        {"max_depth", {"3"}},
                                        {"min_samples_split", {"10"}},
                                        {"min_samples_leaf", {"6"}},
                                        {"bootstrap", {"false"}},
                                        {"criterion", {"entropy"}},
                                    });
    case Algorithm::kAdaBoost:
      return SearchSpace(algorithm, {{"n_estimators", {"20"}}, {"learning_rate", {"0.01"}}});
    case Algorithm::kGradBoost:
      return SearchSpace(algorithm, {
                                        {"n_estimators", {"100"}},
                                        {"max_depth", {"1"}},
                                        {"eta", {"0.1"}},
                                        {"min_child_weight", {"0.3"}},
                                        {"max_leaf_nodes", {"9"}},
                                        {"subsample", {"0.5"}},
                                        {"gamma", {"0.1"}},
                                        {"alpha", {"0.5"}},
                                        {"max_delta_step", {"2"}},
                                        {"colsample_bytree", {"0.5"}},
                                        {"colsample_bylevel", {"0.6"}},
                                        {"colsample_bynode", {"0.3"}},
                                        {"lambda", {"0.05"}},
                                    });
    case Algorithm::kLogistic:
      return default_space(algorithm);
  }
  throw ConfigError("fixed_space: unknown algorithm");
}

SearchSettings default_search(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kRandomForest: return {SearchMode::kRandom, 200};
    case Algorithm::kGradBoost: return {SearchMode::kRandom, 500};
    case Algorithm::kAdaBoost: return {SearchMode::kExhaustive, 35};
    default: return {SearchMode::kExhaustive, 1};
  }
}

std::vector<std::uint64_t> candidate_indices(const SearchSpace& space, const SearchSettings& settings, Rng& rng) {
  const std::uint64_t n = space.size();
  if (settings.mode == SearchMode::kExhaustive || settings.budget >= n) {
    if (n > kMaxExhaustive) {
      throw ConfigError("search: exhaustive enumeration of " + std::to_string(n) + " candidates for " +
                        display_name(space.algorithm()) + " exceeds the limit of " + std::to_string(kMaxExhaustive) +
                        "; use random search");
    }
    std::vector<std::uint64_t> all(n);
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    return all;
  }
  if (settings.budget < 1) throw ConfigError("search: budget must be >= 1");
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = n - settings.budget; j < n; ++j) {
    const std::uint64_t t = uniform_index(rng, j + 1);
    chosen.insert(chosen.contains(t) ? j : t);
  }
  return {chosen.begin(), chosen.end()};
}

namespace {

int to_int(const std::string& name, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("hyperparameter " + name + ": expected an integer, got '" + v + "'");
  }
  return out;
}

double to_double(const std::string& name, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out)) {
    throw ConfigError("hyperparameter " + name + ": expected a number, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& name, const std::string& v) {
  if (v == "true" || v == "True" || v == "1") return true;
  if (v == "false" || v == "False" || v == "0") return false;
  throw ConfigError("hyperparameter " + name + ": expected true or false, got '" + v + "'");
}

// "none", "unlimited" or an integer.
int to_limit(const std::string& name, const std::string& v) {
  if (v == "none" || v == "None" || v == "unlimited") return kUnlimited;
  return to_int(name, v);
}

[[noreturn]] void unknown(const char* model, const std::string& name) {
  throw ConfigError(std::string(model) + ": unknown hyperparameter '" + name + "'");
}

}  // namespace

ForestParams forest_params(const Assignment& a) {
  ForestParams p;
  for (const auto& [k, v] : a) {
    if (k == "n_estimators") p.n_estimators = to_int(k, v);
    else if (k == "bootstrap") p.bootstrap = to_bool(k, v);
    else if (k == "max_features") p.tree.max_features = parse_max_features(v);
    else if (k == "max_depth") p.tree.max_depth = to_limit(k, v);
    else if (k == "min_samples_split") p.tree.min_samples_split = to_int(k, v);
    else if (k == "min_samples_leaf") p.tree.min_samples_leaf = to_int(k, v);
    else if (k == "criterion") p.tree.criterion = parse_criterion(v);
    else if (k == "max_leaf_nodes") p.tree.max_leaf_nodes = to_limit(k, v);
    else unknown("rf", k);
  }
  p.validate();
  return p;
}

AdaBoostParams adaboost_params(const Assignment& a) {
  AdaBoostParams p;
  for (const auto& [k, v] : a) {
    if (k == "n_estimators") p.n_estimators = to_int(k, v);
    else if (k == "learning_rate") p.learning_rate = to_double(k, v);
    else if (k == "max_depth") p.tree.max_depth = to_limit(k, v);
    else if (k == "criterion") p.tree.criterion = parse_criterion(v);
    else unknown("adaboost", k);
  }
  p.validate();
  return p;
}

GradBoostParams gradboost_params(const Assignment& a) {
  GradBoostParams p;
  for (const auto& [k, v] : a) {
    if (k == "n_estimators") p.n_estimators = to_int(k, v);
    else if (k == "max_depth") p.max_depth = to_limit(k, v);
    else if (k == "eta" || k == "learning_rate") p.eta = to_double(k, v);
    else if (k == "min_child_weight") p.min_child_weight = to_double(k, v);
    else if (k == "max_leaf_nodes") p.max_leaf_nodes = to_limit(k, v);
    else if (k == "subsample") p.subsample = to_double(k, v);
    else if (k == "gamma") p.gamma = to_double(k, v);
    else if (k == "alpha") p.alpha = to_double(k, v);
    else if (k == "lambda") p.lambda = to_double(k, v);
    else if (k == "max_delta_step") p.max_delta_step = to_double(k, v);
    else if (k == "colsample_bytree") p.colsample_bytree = to_double(k, v);
    else if (k == "colsample_bylevel") p.colsample_bylevel = to_double(k, v);
    else if (k == "colsample_bynode") p.colsample_bynode = to_double(k, v);
    else unknown("gradboost", k);
  }
  p.validate();
  return p;
}

LogisticParams logistic_params(const Assignment& a) {
  LogisticParams p;
  for (const auto& [k, v] : a) {
    if (k == "l2_strength") p.l2_strength = to_double(k, v);
    else if (k == "max_iterations") p.max_iterations = to_int(k, v);
    else if (k == "convergence_tol") p.convergence_tol = to_double(k, v);
    else unknown("lr", k);
  }
  p.validate();
  return p;
}

TrainedModel fit_model(const ModelSpec& spec, const DesignMatrix& x, Rng& rng) {
  switch (spec.algorithm) {
    case Algorithm::kRandomForest: return fit_random_forest(x, forest_params(spec.params), rng);
    case Algorithm::kAdaBoost: return fit_adaboost(x, adaboost_params(spec.params), rng);
    case Algorithm::kGradBoost: return fit_gradboost(x, gradboost_params(spec.params), rng);
    case Algorithm::kLogistic: return fit_logistic(x, logistic_params(spec.params));
  }
  throw ConfigError("fit_model: unknown algorithm");
}

}  // namespace amimort
