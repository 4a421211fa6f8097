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

#include <filesystem>

#include "amimort/ensembles.h"
#include "amimort/error.h"
#include "amimort/linear.h"
#include "amimort/model_io.h"
#include "synthetic.h"

using namespace amimort;

namespace {

std::vector<TrainedModel> fitted_models() {
  Rng rng(1);
  const auto x = testing::random_matrix(rng, 60, 4);
  GradBoostParams g;
  g.n_estimators = 10;
  g.subsample = 0.8;
  return {fit_random_forest(x, {.n_estimators = 5}, rng), fit_adaboost(x, {.n_estimators = 8}, rng),
          fit_gradboost(x, g, rng), fit_logistic(x, {})};
}

}  // namespace

TEST_CASE("models round trip through the text format") {
  Rng rng(2);
  const auto x = testing::random_matrix(rng, 30, 4);
  for (const auto& m : fitted_models()) {
    CAPTURE(to_string(m.algorithm()));
    const auto text = serialize_model(m);
    CHECK(text.starts_with("amimort-model 1\n"));
    const auto back = parse_model(text);
    CHECK(back.algorithm() == m.algorithm());
    CHECK(back.columns() == m.columns());
    CHECK(back.components() == m.components());
    CHECK(back.ledger() == m.ledger());
    CHECK(back.predict_proba(x) == m.predict_proba(x));
    CHECK(serialize_model(back) == text);
  }
}

TEST_CASE("save and load") {
  const auto dir = std::filesystem::temp_directory_path() / "amimort_test_model_io";
  std::filesystem::create_directories(dir);
  for (const auto& m : fitted_models()) {
    const auto path = dir / (std::string(to_string(m.algorithm())) + ".model");
    save_model(path, m);
    CHECK(load_model(path).components() == m.components());
  }
  CHECK_THROWS_AS(load_model(dir / "missing.model"), DataError);
}

TEST_CASE("malformed model text is rejected") {
  const auto text = serialize_model(fitted_models().front());
  CHECK_THROWS_AS(parse_model(""), DataError);
  CHECK_THROWS_AS(parse_model("amimort-model 99\n"), DataError);
  CHECK_THROWS_AS(parse_model(text.substr(0, text.size() / 2)), DataError);
  std::string wrong = text;
  wrong.replace(wrong.find("algorithm rf"), 12, "algorithm zz");
  CHECK_THROWS_AS(parse_model(wrong), Error);
  std::string trailing = text + "extra\n";
  CHECK_THROWS_AS(parse_model(trailing), DataError);
}
