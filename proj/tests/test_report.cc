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

#include <cmath>

#include "amimort/csv.h"
#include "amimort/error.h"
#include "amimort/report.h"

using namespace amimort;

namespace {

MetricSet metrics(double v) {
  MetricSet m;
  m.auc = v;
  m.accuracy = v;
  m.sensitivity = v;
  m.specificity = v;
  m.precision = v;
  return m;
}

CellResult cell(int fold, Algorithm model, const std::string& experiment, double test, double train,
                std::vector<double> importance = {}) {
  CellResult c;
  c.key = {1, fold, model, experiment};
  c.params = "p=1";
  c.test = metrics(test);
  c.train = metrics(train);
  if (!importance.empty()) {
    c.columns = {"a", "b", "c"};
    c.importance = std::move(importance);
  }
  const std::vector<int> labels = {0, 1, 0, 1};
  const std::vector<double> scores = {0.1, 0.9, 0.2 + 0.1 * fold, 0.7};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    c.predictions.push_back({c.key, static_cast<std::size_t>(4 * fold + i), labels[i], scores[i]});
  }
  return c;
}

// Three folds: RF beats LR by a constant 0.1 with small noise.
CvResultMatrix sample_matrix() {
  CvResultMatrix m;
  const std::vector<double> lr = {0.70, 0.75, 0.72};
  const std::vector<double> noise = {0.00, 0.01, -0.01};
  for (int f = 1; f <= 3; ++f) {
    const double base = lr[f - 1];
    m.add(cell(f, Algorithm::kLogistic, "I", base, base + 0.05));
    m.add(cell(f, Algorithm::kRandomForest, "I", base + 0.1 + noise[f - 1], 0.95, {0.5, 0.3, 0.2}));
    m.add(cell(f, Algorithm::kGradBoost, "I", base + 0.05, 0.9, {0.2, 0.2, 0.6}));
    m.add(cell(f, Algorithm::kRandomForest, "II", base + 0.07, 0.93, {0.5, 0.5, 0.0}));
  }
  return m;
}

}  // namespace

TEST_CASE("summaries skip undefined values") {
  const std::vector<double> v = {0.6, kUndefined, 0.8};
  const auto s = summarize(v);
  CHECK(s.n == 2);
  CHECK(s.mean == doctest::Approx(0.7));
  CHECK(s.sd == doctest::Approx(std::sqrt(0.02)));
  const std::vector<double> one = {0.5};
  CHECK_FALSE(is_defined(summarize(one).sd));
  CHECK(summarize({}).n == 0);
  CHECK(format_mean_sd({0.8312, 0.1049, 2}) == "0.83 ± 0.10");
  CHECK(format_mean_sd({kUndefined, kUndefined, 0}) == "NA ± NA");
}

TEST_CASE("performance table against the LR baseline") {
  const auto m = sample_matrix();
  const auto t = performance_table(m, "I");
  CHECK(t.has_baseline);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].model == Algorithm::kRandomForest);
  CHECK(t.rows[2].model == Algorithm::kLogistic);
  CHECK(t.rows[2].vs_baseline.empty());
  CHECK(t.rows[0].stats[0].mean == doctest::Approx(0.8233333333333333));
  CHECK(t.rows[0].stats[0].n == 3);
  CHECK(t.rows[1].vs_baseline.size() == metric_names().size());
  const auto& rf = t.rows[0].vs_baseline[0];
  CHECK(rf.df1 == 2);
  CHECK(rf.statistic == doctest::Approx(0.1 / (0.01 / std::sqrt(3.0))));
  CHECK(rf.p_value < 0.01);

  const auto md = render_performance_markdown(t);
  CHECK(md.find("| RF | 0.82 ± 0.03 **") != std::string::npos);
  CHECK(md.find("| LR | 0.72 ± 0.03 |") != std::string::npos);
  CHECK(md.find("paired t-test against LR") != std::string::npos);

  const auto rec = csv::parse(render_performance_csv(t));
  CHECK(rec.front().back() == "stars_vs_lr");
  CHECK(rec.size() == 1 + 3 * metric_names().size());

  const auto train = performance_table(m, "I", true);
  CHECK(train.rows[0].stats[0].mean == doctest::Approx(0.95));
  CHECK(render_performance_markdown(train).find("training splits") != std::string::npos);
}

TEST_CASE("a baseline-only table has no significance columns") {
  CvResultMatrix m;
  for (int f = 1; f <= 3; ++f) m.add(cell(f, Algorithm::kLogistic, "I", 0.7 + 0.01 * f, 0.8));
  const auto t = performance_table(m, "I");
  CHECK_FALSE(t.has_baseline);
  REQUIRE(t.rows.size() == 1);
  const auto md = render_performance_markdown(t);
  CHECK(md.find("*") == std::string::npos);
  CHECK(csv::parse(render_performance_csv(t)).front().size() == 7);
}

TEST_CASE("ablation table") {
  const auto m = sample_matrix();
  const auto rows = ablation_table(m, "I", "II");
  REQUIRE(rows.size() == metric_names().size());
  const auto& auc = rows[0];
  CHECK(auc.model == Algorithm::kRandomForest);
  CHECK(auc.metric == "auc");
  CHECK(auc.first.mean - auc.second.mean == doctest::Approx(0.03));
  CHECK(auc.test.df1 == 2);
  CHECK(auc.test.statistic > 0);
  const auto md = render_ablation_markdown(rows, "I", "II");
  CHECK(md.find("| RF | AUC | 0.82 ± 0.03 | 0.79 ± 0.03 | 0.030") != std::string::npos);
  CHECK(csv::parse(render_ablation_csv(rows)).size() == 1 + metric_names().size());
  CHECK(ablation_table(m, "I", "III").empty());
}

TEST_CASE("ANOVA across tree models") {
  const auto m = sample_matrix();
  const auto reps = anova_reports(m, "I");
  REQUIRE(reps.size() == metric_names().size());
  CHECK(reps[0].models == std::vector<Algorithm>{Algorithm::kRandomForest, Algorithm::kGradBoost});
  CHECK(reps[0].subjects == 3);
  CHECK(reps[0].tukey.size() == 1);
  CHECK(reps[0].tukey[0].mean_difference == doctest::Approx(0.05));
  const auto md = render_anova_markdown(reps);
  CHECK(md.find("| AUC |") != std::string::npos);
  CHECK(md.find("RF - GradBoost") != std::string::npos);
  CHECK(anova_reports(m, "II").empty());
  CHECK(render_anova_markdown({}).find("nothing to compare") != std::string::npos);
}

TEST_CASE("mean ROC and importances from the matrix") {
  const auto m = sample_matrix();
  const auto roc = mean_test_roc(m, Algorithm::kRandomForest, "I", 0.5);
  CHECK(roc.fpr == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(roc.tpr.back() == 1.0);
  CHECK(csv::parse(render_roc_csv(roc)).size() == 4);
  CHECK_THROWS_AS(mean_test_roc(m, Algorithm::kAdaBoost, "I"), DataError);

  const auto imp = cv_importance(m, Algorithm::kRandomForest, "I");
  CHECK(imp.of("a") == doctest::Approx(0.5));
  CHECK(imp.ranked() == std::vector<std::string>{"a", "b", "c"});
  const auto gb = cv_importance(m, Algorithm::kGradBoost, "I");
  CHECK(gb.top(1) == std::vector<std::string>{"c"});
  CHECK_THROWS_AS(cv_importance(m, Algorithm::kLogistic, "I"), DataError);
}

TEST_CASE("reports are pure views over the matrix csv") {
  const auto m = sample_matrix();
  auto back = CvResultMatrix::from_csv(m.to_csv());
  back.load_predictions_csv(m.predictions_csv());
  CHECK(render_performance_markdown(performance_table(back, "I")) ==
        render_performance_markdown(performance_table(m, "I")));
  CHECK(render_ablation_csv(ablation_table(back, "I", "II")) == render_ablation_csv(ablation_table(m, "I", "II")));
  CHECK(render_anova_markdown(anova_reports(back, "I")) == render_anova_markdown(anova_reports(m, "I")));
  CHECK(render_roc_csv(mean_test_roc(back, Algorithm::kRandomForest, "I")) ==
        render_roc_csv(mean_test_roc(m, Algorithm::kRandomForest, "I")));
  CHECK(cv_importance(back, Algorithm::kRandomForest, "II").importance ==
        cv_importance(m, Algorithm::kRandomForest, "II").importance);
}
