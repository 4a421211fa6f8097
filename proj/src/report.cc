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

#include "amimort/report.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

#include "amimort/csv.h"
#include "amimort/error.h"

namespace amimort {

namespace {

std::string fixed(double v, int decimals) {
  if (!is_defined(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string out = buf;
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::string with_stars(std::string text, const std::string& stars) {
  return stars.empty() ? text : text + " " + stars;
}

std::string format_p(double p) {
  if (!is_defined(p)) return "NA";
  if (p < 0.001) return "<0.001";
  return fixed(p, 3);
}

std::string metric_label(const std::string& metric) {
  if (metric == "auc") return "AUC";
  std::string s = metric;
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string prefixed(const std::string& metric, bool train) { return train ? "train_" + metric : metric; }

}  // namespace

SummaryStat summarize(std::span<const double> values) {
  std::vector<double> defined;
  for (double v : values) {
    if (is_defined(v)) defined.push_back(v);
  }
  SummaryStat s;
  s.n = defined.size();
  if (!defined.empty()) s.mean = mean(defined);
  if (defined.size() >= 2) s.sd = sample_sd(defined);
  return s;
}

std::string format_mean_sd(const SummaryStat& s, int decimals) {
  return fixed(s.mean, decimals) + " ± " + fixed(s.sd, decimals);
}

std::pair<std::vector<double>, std::vector<double>> paired_values(const CvResultMatrix& m, Algorithm model_a,
                                                                  const std::string& experiment_a, Algorithm model_b,
                                                                  const std::string& experiment_b,
                                                                  const std::string& metric) {
  const auto units_a = m.units(model_a, experiment_a);
  const auto values_a = m.values(model_a, experiment_a, metric);
  const auto units_b = m.units(model_b, experiment_b);
  const auto values_b = m.values(model_b, experiment_b, metric);
  std::map<std::pair<int, int>, double> b;
  for (std::size_t i = 0; i < units_b.size(); ++i) b[units_b[i]] = values_b[i];
  std::pair<std::vector<double>, std::vector<double>> out;
  for (std::size_t i = 0; i < units_a.size(); ++i) {
    auto it = b.find(units_a[i]);
    if (it == b.end() || !is_defined(values_a[i]) || !is_defined(it->second)) continue;
    out.first.push_back(values_a[i]);
    out.second.push_back(it->second);
  }
  return out;
}

PerformanceTable performance_table(const CvResultMatrix& m, const std::string& experiment, bool train,
                                   const PairedTOptions& options) {
  PerformanceTable t;
  t.experiment = experiment;
  t.train = train;
  t.metrics = metric_names();
  const auto models = m.models();
  const bool lr = std::find(models.begin(), models.end(), Algorithm::kLogistic) != models.end();
  t.has_baseline = lr && models.size() > 1;
  for (Algorithm model : models) {
    if (m.units(model, experiment).empty()) continue;
    PerformanceRow row{model, {}, {}};
    for (const auto& metric : t.metrics) {
      row.stats.push_back(summarize(m.values(model, experiment, prefixed(metric, train))));
      if (t.has_baseline && model != Algorithm::kLogistic) {
        const auto [a, b] =
            paired_values(m, model, experiment, Algorithm::kLogistic, experiment, prefixed(metric, train));
        row.vs_baseline.push_back(a.size() >= 2 ? paired_t_test(a, b, options) : TestResult{});
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string render_performance_markdown(const PerformanceTable& t) {
  std::string out = "## Experiment " + t.experiment + (t.train ? " (training splits)" : " (test splits)") + "\n\n";
  out += "| Model |";
  for (const auto& metric : t.metrics) out += " " + metric_label(metric) + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < t.metrics.size(); ++i) out += "---|";
  out += "\n";
  for (const auto& row : t.rows) {
    out += std::string("| ") + display_name(row.model) + " |";
    for (std::size_t i = 0; i < t.metrics.size(); ++i) {
      out += " " + format_mean_sd(row.stats[i]);
      if (!row.vs_baseline.empty()) {
        const std::string stars = row.vs_baseline[i].stars();
        if (!stars.empty()) out += " " + stars;
      }
      out += " |";
    }
    out += "\n";
  }
  out += "\nMean ± sd over " + std::to_string(t.rows.empty() ? 0 : t.rows.front().stats.front().n) +
         " cross-validation cells.";
  if (t.has_baseline) out += " *, **, ***: paired t-test against LR with p < 0.05, 0.01, 0.001.";
  out += "\n";
  return out;
}

std::string render_performance_csv(const PerformanceTable& t) {
  csv::Record header = {"experiment", "split", "model", "metric", "mean", "sd", "n"};
  if (t.has_baseline) {
    for (const char* h : {"t_vs_lr", "p_vs_lr", "stars_vs_lr"}) header.push_back(h);
  }
  std::string out = csv::format_record(header);
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < t.metrics.size(); ++i) {
      csv::Record rec = {t.experiment,
                         t.train ? "train" : "test",
                         display_name(row.model),
                         t.metrics[i],
                         csv::format_number(row.stats[i].mean),
                         csv::format_number(row.stats[i].sd),
                         std::to_string(row.stats[i].n)};
      if (t.has_baseline) {
        const TestResult r = row.vs_baseline.empty() ? TestResult{} : row.vs_baseline[i];
        rec.push_back(csv::format_number(r.statistic));
        rec.push_back(csv::format_number(r.p_value));
        rec.push_back(r.stars());
      }
      out += csv::format_record(rec);
    }
  }
  return out;
}

std::vector<AblationRow> ablation_table(const CvResultMatrix& m, const std::string& first, const std::string& second,
                                        bool train, const PairedTOptions& options) {
  std::vector<AblationRow> rows;
  for (Algorithm model : m.models()) {
    if (m.units(model, first).empty() || m.units(model, second).empty()) continue;
    for (const auto& metric : metric_names()) {
      const std::string name = prefixed(metric, train);
      AblationRow row{model, metric, summarize(m.values(model, first, name)),
                      summarize(m.values(model, second, name)), {}};
      const auto [a, b] = paired_values(m, model, first, model, second, name);
      if (a.size() >= 2) row.test = paired_t_test(a, b, options);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string render_ablation_markdown(const std::vector<AblationRow>& rows, const std::string& first,
                                     const std::string& second) {
  std::string out = "## Experiment " + first + " vs experiment " + second + "\n\n";
  out += "| Model | Metric | Experiment " + first + " | Experiment " + second + " | Difference | p |\n";
  out += "|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    const double diff = r.first.mean - r.second.mean;
    out += std::string("| ") + display_name(r.model) + " | " + metric_label(r.metric) + " | " +
           format_mean_sd(r.first) + " | " + format_mean_sd(r.second) + " | " + with_stars(fixed(diff, 3), r.test.stars()) +
           " | " + format_p(r.test.p_value) + " |\n";
  }
  out += "\nPaired t-test on matched cross-validation cells; *, **, ***: p < 0.05, 0.01, 0.001.\n";
  return out;
}

std::string render_ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out = csv::format_record(
      {"model", "metric", "mean_first", "sd_first", "mean_second", "sd_second", "t", "p", "stars"});
  for (const auto& r : rows) {
    out += csv::format_record({display_name(r.model), r.metric, csv::format_number(r.first.mean),
                               csv::format_number(r.first.sd), csv::format_number(r.second.mean),
                               csv::format_number(r.second.sd), csv::format_number(r.test.statistic),
                               csv::format_number(r.test.p_value), r.test.stars()});
  }
  return out;
}

std::vector<AnovaReport> anova_reports(const CvResultMatrix& m, const std::string& experiment, double alpha) {
  std::vector<Algorithm> models;
  for (Algorithm a : m.models()) {
    if (is_tree_based(a) && !m.units(a, experiment).empty()) models.push_back(a);
  }
  std::vector<AnovaReport> out;
  if (models.size() < 2) return out;

  for (const auto& metric : metric_names()) {
    // Subjects: units where every model has a defined value.
    std::map<std::pair<int, int>, std::vector<double>> rows;
    for (std::size_t j = 0; j < models.size(); ++j) {
      const auto units = m.units(models[j], experiment);
      const auto values = m.values(models[j], experiment, metric);
      for (std::size_t i = 0; i < units.size(); ++i) {
        auto& r = rows[units[i]];
        r.resize(models.size(), kUndefined);
        r[j] = values[i];
      }
    }
    std::vector<std::vector<double>> complete;
    for (const auto& [unit, r] : rows) {
      if (std::all_of(r.begin(), r.end(), is_defined)) complete.push_back(r);
    }
    if (complete.size() < 2) continue;
    const Matrix2D data = Matrix2D::from_rows(complete);
    AnovaReport rep;
    rep.metric = metric;
    rep.models = models;
    rep.subjects = complete.size();
    rep.anova = rm_anova(data);
    rep.tukey = tukey_hsd(data, alpha);
    out.push_back(std::move(rep));
  }
  return out;
}

std::string render_anova_markdown(const std::vector<AnovaReport>& reports) {
  std::string out = "## Repeated-measures ANOVA across tree-based models\n\n";
  if (reports.empty()) return out + "Fewer than two tree-based models; nothing to compare.\n";
  out += "| Metric | F | df | p |\n|---|---|---|---|\n";
  for (const auto& r : reports) {
    out += "| " + metric_label(r.metric) + " | " + fixed(r.anova.test.statistic, 3) + " | (" +
           fixed(r.anova.test.df1, 0) + ", " + fixed(r.anova.test.df2, 0) + ") | " + with_stars(format_p(r.anova.test.p_value), r.anova.test.stars()) + " |\n";
  }
  out += "\n## Tukey HSD\n\n| Metric | Pair | Mean difference | q | q critical | p | Significant |\n";
  out += "|---|---|---|---|---|---|---|\n";
  for (const auto& r : reports) {
    for (const auto& c : r.tukey) {
      out += "| " + metric_label(r.metric) + " | " + display_name(r.models[c.first]) + " - " +
             display_name(r.models[c.second]) + " | " + fixed(c.mean_difference, 4) + " | " +
             fixed(c.test.statistic, 3) + " | " + fixed(c.q_critical, 3) + " | " + format_p(c.test.p_value) + " | " +
             (c.significant ? "yes" : "no") + " |\n";
    }
  }
  return out;
}

RocCurve mean_test_roc(const CvResultMatrix& m, Algorithm model, const std::string& experiment, double step) {
  std::map<CellKey, std::pair<std::vector<double>, std::vector<int>>> by_cell;
  for (const auto& p : m.predictions()) {
    if (p.key.model != model || p.key.experiment != experiment) continue;
    auto& [scores, labels] = by_cell[p.key];
    scores.push_back(p.score);
    labels.push_back(p.label);
  }
  std::vector<RocCurve> curves;
  for (const auto& [key, data] : by_cell) {
    const auto& labels = data.second;
    const bool both = std::count(labels.begin(), labels.end(), 1) > 0 && std::count(labels.begin(), labels.end(), 0) > 0;
    if (both) curves.push_back(roc_curve(data.first, labels));
  }
  if (curves.empty()) {
    throw DataError(std::string("no test predictions for ") + display_name(model) + ", experiment " + experiment);
  }
  return mean_roc(curves, step);
}

std::string render_roc_csv(const RocCurve& curve) {
  std::string out = csv::format_record({"fpr", "tpr"});
  for (std::size_t i = 0; i < curve.fpr.size(); ++i) {
    out += csv::format_record({csv::format_number(curve.fpr[i]), csv::format_number(curve.tpr[i])});
  }
  return out;
}

ImportanceReport cv_importance(const CvResultMatrix& m, Algorithm model, const std::string& experiment) {
  const std::string prefix = "importance:";
  std::map<CellKey, std::pair<std::vector<std::string>, std::vector<double>>> by_cell;
  for (const auto& e : m.entries()) {
    if (e.key.model != model || e.key.experiment != experiment || e.metric.rfind(prefix, 0) != 0) continue;
    auto& [names, values] = by_cell[e.key];
    names.push_back(e.metric.substr(prefix.size()));
    values.push_back(e.value);
  }
  if (by_cell.empty()) {
    throw DataError(std::string("no importances for ") + display_name(model) + ", experiment " + experiment);
  }
  std::vector<ImportanceReport> reports;
  for (auto& [key, data] : by_cell) {
    reports.push_back(make_importance_report(display_name(model), data.first, data.second));
  }
  return aggregate_importance(reports);
}

}  // namespace amimort
