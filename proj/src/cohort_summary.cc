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

#include "amimort/cohort_summary.h"

#include <cstdio>

#include "amimort/csv.h"
#include "amimort/error.h"

namespace amimort {
namespace {

std::string fixed(double v, int decimals) {
  if (!is_defined(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string format_p(double p) {
  if (!is_defined(p)) return "NA";
  if (p < 0.001) return "<0.001";
  return fixed(p, 3);
}

}  // namespace

CohortSummary cohort_summary(const CohortTable& cohort, const SummaryOptions& options) {
  CohortSummary summary;
  summary.n_died = cohort.n_died();
  summary.n_survived = cohort.n_survived();

  const FeatureSchema& schema = cohort.schema();
  for (std::size_t f = 0; f < schema.size(); ++f) {
    std::vector<double> died;
    std::vector<double> survived;
    for (std::size_t r = 0; r < cohort.n_rows(); ++r) {
      (cohort.outcome(r) == 1 ? died : survived).push_back(cohort.value(r, f));
    }

    SummaryRow row;
    row.feature = schema[f].name;
    row.kind = schema[f].kind;
    row.died.n = died.size();
    row.survived.n = survived.size();

    if (row.kind == FeatureKind::kNumeric) {
      row.died.mean = mean(died);
      row.died.sd = sample_sd(died);
      row.survived.mean = mean(survived);
      row.survived.sd = sample_sd(survived);
      if (died.size() >= 2 && survived.size() >= 2) {
        row.test = two_sample_t_test(died, survived, options.pooled_t);
      }
    } else {
      auto ones = [](const std::vector<double>& v) {
        long c = 0;
        for (double x : v) c += x == 1.0 ? 1 : 0;
        return c;
      };
      row.died.count = ones(died);
      row.survived.count = ones(survived);
      if (!died.empty()) row.died.percent = 100.0 * static_cast<double>(row.died.count) / static_cast<double>(died.size());
      if (!survived.empty()) row.survived.percent = 100.0 * static_cast<double>(row.survived.count) / static_cast<double>(survived.size());
      const std::array<std::array<long, 2>, 2> table = {{
          {row.died.count, static_cast<long>(died.size()) - row.died.count},
          {row.survived.count, static_cast<long>(survived.size()) - row.survived.count},
      }};
      try {
        row.test = chi_square_2x2(table, options.yates);
      } catch (const ConfigError&) {
        // zero marginal: leave undefined
      }
    }
    row.significant = row.test.significant(options.alpha);
    summary.rows.push_back(std::move(row));
  }
  return summary;
}

std::string render_summary_csv(const CohortSummary& summary) {
  std::string out = csv::format_record({"feature", "kind", "died_n", "died_mean", "died_sd", "died_count",
                                        "died_percent", "survived_n", "survived_mean", "survived_sd",
                                        "survived_count", "survived_percent", "statistic", "p_value",
                                        "significant"});
  for (const auto& row : summary.rows) {
    const bool numeric = row.kind == FeatureKind::kNumeric;
    auto num = [&](double v, bool applies) { return applies ? csv::format_number(v) : std::string(); };
    auto cnt = [&](long v, bool applies) { return applies ? std::to_string(v) : std::string(); };
    out += csv::format_record({
        row.feature,
        to_string(row.kind),
        std::to_string(row.died.n),
        num(row.died.mean, numeric),
        num(row.died.sd, numeric),
        cnt(row.died.count, !numeric),
        num(row.died.percent, !numeric),
        std::to_string(row.survived.n),
        num(row.survived.mean, numeric),
        num(row.survived.sd, numeric),
        cnt(row.survived.count, !numeric),
        num(row.survived.percent, !numeric),
        csv::format_number(row.test.statistic),
        csv::format_number(row.test.p_value),
        row.significant ? "1" : "0",
    });
  }
  return out;
}

std::string render_summary_markdown(const CohortSummary& summary) {
  std::string out = "| Variable | Died (N=" + std::to_string(summary.n_died) + ") | Survived (N=" +
                    std::to_string(summary.n_survived) + ") | P-value |\n";
  out += "|---|---|---|---|\n";
  for (const auto& row : summary.rows) {
    auto cell = [&](const GroupColumn& g) {
      if (row.kind == FeatureKind::kNumeric) return fixed(g.mean, 1) + " (" + fixed(g.sd, 1) + ")";
      return std::to_string(g.count) + " (" + fixed(g.percent, 0) + "%)";
    };
    out += "| " + row.feature + " | " + cell(row.died) + " | " + cell(row.survived) + " | " +
           format_p(row.test.p_value) + (row.significant ? "*" : "") + " |\n";
  }
  out += "\nMean (SD) for numeric variables, n (%) for binary variables. Numeric: two-sample t-test; "
         "binary: chi-square test. *: p < 0.05. NA: undefined (degenerate group).\n";
  return out;
}

}  // namespace amimort
