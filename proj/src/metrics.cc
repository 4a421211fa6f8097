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

#include "amimort/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "amimort/error.h"

namespace amimort {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ConfigError("metrics: " + std::to_string(scores.size()) + " scores but " + std::to_string(labels.size()) +
                      " labels");
  }
  if (scores.empty()) throw ConfigError("metrics: empty input");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw DataError("metrics: labels must be 0 or 1");
    if (std::isnan(scores[i])) throw DataError("metrics: NaN score");
  }
}

double ratio(long num, long den) { return den == 0 ? kUndefined : static_cast<double>(num) / static_cast<double>(den); }

std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

MetricSet confusion_metrics(std::span<const double> scores, std::span<const int> labels, double threshold) {
  check_inputs(scores, labels);
  MetricSet m;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      (predicted ? m.tp : m.fn) += 1;
    } else {
      (predicted ? m.fp : m.tn) += 1;
    }
  }
  m.accuracy = ratio(m.tp + m.tn, static_cast<long>(scores.size()));
  m.sensitivity = ratio(m.tp, m.tp + m.fn);
  m.specificity = ratio(m.tn, m.tn + m.fp);
  m.precision = ratio(m.tp, m.tp + m.fp);
  return m;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum = 0.0;  // sum of positive mid-ranks, doubled to stay integral
  long n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double doubled_mid_rank = static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        rank_sum += doubled_mid_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const long n_neg = static_cast<long>(n) - n_pos;
  if (n_pos == 0 || n_neg == 0) return kUndefined;
  const double u2 = rank_sum - static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u2 / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

MetricSet evaluate(std::span<const double> scores, std::span<const int> labels, double threshold) {
  MetricSet m = confusion_metrics(scores, labels, threshold);
  m.auc = auc(scores, labels);
  return m;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  const long n_pos = std::count(labels.begin(), labels.end(), 1);
  const long n_neg = static_cast<long>(labels.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) throw ConfigError("roc_curve: both classes must be present");

  const auto order = descending_order(scores);
  RocCurve c;
  c.fpr.push_back(0.0);
  c.tpr.push_back(0.0);
  c.thresholds.push_back(std::numeric_limits<double>::infinity());
  long tp = 0;
  long fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    c.fpr.push_back(static_cast<double>(fp) / static_cast<double>(n_neg));
    c.tpr.push_back(static_cast<double>(tp) / static_cast<double>(n_pos));
    c.thresholds.push_back(s);
  }
  return c;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("trapezoid: x and y differ in length");
  double area = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) area += (x[i] - x[i - 1]) * (y[i] + y[i - 1]) / 2.0;
  return area;
}

double trapezoid(const RocCurve& curve) { return trapezoid(curve.fpr, curve.tpr); }

namespace {

double tpr_at(const RocCurve& c, double f) {
  // Last point with fpr <= f gives the top of any vertical segment at f.
  const auto it = std::upper_bound(c.fpr.begin(), c.fpr.end(), f);
  if (it == c.fpr.begin()) return 0.0;
  const std::size_t hi = static_cast<std::size_t>(it - c.fpr.begin());
  const std::size_t lo = hi - 1;
  if (c.fpr[lo] == f || hi == c.fpr.size()) return c.tpr[lo];
  const double t = (f - c.fpr[lo]) / (c.fpr[hi] - c.fpr[lo]);
  return c.tpr[lo] + t * (c.tpr[hi] - c.tpr[lo]);
}

}  // namespace

RocCurve mean_roc(const std::vector<RocCurve>& curves, double step) {
  if (curves.empty()) throw ConfigError("mean_roc: no curves");
  if (!(step > 0.0) || step > 1.0) throw ConfigError("mean_roc: step must lie in (0, 1]");
  const auto n_steps = static_cast<std::size_t>(std::llround(1.0 / step));
  RocCurve out;
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double f = k == n_steps ? 1.0 : static_cast<double>(k) * step;
    double sum = 0.0;
    for (const auto& c : curves) sum += tpr_at(c, f);
    out.fpr.push_back(f);
    out.tpr.push_back(k == n_steps ? 1.0 : sum / static_cast<double>(curves.size()));
    out.thresholds.push_back(kUndefined);
  }
  return out;
}

}  // namespace amimort
