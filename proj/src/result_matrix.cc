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

#include "amimort/result_matrix.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "amimort/csv.h"
#include "amimort/error.h"

namespace amimort {

namespace {

const csv::Record kMatrixHeader = {"repeat", "fold", "model", "experiment", "metric", "value", "params"};
const csv::Record kPredictionHeader = {"repeat", "fold", "model", "experiment", "row", "label", "score"};

long parse_long(const std::string& s) {
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw DataError("result matrix: bad integer '" + s + "'");
  return v;
}

double parse_value(const std::string& s) {
  if (s == "NA") return kUndefined;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw DataError("result matrix: bad number '" + s + "'");
  return v;
}

CellKey parse_key(const csv::Record& r) {
  CellKey k;
  k.repeat = static_cast<int>(parse_long(r[0]));
  k.fold = static_cast<int>(parse_long(r[1]));
  k.model = parse_algorithm(r[2]);
  k.experiment = r[3];
  return k;
}

csv::Record key_fields(const CellKey& k) {
  return {std::to_string(k.repeat), std::to_string(k.fold), to_string(k.model), k.experiment};
}

}  // namespace

double metric_value(const MetricSet& m, const std::string& name) {
  if (name == "auc") return m.auc;
  if (name == "accuracy") return m.accuracy;
  if (name == "sensitivity") return m.sensitivity;
  if (name == "specificity") return m.specificity;
  if (name == "precision") return m.precision;
  throw ConfigError("unknown metric '" + name + "'");
}

std::vector<MatrixEntry> CellResult::entries() const {
  std::vector<MatrixEntry> out;
  for (const auto& name : metric_names()) {
    out.push_back({key, name, metric_value(test, name), params});
    out.push_back({key, "train_" + name, metric_value(train, name), params});
  }
  for (std::size_t i = 0; i < importance.size(); ++i) {
    out.push_back({key, "importance:" + columns[i], importance[i], params});
  }
  out.push_back({key, kCompleteMarker, 1.0, params});
  return out;
}

void CvResultMatrix::add(const CellResult& cell) {
  for (auto& e : cell.entries()) add_entry(std::move(e));
  for (const auto& p : cell.predictions) predictions_.push_back(p);
}

void CvResultMatrix::add_entry(MatrixEntry entry) {
  auto key = std::make_pair(entry.key, entry.metric);
  entries_[std::move(key)] = std::move(entry);
}

std::vector<MatrixEntry> CvResultMatrix::entries() const {
  std::vector<MatrixEntry> out;
  out.reserve(entries_.size());
  for (const auto& [k, e] : entries_) out.push_back(e);
  return out;
}

std::vector<PredictionEntry> CvResultMatrix::predictions() const {
  auto out = predictions_;
  std::sort(out.begin(), out.end(), [](const PredictionEntry& a, const PredictionEntry& b) {
    if (!(a.key == b.key)) return a.key < b.key;
    return a.row < b.row;
  });
  return out;
}

std::set<CellKey> CvResultMatrix::cells() const {
  std::set<CellKey> out;
  for (const auto& [k, e] : entries_) {
    if (e.metric == kCompleteMarker) out.insert(e.key);
  }
  return out;
}

std::vector<Algorithm> CvResultMatrix::models() const {
  std::set<int> ids;
  for (const auto& [k, e] : entries_) ids.insert(static_cast<int>(e.key.model));
  std::vector<Algorithm> out;
  for (int id : ids) out.push_back(static_cast<Algorithm>(id));
  return out;
}

std::vector<std::string> CvResultMatrix::experiments() const {
  std::set<std::string> names;
  for (const auto& [k, e] : entries_) names.insert(e.key.experiment);
  return {names.begin(), names.end()};
}

std::set<std::string> CvResultMatrix::metrics() const {
  std::set<std::string> names;
  for (const auto& [k, e] : entries_) {
    if (e.metric != kCompleteMarker) names.insert(e.metric);
  }
  return names;
}

std::vector<std::pair<int, int>> CvResultMatrix::units(Algorithm model, const std::string& experiment) const {
  std::vector<std::pair<int, int>> out;
  for (const auto& k : cells()) {
    if (k.model == model && k.experiment == experiment) out.emplace_back(k.repeat, k.fold);
  }
  return out;
}

std::vector<double> CvResultMatrix::values(Algorithm model, const std::string& experiment,
                                           const std::string& metric) const {
  std::vector<double> out;
  for (const auto& [repeat, fold] : units(model, experiment)) {
    auto it = entries_.find({CellKey{repeat, fold, model, experiment}, metric});
    out.push_back(it == entries_.end() ? kUndefined : it->second.value);
  }
  return out;
}

std::string CvResultMatrix::params(const CellKey& key) const {
  auto it = entries_.find({key, kCompleteMarker});
  return it == entries_.end() ? std::string() : it->second.params;
}

bool CvResultMatrix::complete(int n_repeats, int n_folds) const {
  const auto done = cells();
  for (Algorithm m : models()) {
    for (const auto& e : experiments()) {
      for (int r = 1; r <= n_repeats; ++r) {
        for (int f = 1; f <= n_folds; ++f) {
          if (!done.contains(CellKey{r, f, m, e})) return false;
        }
      }
    }
  }
  return true;
}

std::string format_entry(const MatrixEntry& e) {
  auto rec = key_fields(e.key);
  rec.push_back(e.metric);
  rec.push_back(csv::format_number(e.value));
  rec.push_back(e.params);
  return csv::format_record(rec);
}

std::string format_prediction(const PredictionEntry& p) {
  auto rec = key_fields(p.key);
  rec.push_back(std::to_string(p.row));
  rec.push_back(std::to_string(p.label));
  rec.push_back(csv::format_number(p.score));
  return csv::format_record(rec);
}

std::string CvResultMatrix::to_csv() const {
  std::string out = csv::format_record(kMatrixHeader);
  for (const auto& [k, e] : entries_) out += format_entry(e);
  return out;
}

std::string CvResultMatrix::predictions_csv() const {
  std::string out = csv::format_record(kPredictionHeader);
  for (const auto& p : predictions()) out += format_prediction(p);
  return out;
}

CvResultMatrix CvResultMatrix::from_csv(const std::string& text, bool lenient) {
  CvResultMatrix m;
  std::vector<csv::Record> records;
  try {
    records = csv::parse(text);
  } catch (const Error&) {
    if (!lenient) throw;
    return m;
  }
  if (records.empty()) {
    if (lenient) return m;
    throw DataError("result matrix: empty file");
  }
  if (records.front() != kMatrixHeader) throw DataError("result matrix: unexpected header");
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    try {
      if (r.size() != kMatrixHeader.size()) throw DataError("result matrix: record " + std::to_string(i) + " has " +
                                                             std::to_string(r.size()) + " fields");
      m.add_entry({parse_key(r), r[4], parse_value(r[5]), r[6]});
    } catch (const Error&) {
      if (!lenient) throw;
      break;
    }
  }
  return m;
}

void CvResultMatrix::load_predictions_csv(const std::string& text, bool lenient) {
  std::vector<csv::Record> records;
  try {
    records = csv::parse(text);
  } catch (const Error&) {
    if (!lenient) throw;
    return;
  }
  if (records.empty()) return;
  if (records.front() != kPredictionHeader) throw DataError("predictions: unexpected header");
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    try {
      if (r.size() != kPredictionHeader.size()) throw DataError("predictions: malformed record");
      const long label = parse_long(r[5]);
      if (label != 0 && label != 1) throw DataError("predictions: label must be 0 or 1");
      predictions_.push_back({parse_key(r), static_cast<std::size_t>(parse_long(r[4])), static_cast<int>(label),
                              parse_value(r[6])});
    } catch (const Error&) {
      if (!lenient) throw;
      break;
    }
  }
}

CvResultMatrix CvResultMatrix::read(const std::filesystem::path& matrix_csv) {
  std::ifstream in(matrix_csv, std::ios::binary);
  if (!in) throw DataError("cannot open result matrix '" + matrix_csv.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_csv(buf.str());
}

CvResultMatrix CvResultMatrix::restricted_to(const std::set<CellKey>& keep) const {
  CvResultMatrix m;
  for (const auto& [k, e] : entries_) {
    if (keep.contains(e.key)) m.entries_.emplace(k, e);
  }
  for (const auto& p : predictions_) {
    if (keep.contains(p.key)) m.predictions_.push_back(p);
  }
  return m;
}

}  // namespace amimort
