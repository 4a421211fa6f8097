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

#include "amimort/model_io.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "amimort/csv.h"
#include "amimort/error.h"

namespace amimort {

namespace {

class Writer {
 public:
  Writer& word(const std::string& w) {
    out_ << w << ' ';
    return *this;
  }
  Writer& num(double v) { return word(csv::format_number(v)); }
  Writer& integer(long long v) { return word(std::to_string(v)); }
  void line() {
    std::string s = out_.str();
    if (!s.empty() && s.back() == ' ') s.pop_back();
    text_ += s + "\n";
    out_.str("");
  }
  const std::string& text() const { return text_; }

 private:
  std::ostringstream out_;
  std::string text_;
};

void write_tree(Writer& w, const Tree& t) {
  w.word("tree").integer(static_cast<long long>(t.nodes().size())).line();
  for (const auto& n : t.nodes()) {
    w.integer(n.feature).num(n.threshold).integer(n.left).integer(n.right).num(n.value).num(n.weight).num(n.gain).line();
  }
}

void write_values(Writer& w, const std::string& key, const std::vector<double>& v) {
  w.word(key).integer(static_cast<long long>(v.size()));
  for (double x : v) w.num(x);
  w.line();
}

class Reader {
 public:
  explicit Reader(const std::string& text) : in_(text) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw DataError("model file: unexpected end of input");
    return w;
  }
  void expect(const std::string& key) {
    const std::string w = word();
    if (w != key) throw DataError("model file: expected '" + key + "', found '" + w + "'");
  }
  double num() {
    const std::string w = word();
    if (w == "NA") return kNaN;
    char* end = nullptr;
    const double v = std::strtod(w.c_str(), &end);
    if (end != w.c_str() + w.size()) throw DataError("model file: bad number '" + w + "'");
    return v;
  }
  long long integer() {
    const std::string w = word();
    char* end = nullptr;
    const long long v = std::strtoll(w.c_str(), &end, 10);
    if (w.empty() || end != w.c_str() + w.size()) throw DataError("model file: bad integer '" + w + "'");
    return v;
  }
  std::size_t count() {
    const long long v = integer();
    if (v < 0 || v > 100'000'000) throw DataError("model file: bad count");
    return static_cast<std::size_t>(v);
  }
  std::vector<double> values(const std::string& key) {
    expect(key);
    std::vector<double> v(count());
    for (double& x : v) x = num();
    return v;
  }
  bool at_end() {
    std::string w;
    return !(in_ >> w);
  }

 private:
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::istringstream in_;
};

Tree read_tree(Reader& r, std::size_t n_features) {
  r.expect("tree");
  std::vector<TreeNode> nodes(r.count());
  for (auto& n : nodes) {
    n.feature = static_cast<int>(r.integer());
    n.threshold = r.num();
    n.left = static_cast<int>(r.integer());
    n.right = static_cast<int>(r.integer());
    n.value = r.num();
    n.weight = r.num();
    n.gain = r.num();
  }
  return Tree(std::move(nodes), n_features);
}

std::vector<Tree> read_trees(Reader& r, const std::string& key, std::size_t n_features) {
  r.expect(key);
  std::vector<Tree> trees(r.count());
  for (auto& t : trees) t = read_tree(r, n_features);
  return trees;
}

}  // namespace

std::string serialize_model(const TrainedModel& model) {
  Writer w;
  w.word("amimort-model").integer(kModelFormatVersion).line();
  w.word("algorithm").word(to_string(model.algorithm())).line();
  w.word("columns").integer(static_cast<long long>(model.columns().size()));
  for (const auto& c : model.columns()) {
    if (c.empty() || std::any_of(c.begin(), c.end(), [](unsigned char ch) { return std::isspace(ch); })) {
      throw DataError("model file: column name '" + c + "' is empty or contains whitespace");
    }
    w.word(c);
  }
  w.line();
  write_values(w, "ledger", model.ledger().decrease);

  if (const auto* f = std::get_if<ForestComponents>(&model.components())) {
    w.word("trees").integer(static_cast<long long>(f->trees.size())).line();
    for (const auto& t : f->trees) write_tree(w, t);
  } else if (const auto* a = std::get_if<AdaBoostComponents>(&model.components())) {
    write_values(w, "alphas", a->alphas);
    write_values(w, "errors", a->errors);
    w.word("stumps").integer(static_cast<long long>(a->stumps.size())).line();
    for (const auto& t : a->stumps) write_tree(w, t);
  } else if (const auto* g = std::get_if<GradBoostComponents>(&model.components())) {
    w.word("base_score").num(g->base_score).line();
    write_values(w, "train_loss", g->train_loss);
    w.word("trees").integer(static_cast<long long>(g->trees.size())).line();
    for (const auto& t : g->trees) write_tree(w, t);
  } else {
    const auto& l = model.as<LogisticComponents>();
    w.word("intercept").num(l.intercept).line();
    write_values(w, "coefficients", l.coefficients);
    w.word("converged").integer(l.converged ? 1 : 0).word("iterations").integer(l.iterations).line();
  }
  w.word("end").line();
  return w.text();
}

TrainedModel parse_model(const std::string& text) {
  Reader r(text);
  r.expect("amimort-model");
  const long long version = r.integer();
  if (version != kModelFormatVersion) {
    throw DataError("model file: unsupported format version " + std::to_string(version));
  }
  r.expect("algorithm");
  const Algorithm algorithm = parse_algorithm(r.word());
  r.expect("columns");
  std::vector<std::string> columns(r.count());
  for (auto& c : columns) c = r.word();
  ImpurityLedger ledger;
  ledger.decrease = r.values("ledger");
  const std::size_t p = columns.size();

  ModelComponents components;
  switch (algorithm) {
    case Algorithm::kRandomForest:
      components = ForestComponents{read_trees(r, "trees", p)};
      break;
    case Algorithm::kAdaBoost: {
      AdaBoostComponents a;
      a.alphas = r.values("alphas");
      a.errors = r.values("errors");
      a.stumps = read_trees(r, "stumps", p);
      if (a.alphas.size() != a.stumps.size()) throw DataError("model file: alpha count differs from stump count");
      components = std::move(a);
      break;
    }
    case Algorithm::kGradBoost: {
      GradBoostComponents g;
      r.expect("base_score");
      g.base_score = r.num();
      g.train_loss = r.values("train_loss");
      g.trees = read_trees(r, "trees", p);
      components = std::move(g);
      break;
    }
    case Algorithm::kLogistic: {
      LogisticComponents l;
      r.expect("intercept");
      l.intercept = r.num();
      l.coefficients = r.values("coefficients");
      if (l.coefficients.size() != p) throw DataError("model file: coefficient count differs from columns");
      r.expect("converged");
      l.converged = r.integer() != 0;
      r.expect("iterations");
      l.iterations = static_cast<int>(r.integer());
      components = std::move(l);
      break;
    }
  }
  r.expect("end");
  if (!r.at_end()) throw DataError("model file: trailing content after 'end'");
  return TrainedModel(std::move(columns), std::move(components), std::move(ledger));
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  csv::write_atomic(path, serialize_model(model));
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace amimort
