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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "amimort/cohort.h"
#include "amimort/cohort_summary.h"
#include "amimort/error.h"
#include "amimort/importance.h"
#include "amimort/metrics.h"
#include "amimort/model_io.h"
#include "amimort/nested_cv.h"
#include "amimort/report.h"
#include "amimort/stats.h"

namespace py = pybind11;
using namespace amimort;

namespace {

Assignment to_assignment(const py::dict& params) {
  Assignment a;
  for (const auto& [k, v] : params) {
    std::string text;
    if (py::isinstance<py::bool_>(v)) {
      text = v.cast<bool>() ? "true" : "false";
    } else if (v.is_none()) {
      text = "none";
    } else {
      text = py::str(v).cast<std::string>();
    }
    a.emplace_back(py::str(k).cast<std::string>(), text);
  }
  return a;
}

py::dict test_dict(const TestResult& r) {
  py::dict d;
  d["statistic"] = r.statistic;
  d["df1"] = r.df1;
  d["df2"] = r.df2;
  d["p_value"] = r.p_value;
  d["stars"] = r.stars();
  return d;
}

py::dict metric_dict(const MetricSet& m) {
  py::dict d;
  d["auc"] = m.auc;
  d["accuracy"] = m.accuracy;
  d["sensitivity"] = m.sensitivity;
  d["specificity"] = m.specificity;
  d["precision"] = m.precision;
  d["tp"] = m.tp;
  d["fp"] = m.fp;
  d["tn"] = m.tn;
  d["fn"] = m.fn;
  return d;
}

TrainedModel fit(Algorithm algorithm, const DesignMatrix& x, const py::dict& params, std::uint64_t seed) {
  Rng rng(seed);
  return fit_model(ModelSpec{algorithm, to_assignment(params)}, x, rng);
}

}  // namespace

PYBIND11_MODULE(_amimort, m) {
  m.doc() = "Tree ensembles, logistic baseline and nested cross-validation for cohort mortality prediction.";

  // Translators run newest first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TrainingError>(m, "TrainingError", PyExc_RuntimeError);

  py::class_<CohortTable>(m, "Cohort")
      .def_property_readonly("n_rows", &CohortTable::n_rows)
      .def_property_readonly("n_died", &CohortTable::n_died)
      .def_property_readonly("n_survived", &CohortTable::n_survived)
      .def_property_readonly("features", [](const CohortTable& c) { return c.schema().names(); })
      .def_property_readonly("outcomes", &CohortTable::outcomes)
      .def("row", [](const CohortTable& c, std::size_t r) {
        if (r >= c.n_rows()) throw py::index_error("row out of range");
        auto v = c.row(r);
        return std::vector<double>(v.begin(), v.end());
      });

  m.def(
      "load_cohort",
      [](const std::string& path, const std::optional<std::string>& mapping) {
        return load_cohort(path, mapping ? SchemaMapping::read(*mapping) : SchemaMapping::reference_default());
      },
      py::arg("path"), py::arg("mapping") = py::none(), "Load a cohort CSV using a mapping file (default: built-in).");
  m.def(
      "parse_cohort",
      [](const std::string& text, const std::optional<std::string>& mapping_text) {
        const SchemaMapping mapping = mapping_text ? SchemaMapping::from_config(KeyValueFile::parse(*mapping_text))
                                                   : SchemaMapping::reference_default();
        return parse_cohort(text, mapping);
      },
      py::arg("text"), py::arg("mapping_text") = py::none());
  m.def("reference_mapping", [] { return std::string(SchemaMapping::reference_default_text()); });

  m.def(
      "cohort_summary_markdown",
      [](const CohortTable& c, bool pooled, bool yates) {
        return render_summary_markdown(cohort_summary(c, {pooled, yates, 0.05}));
      },
      py::arg("cohort"), py::arg("pooled") = true, py::arg("yates") = true);
  m.def(
      "cohort_summary_csv",
      [](const CohortTable& c, bool pooled, bool yates) {
        return render_summary_csv(cohort_summary(c, {pooled, yates, 0.05}));
      },
      py::arg("cohort"), py::arg("pooled") = true, py::arg("yates") = true);

  py::class_<DesignMatrix>(m, "DesignMatrix")
      .def(py::init(&DesignMatrix::from_rows), py::arg("columns"), py::arg("rows"), py::arg("labels"))
      .def_readonly("columns", &DesignMatrix::columns)
      .def_readonly("n_rows", &DesignMatrix::n_rows)
      .def_readonly("labels", &DesignMatrix::labels);
  m.def(
      "encode",
      [](const CohortTable& c, const std::vector<std::string>& exclude) {
        AblationMask mask(exclude.begin(), exclude.end());
        const auto rows = all_rows(c);
        return encode(c, rows, fit_standardizer(c, rows), mask);
      },
      py::arg("cohort"), py::arg("exclude") = std::vector<std::string>{},
      "Standardize on the whole cohort and encode it.");

  py::class_<TrainedModel>(m, "Model")
      .def_property_readonly("algorithm", [](const TrainedModel& t) { return std::string(to_string(t.algorithm())); })
      .def_property_readonly("columns", &TrainedModel::columns)
      .def_property_readonly("ledger", [](const TrainedModel& t) { return t.ledger().decrease; })
      .def_property_readonly("warnings", &TrainedModel::warnings)
      .def("predict_proba", &TrainedModel::predict_proba)
      .def("predict", &TrainedModel::predict, py::arg("x"), py::arg("threshold") = 0.5)
      .def("importance",
           [](const TrainedModel& t) {
             const auto rep = model_importance(t);
             py::dict d;
             for (std::size_t i = 0; i < rep.features.size(); ++i) d[py::str(rep.features[i])] = rep.importance[i];
             return d;
           })
      .def("serialize", &serialize_model);
  m.def("parse_model", &parse_model);

  m.def("fit_random_forest", [](const DesignMatrix& x, const py::dict& p, std::uint64_t seed) {
    return fit(Algorithm::kRandomForest, x, p, seed);
  }, py::arg("x"), py::arg("params") = py::dict(), py::arg("seed") = 0);
  m.def("fit_adaboost", [](const DesignMatrix& x, const py::dict& p, std::uint64_t seed) {
    return fit(Algorithm::kAdaBoost, x, p, seed);
  }, py::arg("x"), py::arg("params") = py::dict(), py::arg("seed") = 0);
  m.def("fit_gradboost", [](const DesignMatrix& x, const py::dict& p, std::uint64_t seed) {
    return fit(Algorithm::kGradBoost, x, p, seed);
  }, py::arg("x"), py::arg("params") = py::dict(), py::arg("seed") = 0);
  m.def("fit_logistic", [](const DesignMatrix& x, const py::dict& p) {
    return fit(Algorithm::kLogistic, x, p, 0);
  }, py::arg("x"), py::arg("params") = py::dict());

  m.def("auc", [](const std::vector<double>& s, const std::vector<int>& y) { return auc(s, y); });
  m.def("roc_curve", [](const std::vector<double>& s, const std::vector<int>& y) {
    const RocCurve c = roc_curve(s, y);
    return py::make_tuple(c.fpr, c.tpr, c.thresholds);
  });
  m.def(
      "confusion_metrics",
      [](const std::vector<double>& s, const std::vector<int>& y, double threshold) {
        return metric_dict(evaluate(s, y, threshold));
      },
      py::arg("scores"), py::arg("labels"), py::arg("threshold") = 0.5);

  m.def(
      "paired_t_test",
      [](const std::vector<double>& a, const std::vector<double>& b) { return test_dict(paired_t_test(a, b)); });
  m.def(
      "two_sample_t_test",
      [](const std::vector<double>& x, const std::vector<double>& y, bool pooled) {
        return test_dict(two_sample_t_test(x, y, pooled));
      },
      py::arg("x"), py::arg("y"), py::arg("pooled") = true);
  m.def(
      "chi_square_2x2",
      [](const std::array<std::array<long, 2>, 2>& counts, bool yates) { return test_dict(chi_square_2x2(counts, yates)); },
      py::arg("counts"), py::arg("yates") = true);
  m.def("rm_anova", [](const std::vector<std::vector<double>>& rows) {
    return test_dict(rm_anova(Matrix2D::from_rows(rows)).test);
  });
  m.def(
      "tukey_hsd",
      [](const std::vector<std::vector<double>>& rows, double alpha) {
        py::list out;
        for (const auto& c : tukey_hsd(Matrix2D::from_rows(rows), alpha)) {
          py::dict d = test_dict(c.test);
          d["pair"] = py::make_tuple(c.first, c.second);
          d["mean_difference"] = c.mean_difference;
          d["q_critical"] = c.q_critical;
          d["significant"] = c.significant;
          out.append(d);
        }
        return out;
      },
      py::arg("rows"), py::arg("alpha") = 0.05);

  m.def(
      "run_nested_cv",
      [](const CohortTable& cohort, const std::vector<std::string>& models, std::uint64_t seed, int repeats,
         bool fixed_params, int jobs, const std::vector<std::string>& exclude) {
        NestedCvConfig config;
        config.algorithms.clear();
        for (const auto& name : models) config.algorithms.push_back(parse_algorithm(name));
        for (Algorithm a : config.algorithms) {
          if (fixed_params) config.spaces.emplace(a, fixed_space(a));
        }
        config.seed = seed;
        config.n_repeats = repeats;
        config.jobs = jobs;
        config.experiments = {{"I", AblationMask(exclude.begin(), exclude.end())}};
        CvResultMatrix matrix;
        {
          py::gil_scoped_release release;
          matrix = run_nested_cv(cohort, config);
        }
        return matrix.to_csv();
      },
      py::arg("cohort"), py::arg("models") = std::vector<std::string>{"rf", "adaboost", "gradboost", "lr"},
      py::arg("seed") = 20210121, py::arg("repeats") = 10, py::arg("fixed_params") = true, py::arg("jobs") = 1,
      py::arg("exclude") = std::vector<std::string>{},
      "Run nested cross-validation and return the long-format result matrix as CSV text.");
}
