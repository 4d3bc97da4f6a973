// Copyright 2026 The tokenbudget Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings for the main operations. Errors map to ConfigError
// (ValueError), DataError (RuntimeError) and CompositionError.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "tokenbudget/allocator.h"
#include "tokenbudget/assets_io.h"
#include "tokenbudget/embedder.h"
#include "tokenbudget/error.h"
#include "tokenbudget/evaluation.h"
#include "tokenbudget/mechanism.h"
#include "tokenbudget/pipeline.h"
#include "tokenbudget/scorers.h"
#include "tokenbudget/text_model.h"

namespace py = pybind11;
namespace tb = tokenbudget;

namespace {

py::object ToPython(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

std::vector<tb::CorpusRecord> ToRecords(const py::iterable& records) {
  std::vector<tb::CorpusRecord> out;
  for (const py::handle& item : records) {
    const py::dict d = py::reinterpret_borrow<py::dict>(item);
    tb::CorpusRecord r;
    r.id = d["id"].cast<std::string>();
    r.text = d["text"].cast<std::string>();
    if (d.contains("label") && !d["label"].is_none()) {
      r.label = d["label"].cast<std::string>();
    }
    if (d.contains("group") && !d["group"].is_none()) {
      r.group = d["group"].cast<std::string>();
    }
    out.push_back(std::move(r));
  }
  return out;
}

py::list FromRecords(const std::vector<tb::CorpusRecord>& records) {
  py::list out;
  for (const auto& r : records) {
    py::dict d;
    d["id"] = r.id;
    d["text"] = r.text;
    if (r.label) d["label"] = *r.label;
    if (r.group) d["group"] = *r.group;
    out.append(d);
  }
  return out;
}

std::vector<tb::TextRecord> ToText(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<tb::TextRecord> out;
  for (const auto& [id, text] : pairs) out.push_back({id, text});
  return out;
}

}  // namespace

PYBIND11_MODULE(_tokenbudget, m) {
  m.doc() = "Per-token privacy budgets and word-level metric-DP rewriting";

  py::register_exception<tb::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<tb::DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<tb::CompositionError>(m, "CompositionError",
                                               PyExc_RuntimeError);

  py::enum_<tb::PosTag>(m, "PosTag")
      .value("NN", tb::PosTag::kNN)
      .value("PR", tb::PosTag::kPR)
      .value("VB", tb::PosTag::kVB)
      .value("CD", tb::PosTag::kCD)
      .value("JJ", tb::PosTag::kJJ)
      .value("RB", tb::PosTag::kRB)
      .value("OTHER", tb::PosTag::kOther);

  py::enum_<tb::ScoringMethod>(m, "ScoringMethod")
      .value("IC", tb::ScoringMethod::kIC)
      .value("POS", tb::ScoringMethod::kPOS)
      .value("NER", tb::ScoringMethod::kNER)
      .value("WI", tb::ScoringMethod::kWI)
      .value("SD", tb::ScoringMethod::kSD);

  py::class_<tb::Token>(m, "Token")
      .def_readonly("surface", &tb::Token::surface)
      .def_readonly("lemma", &tb::Token::lemma)
      .def_readonly("index", &tb::Token::index)
      .def_property_readonly(
          "span", [](const tb::Token& t) { return py::make_tuple(t.span.begin, t.span.end); })
      .def_readonly("pos", &tb::Token::pos)
      .def_readonly("is_stopword", &tb::Token::is_stopword)
      .def_readonly("is_punct", &tb::Token::is_punct)
      .def("__repr__",
           [](const tb::Token& t) { return "<Token '" + t.surface + "'>"; });

  py::class_<tb::Document>(m, "Document")
      .def_readonly("id", &tb::Document::id)
      .def_readonly("text", &tb::Document::text)
      .def_readonly("tokens", &tb::Document::tokens)
      .def_property_readonly("sentences",
                             [](const tb::Document& d) {
                               std::vector<std::pair<std::size_t, std::size_t>> out;
                               for (const auto& s : d.sentences) {
                                 out.emplace_back(s.first, s.last);
                               }
                               return out;
                             })
      .def("__len__", &tb::Document::size);

  m.def("tokenize", &tb::Tokenize, py::arg("text"),
        py::arg("stopwords") = tb::StopwordSet{}, py::arg("id") = "");
  m.def("detokenize", &tb::Detokenize, py::arg("doc"),
        py::arg("replacements"));
  m.def("tag_pos", &tb::TagPos, py::arg("doc"),
        py::arg("lexicon") = tb::PosLexicon{});

  py::class_<tb::Embedder>(m, "Embedder")
      .def(py::init<std::vector<std::string>, std::vector<std::vector<double>>>(),
           py::arg("words"), py::arg("vectors"))
      .def_static("load", &tb::LoadEmbeddings, py::arg("path"))
      .def_property_readonly("dimension", &tb::Embedder::dimension)
      .def("__len__", &tb::Embedder::size)
      .def("__contains__", &tb::Embedder::Contains);

  py::class_<tb::ScoreVector>(m, "ScoreVector")
      .def_readonly("method", &tb::ScoreVector::method)
      .def_readonly("raw", &tb::ScoreVector::raw)
      .def_readonly("normalized", &tb::ScoreVector::normalized)
      .def_readonly("degenerate", &tb::ScoreVector::degenerate);
  m.def("score_part_of_speech", &tb::ScorePartOfSpeech, py::arg("doc"));
  m.def("score_word_importance", &tb::ScoreWordImportance, py::arg("doc"),
        py::arg("embedder"));
  m.def(
      "score_sentence_difference",
      [](const tb::Document& doc, const tb::Embedder& e, bool verbatim) {
        return tb::ScoreSentenceDifference(
            doc, e, verbatim ? tb::SdSign::kVerbatim : tb::SdSign::kProse);
      },
      py::arg("doc"), py::arg("embedder"), py::arg("verbatim") = false);
  m.def("normalize_scores", &tb::NormalizeScores, py::arg("vector"));

  py::class_<tb::BudgetAllocation>(m, "BudgetAllocation")
      .def_readonly("document_id", &tb::BudgetAllocation::document_id)
      .def_readonly("total_epsilon", &tb::BudgetAllocation::total_epsilon)
      .def_readonly("per_token", &tb::BudgetAllocation::per_token)
      .def_readonly("excluded", &tb::BudgetAllocation::excluded)
      .def_readonly("no_recipients", &tb::BudgetAllocation::no_recipients)
      .def("sum", &tb::BudgetAllocation::Sum);
  m.def(
      "allocate_uniform",
      [](const tb::Document& doc, double eps) {
        return tb::AllocateUniform(doc, eps);
      },
      py::arg("doc"), py::arg("epsilon"));
  m.def(
      "allocate_weighted",
      [](const std::vector<double>& scores, const tb::Document& doc,
         double eps) {
        tb::SensitivityProfile p;
        p.scores = scores;
        return tb::AllocateWeighted(p, doc, eps);
      },
      py::arg("scores"), py::arg("doc"), py::arg("epsilon"));
  m.def("rollup_sentences", &tb::RollupSentences, py::arg("allocation"),
        py::arg("doc"));
  m.def("scale_budget", &tb::ScaleBudget, py::arg("per_word_epsilon"),
        py::arg("avg_tokens"));
  m.def("round_half_up", &tb::RoundHalfUp, py::arg("value"),
        py::arg("decimals"));

  m.def("two_sided_geometric_pmf", &tb::TwoSidedGeometricPmf, py::arg("z"),
        py::arg("epsilon"));
  m.def(
      "sample_two_sided_geometric",
      [](double eps, std::uint64_t seed, std::size_t n) {
        tb::Rng rng(seed);
        std::vector<std::int64_t> out(n);
        for (auto& z : out) z = tb::SampleTwoSidedGeometric(eps, rng);
        return out;
      },
      py::arg("epsilon"), py::arg("seed"), py::arg("n"));
  m.def("exact_output_pmf", &tb::ExactOutputPmf, py::arg("index"),
        py::arg("epsilon"), py::arg("list_length"));

  m.def("sentence_bleu", &tb::SentenceBleu, py::arg("reference"),
        py::arg("candidate"));
  m.def(
      "doc_cosine_similarity",
      [](const std::string& a, const std::string& b, const tb::Embedder& e) {
        return tb::DocCosineSimilarity(a, b, e).value;
      },
      py::arg("original"), py::arg("privatized"), py::arg("embedder"));
  m.def(
      "nearest_neighbor_attack",
      [](const std::vector<std::pair<std::string, std::string>>& originals,
         const std::vector<std::pair<std::string, std::string>>& privatized,
         const tb::Embedder& e) {
        const tb::NnAttackResult r =
            tb::NearestNeighborAttack(ToText(originals), ToText(privatized), e);
        return py::make_tuple(r.rank, r.average_k);
      },
      py::arg("originals"), py::arg("privatized"), py::arg("embedder"));
  m.def(
      "relative_gain",
      [](double ub, double ur, double pb, double pr, double mu, double mp) {
        return tb::RelativeGain({ub, ur, pb, pr, mu, mp});
      },
      py::arg("utility_baseline"), py::arg("utility_private"),
      py::arg("privacy_baseline"), py::arg("privacy_private"),
      py::arg("utility_majority"), py::arg("privacy_majority"));

  py::class_<tb::RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &tb::RunConfig::epsilon)
      .def_readwrite("scale_by_avg_tokens", &tb::RunConfig::scale_by_avg_tokens)
      .def_property(
          "distribution",
          [](const tb::RunConfig& c) {
            return std::string(tb::DistributionName(c.distribution));
          },
          [](tb::RunConfig& c, const std::string& s) {
            c.distribution = tb::ParseDistribution(s);
          })
      .def_property(
          "disabled_scorers",
          [](const tb::RunConfig& c) {
            std::vector<std::string> out;
            for (auto m : c.disabled_scorers) {
              out.emplace_back(tb::MethodName(m));
            }
            return out;
          },
          [](tb::RunConfig& c, const std::vector<std::string>& names) {
            c.disabled_scorers.clear();
            for (const auto& n : names) {
              c.disabled_scorers.insert(tb::ParseMethod(n));
            }
          })
      .def_property(
          "sd_sign",
          [](const tb::RunConfig& c) {
            return c.sd_sign == tb::SdSign::kProse ? "prose" : "verbatim";
          },
          [](tb::RunConfig& c, const std::string& s) {
            c.sd_sign = tb::ParseSdSign(s);
          })
      .def_readwrite("k_lists", &tb::RunConfig::k_lists)
      .def_readwrite("score_floor", &tb::RunConfig::score_floor)
      .def_readwrite("seed", &tb::RunConfig::seed)
      .def_readwrite("threads", &tb::RunConfig::threads)
      .def("validate", &tb::RunConfig::Validate);

  py::class_<tb::Assets>(m, "Assets")
      .def_static(
          "load",
          [](const std::string& embeddings, const std::string& ic_table,
             const std::string& gazetteer, const std::string& stopwords,
             const std::string& pos_lexicon) {
            return tb::Assets::Load(
                {embeddings, ic_table, gazetteer, stopwords, pos_lexicon});
          },
          py::arg("embeddings"), py::arg("ic_table") = "",
          py::arg("gazetteer") = "", py::arg("stopwords") = "",
          py::arg("pos_lexicon") = "")
      .def_property_readonly(
          "embedder", [](const tb::Assets& a) -> const tb::Embedder& {
            return a.embedder;
          }, py::return_value_policy::reference_internal)
      .def_readonly("warnings", &tb::Assets::warnings);

  m.def(
      "score_corpus",
      [](const py::iterable& records, const tb::Assets& assets,
         const tb::RunConfig& config) {
        py::list out;
        for (const auto& r :
             tb::ScoreCorpus(ToRecords(records), assets, config)) {
          out.append(ToPython(tb::ScoreRecordToJson(r)));
        }
        return out;
      },
      py::arg("records"), py::arg("assets"), py::arg("config"));
  m.def(
      "allocate_corpus",
      [](const py::iterable& records, const tb::Assets& assets,
         const tb::RunConfig& config) {
        return ToPython(tb::AllocateCorpus(ToRecords(records), assets, config));
      },
      py::arg("records"), py::arg("assets"), py::arg("config"));
  m.def(
      "rewrite_corpus",
      [](const py::iterable& records, const tb::Assets& assets,
         const tb::RunConfig& config) {
        const std::vector<tb::CorpusRecord> corpus = ToRecords(records);
        tb::RewriteResult r;
        {
          py::gil_scoped_release release;
          r = tb::RewriteCorpus(corpus, assets, config);
        }
        py::dict out;
        out["document_budget"] = r.document_budget;
        out["output"] = FromRecords(r.output);
        out["report"] = tb::FormatRunReport(r.report);
        return out;
      },
      py::arg("records"), py::arg("assets"), py::arg("config"));
  m.def(
      "evaluate",
      [](const py::iterable& originals, const py::iterable& privatized,
         const tb::Embedder& e) {
        return ToPython(tb::EvalReportToJson(
            tb::Evaluate(tb::ToTextRecords(ToRecords(originals)),
                         tb::ToTextRecords(ToRecords(privatized)), e)));
      },
      py::arg("originals"), py::arg("privatized"), py::arg("embedder"));
  m.def(
      "compare_corpus",
      [](const py::iterable& records, const tb::Assets& assets,
         const tb::RunConfig& config, bool ablation,
         const std::string& f1_sidecar) {
        tb::CompareOptions options;
        options.ablation = ablation;
        if (!f1_sidecar.empty()) options.f1 = tb::F1Sidecar::Load(f1_sidecar);
        return ToPython(
            tb::CompareCorpus(ToRecords(records), assets, config, options));
      },
      py::arg("records"), py::arg("assets"), py::arg("config"),
      py::arg("ablation") = false, py::arg("f1_sidecar") = "");
  m.def(
      "read_corpus",
      [](const std::string& path) { return FromRecords(tb::ReadCorpus(path)); },
      py::arg("path"));
}
