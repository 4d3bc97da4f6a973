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

// Corpus-level commands: score, allocate, rewrite, evaluate and compare.
// Every command is a deterministic function of (config, assets, corpus);
// documents are processed in parallel and emitted sorted by id.

#ifndef TOKENBUDGET_PIPELINE_H_
#define TOKENBUDGET_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tokenbudget/allocator.h"
#include "tokenbudget/assets_io.h"
#include "tokenbudget/embedder.h"
#include "tokenbudget/evaluation.h"
#include "tokenbudget/mechanism.h"
#include "tokenbudget/scorers.h"
#include "tokenbudget/text_model.h"

namespace tokenbudget {

enum class Distribution { kNaive, kToolkit };

std::string_view DistributionName(Distribution d);
Distribution ParseDistribution(std::string_view name);
SdSign ParseSdSign(std::string_view name);

struct RunConfig {
  double epsilon = 0.1;  // per-document budget, or per-word when scaling
  bool scale_by_avg_tokens = false;
  Distribution distribution = Distribution::kToolkit;
  MethodSet disabled_scorers;
  SdSign sd_sign = SdSign::kProse;
  std::size_t k_lists = kDefaultListCount;
  double score_floor = kDefaultScoreFloor;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  // Throws ConfigError on a non-positive epsilon, all scorers disabled,
  // k_lists == 0, threads == 0 or a floor outside (0, 1].
  void Validate() const;
  ScoringOptions scoring() const;
};

struct AssetPaths {
  std::filesystem::path embeddings;
  std::filesystem::path ic_table;
  std::filesystem::path gazetteer;
  std::filesystem::path stopwords;
  std::filesystem::path pos_lexicon;
};

// Loaded, immutable assets. Only embeddings are mandatory; a missing IC table
// or gazetteer is an error only when the matching scorer is enabled.
struct Assets {
  Embedder embedder;
  std::optional<IcTable> ic_table;
  std::optional<Gazetteer> gazetteer;
  StopwordSet stopwords;
  PosLexicon pos_lexicon;
  Warnings warnings;

  static Assets Load(const AssetPaths& paths);
  ScorerAssets scorer_assets() const;
};

// Tokenized and POS-tagged document.
Document PrepareDocument(const CorpusRecord& record, const Assets& assets);

// Default recipients that also have a vocabulary entry. Out-of-vocabulary
// words cannot be perturbed, so they get no budget.
std::vector<std::size_t> PerturbableRecipients(const Document& doc,
                                               const Embedder& embedder);

// Mean count of non-stopword, non-punctuation tokens per document.
double AverageBudgetedTokens(const std::vector<Document>& docs);

// The per-document budget the config implies for this corpus.
double DocumentBudget(const RunConfig& config,
                      const std::vector<Document>& docs);

struct ScoreRecord {
  Document doc;
  ScoredDocument scored;
  std::vector<std::size_t> recipients;
};

std::vector<ScoreRecord> ScoreCorpus(const std::vector<CorpusRecord>& corpus,
                                     const Assets& assets,
                                     const RunConfig& config);

struct RewriteResult {
  double document_budget = 0.0;
  std::vector<Document> documents;
  std::vector<BudgetAllocation> allocations;
  std::vector<PrivatizedDocument> privatized;
  std::vector<CorpusRecord> output;  // sorted by id
  RunReport report;
};

// Allocates per the config's distribution and rewrites every document.
// Throws CompositionError if any ledger fails VerifyComposition.
RewriteResult RewriteCorpus(const std::vector<CorpusRecord>& corpus,
                            const Assets& assets, const RunConfig& config);

// Allocation only (no rewriting), one JSON object per document.
nlohmann::ordered_json AllocateCorpus(const std::vector<CorpusRecord>& corpus,
                                      const Assets& assets,
                                      const RunConfig& config);

nlohmann::ordered_json ScoreRecordToJson(const ScoreRecord& record);

// Rebuilds per-token flags and ledgers from a rewrite report.
std::vector<PrivatizedDocument> PrivatizedFromReport(const RunReport& report);

std::vector<TextRecord> ToTextRecords(const std::vector<CorpusRecord>& corpus);

nlohmann::ordered_json EvalReportToJson(const EvalReport& report);

// Externally measured F1 scores (percent) for relative gain.
struct F1Sidecar {
  double utility_baseline = 0.0;
  double privacy_baseline = 0.0;
  double utility_majority = 0.0;
  double privacy_majority = 0.0;
  struct Pair {
    double utility = 0.0;
    double privacy = 0.0;
  };
  std::optional<Pair> naive;
  std::optional<Pair> toolkit;
  std::map<std::string, Pair> ablation;  // disabled scorer name -> scores

  static F1Sidecar Load(const std::filesystem::path& path);
  static F1Sidecar FromJson(const nlohmann::json& j);
  RelativeGainInputs Inputs(const Pair& p) const;
};

struct CompareOptions {
  bool ablation = false;
  std::optional<F1Sidecar> f1;
};

// Naive vs toolkit rewriting at the same budget and seed, with metrics for
// both and optionally one toolkit column per disabled scorer.
nlohmann::ordered_json CompareCorpus(const std::vector<CorpusRecord>& corpus,
                                     const Assets& assets,
                                     const RunConfig& config,
                                     const CompareOptions& options);

}  // namespace tokenbudget

#endif  // TOKENBUDGET_PIPELINE_H_
