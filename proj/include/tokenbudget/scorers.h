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

// Token sensitivity scorers. Each scorer maps a document to one raw value per
// token; NormalizeScores min-max scales them and Aggregate averages the
// enabled methods into the profile the allocator consumes.

#ifndef TOKENBUDGET_SCORERS_H_
#define TOKENBUDGET_SCORERS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tokenbudget/embedder.h"
#include "tokenbudget/text_model.h"

namespace tokenbudget {

enum class ScoringMethod { kIC, kPOS, kNER, kWI, kSD };

inline constexpr std::array<ScoringMethod, 5> kAllMethods = {
    ScoringMethod::kIC, ScoringMethod::kPOS, ScoringMethod::kNER,
    ScoringMethod::kWI, ScoringMethod::kSD};

std::string_view MethodName(ScoringMethod method);
// Case-insensitive; throws ConfigError for unknown names.
ScoringMethod ParseMethod(std::string_view name);

using MethodSet = std::set<ScoringMethod>;
MethodSet AllMethodsExcept(const MethodSet& disabled);

struct ScoreVector {
  ScoringMethod method = ScoringMethod::kIC;
  std::vector<double> raw;
  std::vector<double> normalized;  // empty until NormalizeScores
  // Set by the embedding scorers when fewer than two tokens embed.
  bool degenerate = false;
};

struct SensitivityProfile {
  std::vector<double> scores;
  MethodSet enabled;
};

inline constexpr double kDefaultScoreFloor = 1e-3;

// Sign convention of the sentence-difference scorer. kProse scores the
// similarity drop (1 - cos); kVerbatim returns the similarity itself.
enum class SdSign { kProse, kVerbatim };

// Per-corpus information content of (lemma, pos) pairs.
class IcTable {
 public:
  static constexpr std::array<std::string_view, 5> kCorpora = {
      "semcor", "brown", "bnc", "shaks", "treebank"};

  // Throws ConfigError if `ic` < 1 or `pos` is not 'n' or 'v'.
  void Add(std::string lemma, char pos, std::string corpus, double ic);

  // Max IC over every row of `lemma` in `corpus`.
  std::optional<double> MaxIc(std::string_view lemma,
                              std::string_view corpus) const;
  std::size_t size() const { return rows_; }
  bool empty() const { return rows_ == 0; }

 private:
  struct Entry {
    char pos;
    std::string corpus;
    double ic;
  };
  std::unordered_map<std::string, std::vector<Entry>> entries_;
  std::size_t rows_ = 0;
};

// Case-sensitive multi-token entity phrases.
class Gazetteer {
 public:
  Gazetteer() = default;
  explicit Gazetteer(const std::vector<std::string>& phrases);
  void Add(std::string_view phrase);

  // Token count of the longest phrase matching at `start`, or 0.
  std::size_t LongestMatch(const Document& doc, std::size_t start) const;
  std::size_t size() const { return count_; }

 private:
  // First token -> phrases (as token surfaces), longest first.
  std::unordered_map<std::string, std::vector<std::vector<std::string>>>
      by_head_;
  std::size_t count_ = 0;
};

// Lowercased word -> tag.
using PosLexicon = std::unordered_map<std::string, PosTag>;

// Fills Token::pos: lexicon lookup, numeric literal -> CD, suffix rules
// (-ly RB, -ing/-ed VB, -ous/-ful/-ive JJ), capitalized mid-sentence -> NN,
// otherwise OTHER. Punctuation is OTHER.
Document TagPos(Document doc, const PosLexicon& lexicon);

// The scorers below throw DataError when a POS tag they need is missing.
ScoreVector ScoreInformationContent(const Document& doc, const IcTable& table);
ScoreVector ScorePartOfSpeech(const Document& doc);
ScoreVector ScoreNamedEntities(const Document& doc, const Gazetteer& gazetteer);
ScoreVector ScoreWordImportance(const Document& doc, const Embedder& embedder);
ScoreVector ScoreSentenceDifference(const Document& doc,
                                    const Embedder& embedder,
                                    SdSign sign = SdSign::kProse);

double PosWeight(PosTag tag);

// Min-max over the document; a constant vector maps to 0.5 everywhere.
ScoreVector NormalizeScores(ScoreVector v);

// Mean of the enabled methods' normalized scores, clamped below at `floor`.
// Throws ConfigError if `enabled` is empty, a method is missing or lengths
// differ.
SensitivityProfile Aggregate(const std::vector<ScoreVector>& vectors,
                             const MethodSet& enabled,
                             double floor = kDefaultScoreFloor);

struct ScorerAssets {
  const IcTable* ic_table = nullptr;
  const Gazetteer* gazetteer = nullptr;
  const Embedder* embedder = nullptr;
};

struct ScoringOptions {
  MethodSet enabled{kAllMethods.begin(), kAllMethods.end()};
  SdSign sd_sign = SdSign::kProse;
  double score_floor = kDefaultScoreFloor;
};

struct ScoredDocument {
  std::vector<ScoreVector> vectors;  // one per enabled method, normalized
  SensitivityProfile profile;
};

// Runs every enabled scorer on a tagged document. Throws ConfigError if an
// enabled scorer's asset is missing.
ScoredDocument ScoreDocument(const Document& tagged, const ScorerAssets& assets,
                             const ScoringOptions& options);

}  // namespace tokenbudget

#endif  // TOKENBUDGET_SCORERS_H_
