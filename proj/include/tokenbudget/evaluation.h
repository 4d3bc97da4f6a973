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

// Privacy and utility metrics for rewritten corpora.

#ifndef TOKENBUDGET_EVALUATION_H_
#define TOKENBUDGET_EVALUATION_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tokenbudget/embedder.h"
#include "tokenbudget/mechanism.h"

namespace tokenbudget {

// A document id with its text; corpora are aligned by id.
struct TextRecord {
  std::string id;
  std::string text;
};

struct SimilarityResult {
  double value = 0.0;
  bool degenerate = false;  // one side had no embeddable token
};

// Cosine of the mean-pooled word vectors of the two texts.
SimilarityResult DocCosineSimilarity(std::string_view original,
                                     std::string_view privatized,
                                     const Embedder& embedder);

// Sentence BLEU-4 of one candidate against one reference, uniform weights
// and a brevity penalty. An n-gram order with no matches scores
// (0 + 1) / (candidate n-grams + 1).
double SentenceBleu(const std::vector<std::string>& reference,
                    const std::vector<std::string>& candidate);

// Mean SentenceBleu over aligned pairs, tokenized with Tokenize. Throws
// DataError on a length mismatch.
double AvgSentenceBleu(const std::vector<std::string>& originals,
                       const std::vector<std::string>& privatized);

struct NnAttackResult {
  std::map<std::string, std::size_t> rank;  // 1-based, by document id
  double average_k = 0.0;
};

// For each original, ranks every privatized document by cosine similarity
// (descending, ties by ascending id) and records the rank of its own
// rewrite. Throws DataError unless the two corpora hold the same ids.
NnAttackResult NearestNeighborAttack(const std::vector<TextRecord>& originals,
                                     const std::vector<TextRecord>& privatized,
                                     const Embedder& embedder);

struct RelativeGainInputs {
  double utility_baseline = 0.0;    // U_o
  double utility_private = 0.0;     // U_r
  double privacy_baseline = 0.0;    // P_o
  double privacy_private = 0.0;     // P_r
  double utility_majority = 0.0;    // MG_u
  double privacy_majority = 0.0;    // MG_p
};

// (U_r - MG_u) / (U_o - MG_u) - (P_r - MG_p) / (P_o - MG_p). Throws
// ConfigError if a denominator is zero.
double RelativeGain(const RelativeGainInputs& x);

struct PerturbationStats {
  std::size_t budgeted_tokens = 0;
  std::size_t perturbed_tokens = 0;
  double perturbed_fraction = 0.0;
  // Decade bin (floor(log10 eps_i)) -> count of applied spends.
  std::map<int, std::size_t> epsilon_histogram;
  std::map<std::string, std::size_t> flag_counts;
};

PerturbationStats ComputePerturbationStats(
    const std::vector<PrivatizedDocument>& docs);

struct EvalReport {
  double avg_cosine_similarity = 0.0;
  std::size_t degenerate_similarities = 0;
  double avg_bleu = 0.0;
  NnAttackResult nn;
  PerturbationStats perturbation;
};

// CS, BLEU and the NN attack over id-aligned corpora. Throws DataError on an
// empty corpus or misaligned ids.
EvalReport Evaluate(const std::vector<TextRecord>& originals,
                    const std::vector<TextRecord>& privatized,
                    const Embedder& embedder);

}  // namespace tokenbudget

#endif  // TOKENBUDGET_EVALUATION_H_
