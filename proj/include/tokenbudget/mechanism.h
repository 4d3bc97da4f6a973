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

// Word-level metric-DP rewriting over one-dimensional vocabulary lists.
//
// The vocabulary is sorted along k random projections of its embeddings. A
// token is perturbed by picking one list uniformly, adding two-sided
// geometric noise with parameter eps_i to its position, and clamping to the
// list bounds. Within a list the mechanism is eps_i * |i - j| private in the
// list-position metric; clamping is post-processing.

#ifndef TOKENBUDGET_MECHANISM_H_
#define TOKENBUDGET_MECHANISM_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tokenbudget/allocator.h"
#include "tokenbudget/embedder.h"
#include "tokenbudget/rng.h"
#include "tokenbudget/text_model.h"

namespace tokenbudget {

inline constexpr std::size_t kDefaultListCount = 8;

class ProjectionLists {
 public:
  // Throws ConfigError if the vocabulary has fewer than two words or k == 0.
  static ProjectionLists Build(const Embedder& embedder, std::size_t k,
                               std::uint64_t seed);
  // Lists along explicit projection directions (each of the embedding
  // dimension, not necessarily unit length).
  static ProjectionLists FromDirections(
      const Embedder& embedder,
      const std::vector<std::vector<double>>& directions,
      std::uint64_t seed = 0);

  std::size_t list_count() const { return lists_.size(); }
  std::size_t vocabulary_size() const { return words_.size(); }
  std::uint64_t seed() const { return seed_; }
  const std::string& word(std::size_t row) const { return words_[row]; }

  // Vocabulary rows in list order.
  std::span<const std::size_t> list(std::size_t j) const { return lists_[j]; }
  std::size_t position(std::size_t j, std::size_t row) const {
    return positions_[j][row];
  }
  // Vocabulary row of a word (case-folded match), if any.
  std::optional<std::size_t> Find(std::string_view word) const;

 private:
  std::uint64_t seed_ = 0;
  std::vector<std::string> words_;
  std::vector<std::vector<std::size_t>> lists_;
  std::vector<std::vector<std::size_t>> positions_;
  std::unordered_map<std::string, std::size_t> exact_;
  std::unordered_map<std::string, std::size_t> folded_;
};

// P(Z = z) = (1 - e^-eps) / (1 + e^-eps) * e^(-eps |z|).
double TwoSidedGeometricPmf(std::int64_t z, double eps);

// Inverse-transform sample from the pmf above. Throws ConfigError if eps <= 0.
std::int64_t SampleTwoSidedGeometric(double eps, Rng& rng);

// clamp(index + Z, 0, list_length - 1).
std::size_t PerturbIndex(std::size_t index, std::size_t list_length,
                         double eps, Rng& rng);

// Exact output distribution of PerturbIndex. Throws ConfigError on a bad
// index or eps <= 0.
std::vector<double> ExactOutputPmf(std::size_t index, double eps,
                                   std::size_t list_length);

enum class TokenFlag {
  kStopwordPassthrough,
  kPunctPassthrough,
  kOovPassthrough,
  kExcludedPassthrough,
  kPerturbed,
  kUnchangedByNoise,
};

std::string_view FlagName(TokenFlag flag);
TokenFlag ParseFlag(std::string_view name);

struct PerturbOutcome {
  std::string surface;
  TokenFlag flag = TokenFlag::kUnchangedByNoise;
};

// Out-of-vocabulary tokens come back unchanged with kOovPassthrough.
PerturbOutcome PerturbToken(const Token& token, const ProjectionLists& lists,
                            double eps, Rng& rng);

struct PrivatizedDocument {
  std::string document_id;
  std::string text;
  std::map<std::size_t, std::string> replacements;
  std::vector<TokenFlag> flags;  // one per token
  CompositionLedger ledger;
};

// Perturbs every budgeted token with its own budget. Randomness for token i
// comes from DeriveSeed(seed, doc.id, i), so the output does not depend on
// the order documents are processed in. Throws DataError if the allocation
// was made for a different document.
PrivatizedDocument RewriteDocument(const Document& doc,
                                   const BudgetAllocation& alloc,
                                   const ProjectionLists& lists,
                                   std::uint64_t seed);

}  // namespace tokenbudget

#endif  // TOKENBUDGET_MECHANISM_H_
