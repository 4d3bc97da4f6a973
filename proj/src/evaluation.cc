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

#include "tokenbudget/evaluation.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "tokenbudget/error.h"

namespace tokenbudget {

namespace {

constexpr int kMaxOrder = 4;

std::vector<std::string> Surfaces(std::string_view text) {
  std::vector<std::string> out;
  for (Token& t : Tokenize(text, {}).tokens) out.push_back(std::move(t.surface));
  return out;
}

std::vector<double> PooledOrZero(std::string_view text,
                                 const Embedder& embedder) {
  auto pooled = embedder.Pool(Tokenize(text, {}));
  return pooled ? *pooled : std::vector<double>(embedder.dimension(), 0.0);
}

std::map<std::vector<std::string>, int> CountNgrams(
    const std::vector<std::string>& words, int n) {
  std::map<std::vector<std::string>, int> counts;
  if (words.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= words.size(); ++i) {
    ++counts[std::vector<std::string>(words.begin() + i,
                                      words.begin() + i + n)];
  }
  return counts;
}

// Pairs of (original, privatized) in ascending id order.
std::vector<std::pair<const TextRecord*, const TextRecord*>> AlignById(
    const std::vector<TextRecord>& originals,
    const std::vector<TextRecord>& privatized) {
  if (originals.size() != privatized.size()) {
    throw DataError("corpora differ in size: " +
                    std::to_string(originals.size()) + " vs " +
                    std::to_string(privatized.size()));
  }
  std::map<std::string_view, const TextRecord*> by_id;
  for (const auto& r : privatized) {
    if (!by_id.emplace(r.id, &r).second) {
      throw DataError("duplicate id '" + r.id + "' in privatized corpus");
    }
  }
  std::vector<std::pair<const TextRecord*, const TextRecord*>> pairs;
  std::set<std::string_view> seen;
  for (const auto& r : originals) {
    auto it = by_id.find(r.id);
    if (it == by_id.end()) {
      throw DataError("id '" + r.id + "' has no privatized counterpart");
    }
    if (!seen.insert(r.id).second) {
      throw DataError("duplicate id '" + r.id + "' in original corpus");
    }
    pairs.emplace_back(&r, it->second);
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    return a.first->id < b.first->id;
  });
  return pairs;
}

}  // namespace

SimilarityResult DocCosineSimilarity(std::string_view original,
                                     std::string_view privatized,
                                     const Embedder& embedder) {
  auto a = embedder.Pool(Tokenize(original, {}));
  auto b = embedder.Pool(Tokenize(privatized, {}));
  if (!a || !b) return {0.0, true};
  return {Cosine(*a, *b), false};
}

double SentenceBleu(const std::vector<std::string>& reference,
                    const std::vector<std::string>& candidate) {
  if (candidate.empty()) return reference.empty() ? 1.0 : 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= kMaxOrder; ++n) {
    const auto cand = CountNgrams(candidate, n);
    const auto ref = CountNgrams(reference, n);
    int total = 0, matches = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      if (auto it = ref.find(gram); it != ref.end()) {
        matches += std::min(count, it->second);
      }
    }
    const double precision =
        matches > 0 ? static_cast<double>(matches) / total
                    : 1.0 / static_cast<double>(total + 1);
    log_sum += std::log(precision) / kMaxOrder;
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double brevity = c > r ? 1.0 : std::exp(1.0 - r / c);
  return brevity * std::exp(log_sum);
}

double AvgSentenceBleu(const std::vector<std::string>& originals,
                       const std::vector<std::string>& privatized) {
  if (originals.size() != privatized.size()) {
    throw DataError("BLEU corpora differ in size: " +
                    std::to_string(originals.size()) + " vs " +
                    std::to_string(privatized.size()));
  }
  if (originals.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < originals.size(); ++i) {
    sum += SentenceBleu(Surfaces(originals[i]), Surfaces(privatized[i]));
  }
  return sum / static_cast<double>(originals.size());
}

NnAttackResult NearestNeighborAttack(const std::vector<TextRecord>& originals,
                                     const std::vector<TextRecord>& privatized,
                                     const Embedder& embedder) {
  const auto pairs = AlignById(originals, privatized);
  const std::size_t n = pairs.size();
  std::vector<std::vector<double>> queries, candidates;
  for (const auto& [orig, priv] : pairs) {
    queries.push_back(PooledOrZero(orig->text, embedder));
    candidates.push_back(PooledOrZero(priv->text, embedder));
  }
  NnAttackResult result;
  if (n == 0) return result;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double own = Cosine(queries[i], candidates[i]);
    std::size_t k = 1;
    // Pairs are in id order, so "lower id" is "lower position".
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double sim = Cosine(queries[i], candidates[j]);
      if (sim > own || (sim == own && j < i)) ++k;
    }
    result.rank[pairs[i].first->id] = k;
    total += static_cast<double>(k);
  }
  result.average_k = total / static_cast<double>(n);
  return result;
}

double RelativeGain(const RelativeGainInputs& x) {
  const double utility_span = x.utility_baseline - x.utility_majority;
  const double privacy_span = x.privacy_baseline - x.privacy_majority;
  if (utility_span == 0.0 || privacy_span == 0.0) {
    throw ConfigError(
        "relative gain undefined: baseline equals majority-guess score");
  }
  return (x.utility_private - x.utility_majority) / utility_span -
         (x.privacy_private - x.privacy_majority) / privacy_span;
}

PerturbationStats ComputePerturbationStats(
    const std::vector<PrivatizedDocument>& docs) {
  PerturbationStats stats;
  for (const PrivatizedDocument& d : docs) {
    for (TokenFlag f : d.flags) {
      ++stats.flag_counts[std::string(FlagName(f))];
      if (f == TokenFlag::kPerturbed || f == TokenFlag::kUnchangedByNoise) {
        ++stats.budgeted_tokens;
      }
      if (f == TokenFlag::kPerturbed) ++stats.perturbed_tokens;
    }
    for (const LedgerSpend& s : d.ledger.spends) {
      if (s.applied && s.epsilon > 0.0) {
        ++stats.epsilon_histogram[static_cast<int>(
            std::floor(std::log10(s.epsilon)))];
      }
    }
  }
  if (stats.budgeted_tokens > 0) {
    stats.perturbed_fraction = static_cast<double>(stats.perturbed_tokens) /
                               static_cast<double>(stats.budgeted_tokens);
  }
  return stats;
}

EvalReport Evaluate(const std::vector<TextRecord>& originals,
                    const std::vector<TextRecord>& privatized,
                    const Embedder& embedder) {
  if (originals.empty()) throw DataError("cannot evaluate an empty corpus");
  const auto pairs = AlignById(originals, privatized);
  EvalReport report;
  double cs = 0.0, bleu = 0.0;
  for (const auto& [orig, priv] : pairs) {
    const SimilarityResult sim =
        DocCosineSimilarity(orig->text, priv->text, embedder);
    cs += sim.value;
    report.degenerate_similarities += sim.degenerate ? 1 : 0;
    bleu += SentenceBleu(Surfaces(orig->text), Surfaces(priv->text));
  }
  const auto n = static_cast<double>(pairs.size());
  report.avg_cosine_similarity = cs / n;
  report.avg_bleu = bleu / n;
  report.nn = NearestNeighborAttack(originals, privatized, embedder);
  return report;
}

}  // namespace tokenbudget
