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

// Fixtures and hand-rolled generators shared by the tests.

#ifndef TOKENBUDGET_TESTS_TEST_SUPPORT_H_
#define TOKENBUDGET_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tokenbudget/embedder.h"
#include "tokenbudget/pipeline.h"
#include "tokenbudget/rng.h"
#include "tokenbudget/scorers.h"
#include "tokenbudget/text_model.h"

namespace tokenbudget::testing {

inline std::filesystem::path DataDir() { return TOKENBUDGET_DATA_DIR; }

inline AssetPaths ToyAssetPaths() {
  const auto d = DataDir();
  return {d / "embeddings.txt", d / "ic_table.tsv", d / "gazetteer.txt",
          d / "stopwords.txt", d / "pos_lexicon.tsv"};
}

inline std::filesystem::path ToyCorpusPath() {
  return DataDir() / "toy_corpus.jsonl";
}

inline StopwordSet SmallStopwords() {
  return {"the", "a", "and", "of", "in", "was", "is", "to"};
}

// Words a generator may draw from. Every word has a vector in SmallEmbedder()
// except the last two, which are out of vocabulary.
inline const std::vector<std::string>& GeneratorWords() {
  static const std::vector<std::string> words = {
      "the",    "a",     "and",   "of",    "in",    "was",   "pizza",
      "pasta",  "cake",  "Alice", "Bob",   "Paris", "Rome",  "good",
      "bad",    "ate",   "cooked", "2019", "quickly", "waiter", "table",
      "zorblax", "quux"};
  return words;
}

// Deterministic 4-d vectors for the generator vocabulary.
inline Embedder SmallEmbedder() {
  const auto& words = GeneratorWords();
  std::vector<std::string> vocab(words.begin(), words.end() - 2);
  std::vector<std::vector<double>> vectors;
  Rng rng(12345);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    vectors.push_back(
        {rng.Normal(), rng.Normal(), rng.Normal(), rng.Normal()});
  }
  return Embedder(vocab, vectors);
}

// Random text of `min_words`..`max_words` generator words with occasional
// punctuation and sentence breaks.
inline std::string RandomText(Rng& rng, std::size_t min_words,
                              std::size_t max_words) {
  const auto& words = GeneratorWords();
  const std::size_t n = min_words + rng.Below(max_words - min_words + 1);
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    if (!text.empty()) text += ' ';
    text += words[rng.Below(words.size())];
    const std::uint64_t r = rng.Below(10);
    if (r == 0) text += ',';
    if (r == 1 && i + 1 < n) text += ". The";
  }
  return text + ".";
}

inline Document RandomDocument(Rng& rng, std::size_t min_words,
                               std::size_t max_words,
                               const std::string& id = "doc") {
  return TagPos(Tokenize(RandomText(rng, min_words, max_words),
                         SmallStopwords(), id),
                {});
}

// Strictly positive random profile covering `doc`.
inline SensitivityProfile RandomProfile(Rng& rng, const Document& doc) {
  SensitivityProfile p;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    p.scores.push_back(kDefaultScoreFloor +
                       (1.0 - kDefaultScoreFloor) * rng.Uniform());
  }
  return p;
}

inline double RelativeError(double actual, double expected) {
  return std::abs(actual - expected) / std::abs(expected);
}

}  // namespace tokenbudget::testing

#endif  // TOKENBUDGET_TESTS_TEST_SUPPORT_H_
