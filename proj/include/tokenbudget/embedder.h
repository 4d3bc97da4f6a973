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

#ifndef TOKENBUDGET_EMBEDDER_H_
#define TOKENBUDGET_EMBEDDER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tokenbudget/text_model.h"

namespace tokenbudget {

// Static word vectors with mean pooling. Immutable once built; safe to share
// across threads.
class Embedder {
 public:
  // Throws ConfigError on dimension mismatch, duplicate words, an empty
  // vocabulary or an all-zero vocabulary.
  Embedder(std::vector<std::string> words,
           std::vector<std::vector<double>> vectors);

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  std::span<const double> vector(std::size_t row) const {
    return {data_.data() + row * dim_, dim_};
  }

  // Exact match first, then ASCII case-folded match.
  std::optional<std::size_t> Find(std::string_view word) const;
  bool Contains(std::string_view word) const { return Find(word).has_value(); }

  // True if the token is a word with a vector (punctuation never embeds).
  bool Embeddable(const Token& token) const;

  // Mean of the vectors of the embeddable tokens whose positions are selected
  // by `include` (all tokens when empty). Returns nullopt if none embed.
  std::optional<std::vector<double>> Pool(
      const Document& doc, std::span<const bool> include = {}) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> exact_;
  std::unordered_map<std::string, std::size_t> folded_;
};

// Cosine similarity; 0 when either vector has zero norm.
double Cosine(std::span<const double> a, std::span<const double> b);

}  // namespace tokenbudget

#endif  // TOKENBUDGET_EMBEDDER_H_
