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

#include "tokenbudget/embedder.h"

#include <algorithm>
#include <cmath>

#include "tokenbudget/error.h"

namespace tokenbudget {

Embedder::Embedder(std::vector<std::string> words,
                   std::vector<std::vector<double>> vectors)
    : words_(std::move(words)) {
  if (words_.empty()) throw ConfigError("embedder vocabulary is empty");
  if (words_.size() != vectors.size()) {
    throw ConfigError("embedder has " + std::to_string(words_.size()) +
                      " words but " + std::to_string(vectors.size()) +
                      " vectors");
  }
  dim_ = vectors.front().size();
  if (dim_ == 0) throw ConfigError("embedding dimension must be positive");
  data_.reserve(words_.size() * dim_);
  bool any_nonzero = false;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (vectors[i].size() != dim_) {
      throw ConfigError("vector for '" + words_[i] + "' has dimension " +
                        std::to_string(vectors[i].size()) + ", expected " +
                        std::to_string(dim_));
    }
    for (double v : vectors[i]) any_nonzero = any_nonzero || v != 0.0;
    data_.insert(data_.end(), vectors[i].begin(), vectors[i].end());
    if (!exact_.emplace(words_[i], i).second) {
      throw ConfigError("duplicate embedding word '" + words_[i] + "'");
    }
    folded_.emplace(AsciiLower(words_[i]), i);
  }
  if (!any_nonzero) throw ConfigError("all embedding vectors are zero");
}

std::optional<std::size_t> Embedder::Find(std::string_view word) const {
  if (auto it = exact_.find(std::string(word)); it != exact_.end()) {
    return it->second;
  }
  if (auto it = folded_.find(AsciiLower(word)); it != folded_.end()) {
    return it->second;
  }
  return std::nullopt;
}

bool Embedder::Embeddable(const Token& token) const {
  return !token.is_punct && Contains(token.surface);
}

std::optional<std::vector<double>> Embedder::Pool(
    const Document& doc, std::span<const bool> include) const {
  std::vector<double> sum(dim_, 0.0);
  std::size_t count = 0;
  for (const Token& t : doc.tokens) {
    if (!include.empty() && !include[t.index]) continue;
    if (t.is_punct) continue;
    auto row = Find(t.surface);
    if (!row) continue;
    auto v = vector(*row);
    for (std::size_t d = 0; d < dim_; ++d) sum[d] += v[d];
    ++count;
  }
  if (count == 0) return std::nullopt;
  for (double& x : sum) x /= static_cast<double>(count);
  return sum;
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  // sqrt(x * x) == x exactly, so identical inputs give exactly 1.
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace tokenbudget
