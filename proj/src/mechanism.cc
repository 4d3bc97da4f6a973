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

#include "tokenbudget/mechanism.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "tokenbudget/error.h"

namespace tokenbudget {

namespace {

constexpr std::array<std::string_view, 6> kFlagNames = {
    "stopword_passthrough", "punct_passthrough", "oov_passthrough",
    "excluded_passthrough", "perturbed",         "unchanged_by_noise"};

void CheckEps(double eps) {
  if (!(eps > 0.0) || std::isnan(eps)) {
    throw ConfigError("per-token epsilon must be positive");
  }
}

std::vector<double> RandomUnitDirection(std::size_t dim, Rng& rng) {
  std::vector<double> dir(dim);
  double norm = 0.0;
  while (norm == 0.0) {
    norm = 0.0;
    for (double& x : dir) {
      x = rng.Normal();
      norm += x * x;
    }
  }
  norm = std::sqrt(norm);
  for (double& x : dir) x /= norm;
  return dir;
}

}  // namespace

ProjectionLists ProjectionLists::Build(const Embedder& embedder, std::size_t k,
                                       std::uint64_t seed) {
  if (k == 0) throw ConfigError("need at least one projection list");
  std::vector<std::vector<double>> directions;
  directions.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    Rng rng(DeriveSeed(seed, "projection", j));
    directions.push_back(RandomUnitDirection(embedder.dimension(), rng));
  }
  return FromDirections(embedder, directions, seed);
}

ProjectionLists ProjectionLists::FromDirections(
    const Embedder& embedder,
    const std::vector<std::vector<double>>& directions, std::uint64_t seed) {
  if (embedder.size() < 2) {
    throw ConfigError("projection lists need a vocabulary of at least 2 words");
  }
  if (directions.empty()) {
    throw ConfigError("need at least one projection list");
  }
  ProjectionLists out;
  out.seed_ = seed;
  out.words_ = embedder.words();
  const std::size_t n = out.words_.size();
  for (std::size_t row = 0; row < n; ++row) {
    out.exact_.emplace(out.words_[row], row);
    out.folded_.emplace(AsciiLower(out.words_[row]), row);
  }
  std::vector<double> projection(n);
  for (const auto& dir : directions) {
    if (dir.size() != embedder.dimension()) {
      throw ConfigError("projection direction has the wrong dimension");
    }
    for (std::size_t row = 0; row < n; ++row) {
      auto v = embedder.vector(row);
      projection[row] = std::inner_product(v.begin(), v.end(), dir.begin(), 0.0);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (projection[a] != projection[b]) return projection[a] < projection[b];
      return out.words_[a] < out.words_[b];
    });
    std::vector<std::size_t> pos(n);
    for (std::size_t p = 0; p < n; ++p) pos[order[p]] = p;
    out.lists_.push_back(std::move(order));
    out.positions_.push_back(std::move(pos));
  }
  return out;
}

std::optional<std::size_t> ProjectionLists::Find(std::string_view word) const {
  if (auto it = exact_.find(std::string(word)); it != exact_.end()) {
    return it->second;
  }
  if (auto it = folded_.find(AsciiLower(word)); it != folded_.end()) {
    return it->second;
  }
  return std::nullopt;
}

double TwoSidedGeometricPmf(std::int64_t z, double eps) {
  CheckEps(eps);
  const double q = std::exp(-eps);
  const double mag = static_cast<double>(z < 0 ? -z : z);
  return (-std::expm1(-eps)) / (1.0 + q) * std::exp(-eps * mag);
}

std::int64_t SampleTwoSidedGeometric(double eps, Rng& rng) {
  CheckEps(eps);
  // P(|Z| >= m) = 2 q^m / (1 + q) for m >= 1. With v uniform on (0, 1],
  // |Z| = max{m : v <= P(|Z| >= m)}.
  const double v = 1.0 - rng.Uniform();
  const double log_tail = std::log(v) + std::log1p(std::exp(-eps)) -
                          std::numbers::ln2;  // log(v (1 + q) / 2)
  const bool negative = (rng.Next() >> 63) != 0;
  if (log_tail > -eps) return 0;  // v > P(|Z| >= 1)
  const double m = std::floor(log_tail / -eps);
  constexpr double kCap = static_cast<double>(std::int64_t{1} << 62);
  const auto magnitude =
      static_cast<std::int64_t>(std::clamp(m, 1.0, kCap));
  return negative ? -magnitude : magnitude;
}

std::size_t PerturbIndex(std::size_t index, std::size_t list_length,
                         double eps, Rng& rng) {
  const std::int64_t z = SampleTwoSidedGeometric(eps, rng);
  if (list_length <= 1) return 0;
  const auto last = static_cast<std::int64_t>(list_length - 1);
  const auto i = static_cast<std::int64_t>(index);
  // Clamp without overflowing on extreme draws.
  if (z > last - i) return list_length - 1;
  if (z < -i) return 0;
  return static_cast<std::size_t>(i + z);
}

std::vector<double> ExactOutputPmf(std::size_t index, double eps,
                                   std::size_t list_length) {
  CheckEps(eps);
  if (index >= list_length) {
    throw ConfigError("index " + std::to_string(index) +
                      " outside list of length " +
                      std::to_string(list_length));
  }
  if (list_length == 1) return {1.0};
  const double q = std::exp(-eps);
  const double p0 = -std::expm1(-eps) / (1.0 + q);
  std::vector<double> pmf(list_length);
  for (std::size_t y = 0; y < list_length; ++y) {
    const double dist = std::fabs(static_cast<double>(y) -
                                  static_cast<double>(index));
    pmf[y] = p0 * std::exp(-eps * dist);
  }
  // Boundary positions absorb the clamped tails: P(Z <= -m) = q^m / (1 + q).
  pmf.front() = std::exp(-eps * static_cast<double>(index)) / (1.0 + q);
  pmf.back() =
      std::exp(-eps * static_cast<double>(list_length - 1 - index)) / (1.0 + q);
  return pmf;
}

std::string_view FlagName(TokenFlag flag) {
  return kFlagNames[static_cast<std::size_t>(flag)];
}

TokenFlag ParseFlag(std::string_view name) {
  for (std::size_t i = 0; i < kFlagNames.size(); ++i) {
    if (kFlagNames[i] == name) return static_cast<TokenFlag>(i);
  }
  throw DataError("unknown token flag '" + std::string(name) + "'");
}

PerturbOutcome PerturbToken(const Token& token, const ProjectionLists& lists,
                            double eps, Rng& rng) {
  CheckEps(eps);
  const auto row = lists.Find(token.surface);
  if (!row) return {token.surface, TokenFlag::kOovPassthrough};
  const std::size_t j = lists.list_count() == 1 ? 0 : rng.Below(lists.list_count());
  const std::size_t from = lists.position(j, *row);
  const std::size_t to =
      PerturbIndex(from, lists.vocabulary_size(), eps, rng);
  if (to == from) return {token.surface, TokenFlag::kUnchangedByNoise};
  return {lists.word(lists.list(j)[to]), TokenFlag::kPerturbed};
}

PrivatizedDocument RewriteDocument(const Document& doc,
                                   const BudgetAllocation& alloc,
                                   const ProjectionLists& lists,
                                   std::uint64_t seed) {
  if (alloc.document_id != doc.id || alloc.token_count != doc.size()) {
    throw DataError("allocation for '" + alloc.document_id + "' (" +
                    std::to_string(alloc.token_count) +
                    " tokens) does not match document '" + doc.id + "' (" +
                    std::to_string(doc.size()) + " tokens)");
  }
  PrivatizedDocument out;
  out.document_id = doc.id;
  out.ledger = OpenLedger(alloc);
  out.flags.resize(doc.size());
  std::size_t spend = 0;
  for (const Token& t : doc.tokens) {
    auto it = alloc.per_token.find(t.index);
    if (it == alloc.per_token.end()) {
      if (t.is_punct) {
        out.flags[t.index] = TokenFlag::kPunctPassthrough;
      } else if (t.is_stopword) {
        out.flags[t.index] = TokenFlag::kStopwordPassthrough;
      } else if (!lists.Find(t.surface)) {
        out.flags[t.index] = TokenFlag::kOovPassthrough;
      } else {
        out.flags[t.index] = TokenFlag::kExcludedPassthrough;
      }
      continue;
    }
    Rng rng(DeriveSeed(seed, doc.id, t.index));
    PerturbOutcome outcome = PerturbToken(t, lists, it->second, rng);
    out.flags[t.index] = outcome.flag;
    // Ledger spends are in token order, matching per_token's ordering.
    out.ledger.spends[spend++].applied =
        outcome.flag != TokenFlag::kOovPassthrough;
    if (outcome.flag == TokenFlag::kPerturbed) {
      out.replacements.emplace(t.index, std::move(outcome.surface));
    }
  }
  out.text = Detokenize(doc, out.replacements);
  return out;
}

}  // namespace tokenbudget
