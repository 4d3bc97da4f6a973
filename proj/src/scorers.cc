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

#include "tokenbudget/scorers.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "tokenbudget/error.h"

namespace tokenbudget {

namespace {

constexpr std::array<std::string_view, 5> kMethodNames = {"IC", "POS", "NER",
                                                          "WI", "SD"};

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

// Suffix rules only fire on words at least two bytes longer than the suffix.
bool HasSuffix(std::string_view word, std::string_view suffix) {
  return word.size() >= suffix.size() + 2 && EndsWith(word, suffix);
}

bool IsNumericLiteral(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  bool digit_seen = false;
  bool last_was_sep = false;
  for (; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (std::isdigit(c)) {
      digit_seen = true;
      last_was_sep = false;
    } else if ((c == '.' || c == ',') && digit_seen && !last_was_sep) {
      last_was_sep = true;
    } else {
      return false;
    }
  }
  return digit_seen && !last_was_sep;
}

bool StartsUpper(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

std::vector<bool> SentenceInitialMask(const Document& doc) {
  std::vector<bool> initial(doc.size(), false);
  for (const SentenceSpan& s : doc.sentences) initial[s.first] = true;
  return initial;
}

PosTag RequireTag(const Token& t) {
  if (!t.pos) {
    throw DataError("token " + std::to_string(t.index) + " ('" + t.surface +
                    "') has no POS tag; run TagPos first");
  }
  return *t.pos;
}

ScoreVector MakeVector(ScoringMethod method, std::size_t n, double fill) {
  ScoreVector v;
  v.method = method;
  v.raw.assign(n, fill);
  return v;
}

// Rows of the embeddable tokens plus the sum of their vectors.
struct EmbeddingSums {
  std::vector<std::optional<std::size_t>> rows;
  std::vector<double> sum;
  std::size_t count = 0;
};

EmbeddingSums SumEmbeddings(const Document& doc, const Embedder& embedder) {
  EmbeddingSums out;
  out.rows.resize(doc.size());
  out.sum.assign(embedder.dimension(), 0.0);
  for (const Token& t : doc.tokens) {
    if (t.is_punct) continue;
    out.rows[t.index] = embedder.Find(t.surface);
    if (!out.rows[t.index]) continue;
    auto v = embedder.vector(*out.rows[t.index]);
    for (std::size_t d = 0; d < v.size(); ++d) out.sum[d] += v[d];
    ++out.count;
  }
  return out;
}

std::vector<double> Minus(const std::vector<double>& a,
                          std::span<const double> b) {
  std::vector<double> out(a);
  for (std::size_t d = 0; d < out.size(); ++d) out[d] -= b[d];
  return out;
}

}  // namespace

std::string_view MethodName(ScoringMethod method) {
  return kMethodNames[static_cast<std::size_t>(method)];
}

ScoringMethod ParseMethod(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  for (std::size_t i = 0; i < kMethodNames.size(); ++i) {
    if (kMethodNames[i] == upper) return static_cast<ScoringMethod>(i);
  }
  throw ConfigError("unknown scorer '" + std::string(name) +
                    "' (expected IC, POS, NER, WI or SD)");
}

MethodSet AllMethodsExcept(const MethodSet& disabled) {
  MethodSet out;
  for (ScoringMethod m : kAllMethods) {
    if (!disabled.contains(m)) out.insert(m);
  }
  return out;
}

void IcTable::Add(std::string lemma, char pos, std::string corpus, double ic) {
  if (!(ic >= 1.0) || !std::isfinite(ic)) {
    throw ConfigError("IC value for '" + lemma + "' must be a finite value >= 1");
  }
  if (pos != 'n' && pos != 'v') {
    throw ConfigError("IC part of speech must be 'n' or 'v'");
  }
  entries_[std::move(lemma)].push_back({pos, std::move(corpus), ic});
  ++rows_;
}

std::optional<double> IcTable::MaxIc(std::string_view lemma,
                                     std::string_view corpus) const {
  auto it = entries_.find(std::string(lemma));
  if (it == entries_.end()) return std::nullopt;
  std::optional<double> best;
  for (const Entry& e : it->second) {
    if (e.corpus == corpus && (!best || e.ic > *best)) best = e.ic;
  }
  return best;
}

Gazetteer::Gazetteer(const std::vector<std::string>& phrases) {
  for (const auto& p : phrases) Add(p);
}

void Gazetteer::Add(std::string_view phrase) {
  Document parsed = Tokenize(phrase, {});
  if (parsed.empty()) return;
  std::vector<std::string> surfaces;
  for (const Token& t : parsed.tokens) surfaces.push_back(t.surface);
  auto& bucket = by_head_[surfaces.front()];
  if (std::find(bucket.begin(), bucket.end(), surfaces) != bucket.end()) return;
  bucket.push_back(std::move(surfaces));
  std::stable_sort(bucket.begin(), bucket.end(),
                   [](const auto& a, const auto& b) {
                     return a.size() > b.size();
                   });
  ++count_;
}

std::size_t Gazetteer::LongestMatch(const Document& doc,
                                    std::size_t start) const {
  auto it = by_head_.find(doc.tokens[start].surface);
  if (it == by_head_.end()) return 0;
  for (const auto& phrase : it->second) {
    if (start + phrase.size() > doc.size()) continue;
    bool match = true;
    for (std::size_t k = 1; k < phrase.size() && match; ++k) {
      match = doc.tokens[start + k].surface == phrase[k];
    }
    if (match) return phrase.size();
  }
  return 0;
}

Document TagPos(Document doc, const PosLexicon& lexicon) {
  const std::vector<bool> initial = SentenceInitialMask(doc);
  for (Token& t : doc.tokens) {
    if (t.is_punct) {
      t.pos = PosTag::kOther;
      continue;
    }
    const std::string lower = AsciiLower(t.surface);
    if (auto it = lexicon.find(lower); it != lexicon.end()) {
      t.pos = it->second;
    } else if (IsNumericLiteral(t.surface)) {
      t.pos = PosTag::kCD;
    } else if (HasSuffix(lower, "ly")) {
      t.pos = PosTag::kRB;
    } else if (HasSuffix(lower, "ing") || HasSuffix(lower, "ed")) {
      t.pos = PosTag::kVB;
    } else if (HasSuffix(lower, "ous") || HasSuffix(lower, "ful") ||
               HasSuffix(lower, "ive")) {
      t.pos = PosTag::kJJ;
    } else if (!initial[t.index] && StartsUpper(t.surface)) {
      t.pos = PosTag::kNN;
    } else {
      t.pos = PosTag::kOther;
    }
  }
  return doc;
}

ScoreVector ScoreInformationContent(const Document& doc, const IcTable& table) {
  ScoreVector v = MakeVector(ScoringMethod::kIC, doc.size(), 1.0);
  for (const Token& t : doc.tokens) {
    const PosTag tag = RequireTag(t);
    if (tag != PosTag::kNN && tag != PosTag::kVB) continue;
    std::vector<std::string> keys;
    if (t.lemma) keys.push_back(*t.lemma);
    keys.push_back(AsciiLower(t.surface));
    double total = 0.0;
    for (std::string_view corpus : IcTable::kCorpora) {
      std::optional<double> best;
      for (const auto& key : keys) {
        auto ic = table.MaxIc(key, corpus);
        if (ic && (!best || *ic > *best)) best = ic;
      }
      total += best.value_or(1.0);
    }
    v.raw[t.index] = total / static_cast<double>(IcTable::kCorpora.size());
  }
  return v;
}

double PosWeight(PosTag tag) {
  switch (tag) {
    case PosTag::kNN:
      return 14.0;
    case PosTag::kPR:
      return 7.0;
    case PosTag::kVB:
      return 15.0;
    case PosTag::kCD:
      return 2.0;
    case PosTag::kJJ:
    case PosTag::kRB:
      return 5.0;
    case PosTag::kOther:
      break;
  }
  return 0.1;
}

ScoreVector ScorePartOfSpeech(const Document& doc) {
  ScoreVector v = MakeVector(ScoringMethod::kPOS, doc.size(), 0.0);
  for (const Token& t : doc.tokens) v.raw[t.index] = PosWeight(RequireTag(t));
  return v;
}

ScoreVector ScoreNamedEntities(const Document& doc,
                               const Gazetteer& gazetteer) {
  ScoreVector v = MakeVector(ScoringMethod::kNER, doc.size(), 0.0);
  for (std::size_t i = 0; i < doc.size();) {
    const std::size_t len = gazetteer.LongestMatch(doc, i);
    if (len == 0) {
      ++i;
      continue;
    }
    for (std::size_t k = i; k < i + len; ++k) v.raw[k] = 1.0;
    i += len;
  }
  const std::vector<bool> initial = SentenceInitialMask(doc);
  for (const Token& t : doc.tokens) {
    if (!initial[t.index] && !t.is_punct && !t.is_stopword &&
        StartsUpper(t.surface)) {
      v.raw[t.index] = 1.0;
    }
  }
  return v;
}

ScoreVector ScoreWordImportance(const Document& doc, const Embedder& embedder) {
  ScoreVector v = MakeVector(ScoringMethod::kWI, doc.size(), 0.0);
  const EmbeddingSums sums = SumEmbeddings(doc, embedder);
  if (sums.count < 2) {
    v.degenerate = true;
    return v;
  }
  for (const Token& t : doc.tokens) {
    if (!sums.rows[t.index]) continue;
    auto own = embedder.vector(*sums.rows[t.index]);
    // Cosine is scale-free, so the remainder's sum stands in for its mean.
    const std::vector<double> remainder = Minus(sums.sum, own);
    v.raw[t.index] = 1.0 - Cosine(own, remainder);
  }
  return v;
}

ScoreVector ScoreSentenceDifference(const Document& doc,
                                    const Embedder& embedder, SdSign sign) {
  ScoreVector v = MakeVector(ScoringMethod::kSD, doc.size(), 0.0);
  const EmbeddingSums sums = SumEmbeddings(doc, embedder);
  if (sums.count < 2) {
    v.degenerate = true;
    return v;
  }
  for (const Token& t : doc.tokens) {
    double sim = 1.0;  // removing a token without a vector changes nothing
    if (sums.rows[t.index]) {
      const std::vector<double> remainder =
          Minus(sums.sum, embedder.vector(*sums.rows[t.index]));
      sim = Cosine(sums.sum, remainder);
    }
    v.raw[t.index] = sign == SdSign::kProse ? 1.0 - sim : sim;
  }
  return v;
}

ScoreVector NormalizeScores(ScoreVector v) {
  v.normalized.assign(v.raw.size(), 0.5);
  if (v.raw.empty()) return v;
  const auto [lo, hi] = std::minmax_element(v.raw.begin(), v.raw.end());
  const double min = *lo, max = *hi;
  if (max == min) return v;
  for (std::size_t i = 0; i < v.raw.size(); ++i) {
    v.normalized[i] = std::clamp((v.raw[i] - min) / (max - min), 0.0, 1.0);
  }
  return v;
}

SensitivityProfile Aggregate(const std::vector<ScoreVector>& vectors,
                             const MethodSet& enabled, double floor) {
  if (enabled.empty()) throw ConfigError("no scoring method enabled");
  if (!(floor > 0.0 && floor <= 1.0)) {
    throw ConfigError("score floor must lie in (0, 1]");
  }
  std::vector<const ScoreVector*> used;
  for (ScoringMethod m : enabled) {
    auto it = std::find_if(vectors.begin(), vectors.end(),
                           [m](const ScoreVector& v) { return v.method == m; });
    if (it == vectors.end()) {
      throw ConfigError("no score vector for enabled method " +
                        std::string(MethodName(m)));
    }
    if (it->normalized.size() != it->raw.size()) {
      throw ConfigError("score vector for " + std::string(MethodName(m)) +
                        " is not normalized");
    }
    used.push_back(&*it);
  }
  const std::size_t n = used.front()->normalized.size();
  for (const ScoreVector* v : used) {
    if (v->normalized.size() != n) {
      throw ConfigError("score vectors have different lengths");
    }
  }
  SensitivityProfile profile;
  profile.enabled = enabled;
  profile.scores.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const ScoreVector* v : used) sum += v->normalized[i];
    profile.scores[i] =
        std::max(sum / static_cast<double>(used.size()), floor);
  }
  return profile;
}

ScoredDocument ScoreDocument(const Document& tagged, const ScorerAssets& assets,
                             const ScoringOptions& options) {
  auto require = [](const void* asset, ScoringMethod m, const char* what) {
    if (asset == nullptr) {
      throw ConfigError(std::string(MethodName(m)) + " scorer needs " + what);
    }
  };
  ScoredDocument out;
  for (ScoringMethod m : options.enabled) {
    ScoreVector raw;
    switch (m) {
      case ScoringMethod::kIC:
        require(assets.ic_table, m, "an IC table");
        raw = ScoreInformationContent(tagged, *assets.ic_table);
        break;
      case ScoringMethod::kPOS:
        raw = ScorePartOfSpeech(tagged);
        break;
      case ScoringMethod::kNER:
        require(assets.gazetteer, m, "a gazetteer");
        raw = ScoreNamedEntities(tagged, *assets.gazetteer);
        break;
      case ScoringMethod::kWI:
        require(assets.embedder, m, "embeddings");
        raw = ScoreWordImportance(tagged, *assets.embedder);
        break;
      case ScoringMethod::kSD:
        require(assets.embedder, m, "embeddings");
        raw = ScoreSentenceDifference(tagged, *assets.embedder,
                                      options.sd_sign);
        break;
    }
    out.vectors.push_back(NormalizeScores(std::move(raw)));
  }
  out.profile = Aggregate(out.vectors, options.enabled, options.score_floor);
  return out;
}

}  // namespace tokenbudget
