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

// Canonical document representation: tokens with byte spans, sentence
// spans, stopword and punctuation flags.

#ifndef TOKENBUDGET_TEXT_MODEL_H_
#define TOKENBUDGET_TEXT_MODEL_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace tokenbudget {

enum class PosTag { kNN, kPR, kVB, kCD, kJJ, kRB, kOther };

std::string_view PosTagName(PosTag tag);
// Accepts the canonical names ("NN", "PR", ...). Returns nullopt otherwise.
std::optional<PosTag> ParsePosTag(std::string_view name);

struct CharSpan {
  std::size_t begin = 0;  // byte offset, inclusive
  std::size_t end = 0;    // byte offset, exclusive
};

struct Token {
  std::string surface;
  std::optional<std::string> lemma;
  std::size_t index = 0;
  CharSpan span;
  std::optional<PosTag> pos;
  bool is_stopword = false;
  bool is_punct = false;
};

// Inclusive token range of one sentence.
struct SentenceSpan {
  std::size_t first = 0;
  std::size_t last = 0;
};

struct Document {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<SentenceSpan> sentences;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  // Sentence index of every token, in token order.
  std::vector<std::size_t> SentenceOfTokens() const;
};

// Lowercase word list; lookups fold ASCII case.
using StopwordSet = std::unordered_set<std::string>;

// Splits `text` on Unicode whitespace, then peels leading and trailing ASCII
// punctuation off each run into one-character punctuation tokens. A sentence
// ends at '.', '!' or '?' when the next byte is whitespace and the next token
// starts with an uppercase letter, or at end of text.
Document Tokenize(std::string_view text, const StopwordSet& stopwords,
                  std::string id = {});

// Substitutes replaced tokens' byte spans and keeps every other byte. Throws
// ConfigError for an out-of-range token index.
std::string Detokenize(const Document& doc,
                       const std::map<std::size_t, std::string>& replacements);

// Lowercased surface with s/es/ies/ed/ing stripping.
std::string Lemmatize(std::string_view surface);

std::string AsciiLower(std::string_view s);
bool IsPunctuationToken(std::string_view surface);

}  // namespace tokenbudget

#endif  // TOKENBUDGET_TEXT_MODEL_H_
