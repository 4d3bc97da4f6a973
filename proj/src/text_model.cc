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

#include "tokenbudget/text_model.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>

#include "tokenbudget/error.h"

namespace tokenbudget {

namespace {

constexpr std::array<std::string_view, 7> kPosNames = {"NN", "PR", "VB", "CD",
                                                       "JJ", "RB", "OTHER"};

bool IsAsciiPunct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

// Returns the byte length of the whitespace code point starting at `pos`, or
// 0 if there is none.
std::size_t WhitespaceLength(std::string_view text, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(text[pos]);
  if (b0 < 0x80) {
    return (b0 == ' ' || (b0 >= 0x09 && b0 <= 0x0d)) ? 1 : 0;
  }
  std::uint32_t cp = 0;
  std::size_t len = 0;
  if ((b0 & 0xe0) == 0xc0) {
    cp = b0 & 0x1f;
    len = 2;
  } else if ((b0 & 0xf0) == 0xe0) {
    cp = b0 & 0x0f;
    len = 3;
  } else {
    return 0;
  }
  if (pos + len > text.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(text[pos + i]);
    if ((b & 0xc0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3f);
  }
  const bool space = cp == 0x85 || cp == 0xa0 || cp == 0x1680 ||
                     (cp >= 0x2000 && cp <= 0x200a) || cp == 0x2028 ||
                     cp == 0x2029 || cp == 0x202f || cp == 0x205f ||
                     cp == 0x3000;
  return space ? len : 0;
}

bool IsSentenceTerminator(std::string_view s) {
  return s == "." || s == "!" || s == "?";
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// "stopp" -> "stop"; keeps ll/ss/zz which are usually part of the stem.
std::string UndoubleConsonant(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !IsVowel(stem[n - 1]) &&
      stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
  }
  return stem;
}

}  // namespace

std::string_view PosTagName(PosTag tag) {
  return kPosNames[static_cast<std::size_t>(tag)];
}

std::optional<PosTag> ParsePosTag(std::string_view name) {
  for (std::size_t i = 0; i < kPosNames.size(); ++i) {
    if (kPosNames[i] == name) return static_cast<PosTag>(i);
  }
  return std::nullopt;
}

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool IsPunctuationToken(std::string_view surface) {
  return !surface.empty() &&
         std::all_of(surface.begin(), surface.end(), [](char c) {
           return IsAsciiPunct(static_cast<unsigned char>(c));
         });
}

std::string Lemmatize(std::string_view surface) {
  std::string w = AsciiLower(surface);
  constexpr std::size_t kMinStem = 3;
  if (EndsWith(w, "ies") && w.size() - 3 >= kMinStem - 1) {
    return w.substr(0, w.size() - 3) + "y";
  }
  if (EndsWith(w, "sses")) return w.substr(0, w.size() - 2);
  if (EndsWith(w, "es") && w.size() - 2 >= kMinStem) {
    std::string_view stem(w.data(), w.size() - 2);
    if (EndsWith(stem, "sh") || EndsWith(stem, "ch") || EndsWith(stem, "x") ||
        EndsWith(stem, "s") || EndsWith(stem, "z")) {
      return std::string(stem);
    }
  }
  if (EndsWith(w, "ing") && w.size() - 3 >= kMinStem) {
    return UndoubleConsonant(w.substr(0, w.size() - 3));
  }
  if (EndsWith(w, "ed") && w.size() - 2 >= kMinStem) {
    return UndoubleConsonant(w.substr(0, w.size() - 2));
  }
  if (EndsWith(w, "s") && !EndsWith(w, "ss") && !EndsWith(w, "us") &&
      !EndsWith(w, "is") && w.size() - 1 >= kMinStem) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

std::vector<std::size_t> Document::SentenceOfTokens() const {
  std::vector<std::size_t> out(tokens.size(), 0);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    for (std::size_t i = sentences[s].first; i <= sentences[s].last; ++i) {
      out[i] = s;
    }
  }
  return out;
}

Document Tokenize(std::string_view text, const StopwordSet& stopwords,
                  std::string id) {
  Document doc;
  doc.id = std::move(id);
  doc.text = std::string(text);

  auto emit = [&](std::size_t begin, std::size_t end) {
    Token t;
    t.surface = std::string(text.substr(begin, end - begin));
    t.index = doc.tokens.size();
    t.span = {begin, end};
    t.is_punct = IsPunctuationToken(t.surface);
    if (!t.is_punct) {
      t.lemma = Lemmatize(t.surface);
      t.is_stopword = stopwords.contains(AsciiLower(t.surface));
    }
    doc.tokens.push_back(std::move(t));
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::size_t ws = WhitespaceLength(text, pos); ws > 0) {
      pos += ws;
      continue;
    }
    std::size_t run_end = pos;
    while (run_end < text.size() && WhitespaceLength(text, run_end) == 0) {
      ++run_end;
    }
    std::size_t begin = pos;
    while (begin < run_end && IsAsciiPunct(text[begin])) {
      emit(begin, begin + 1);
      ++begin;
    }
    std::size_t word_end = run_end;
    while (word_end > begin && IsAsciiPunct(text[word_end - 1])) --word_end;
    if (begin < word_end) emit(begin, word_end);
    for (std::size_t p = word_end; p < run_end; ++p) emit(p, p + 1);
    pos = run_end;
  }

  const std::size_t n = doc.tokens.size();
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Token& t = doc.tokens[i];
    if (!t.is_punct || !IsSentenceTerminator(t.surface)) continue;
    bool boundary = i + 1 == n;
    if (!boundary) {
      const Token& next = doc.tokens[i + 1];
      boundary = t.span.end < text.size() &&
                 WhitespaceLength(text, t.span.end) > 0 &&
                 std::isupper(static_cast<unsigned char>(next.surface[0]));
    }
    if (boundary) {
      doc.sentences.push_back({start, i});
      start = i + 1;
    }
  }
  if (start < n) doc.sentences.push_back({start, n - 1});
  return doc;
}

std::string Detokenize(const Document& doc,
                       const std::map<std::size_t, std::string>& replacements) {
  if (!replacements.empty() && replacements.rbegin()->first >= doc.size()) {
    throw ConfigError("replacement index " +
                      std::to_string(replacements.rbegin()->first) +
                      " out of range for document with " +
                      std::to_string(doc.size()) + " tokens");
  }
  std::string out;
  out.reserve(doc.text.size());
  std::size_t cursor = 0;
  for (const auto& [index, replacement] : replacements) {
    const CharSpan& span = doc.tokens[index].span;
    out.append(doc.text, cursor, span.begin - cursor);
    out.append(replacement);
    cursor = span.end;
  }
  out.append(doc.text, cursor, std::string::npos);
  return out;
}

}  // namespace tokenbudget
