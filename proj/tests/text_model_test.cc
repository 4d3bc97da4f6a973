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

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_support.h"
#include "tokenbudget/error.h"

namespace tokenbudget {
namespace {

std::vector<std::string> Surfaces(const Document& doc) {
  std::vector<std::string> out;
  for (const Token& t : doc.tokens) out.push_back(t.surface);
  return out;
}

TEST(TokenizeTest, SplitsWhitespaceAndPeelsPunctuation) {
  const Document doc = Tokenize("Hello, (big) world!", {});
  EXPECT_EQ(Surfaces(doc), (std::vector<std::string>{"Hello", ",", "(", "big",
                                                     ")", "world", "!"}));
  EXPECT_TRUE(doc.tokens[1].is_punct);
  EXPECT_FALSE(doc.tokens[0].is_punct);
  EXPECT_EQ(doc.tokens[5].span.begin, 13u);
  EXPECT_EQ(doc.tokens[5].span.end, 18u);
  for (std::size_t i = 0; i < doc.size(); ++i) EXPECT_EQ(doc.tokens[i].index, i);
}

TEST(TokenizeTest, KeepsInnerPunctuation) {
  const Document doc = Tokenize("Luigi's e-mail 3.5", {});
  EXPECT_EQ(Surfaces(doc),
            (std::vector<std::string>{"Luigi's", "e-mail", "3.5"}));
}

TEST(TokenizeTest, UnicodeWhitespaceSeparates) {
  const Document doc = Tokenize("caf\xc3\xa9\xc2\xa0noir\xe2\x80\x83ok", {});
  EXPECT_EQ(Surfaces(doc),
            (std::vector<std::string>{"caf\xc3\xa9", "noir", "ok"}));
}

TEST(TokenizeTest, StopwordsAreCaseInsensitive) {
  const Document doc = Tokenize("The cat and THE dog", {"the", "and"});
  EXPECT_TRUE(doc.tokens[0].is_stopword);
  EXPECT_FALSE(doc.tokens[1].is_stopword);
  EXPECT_TRUE(doc.tokens[2].is_stopword);
  EXPECT_TRUE(doc.tokens[3].is_stopword);
}

TEST(TokenizeTest, EmptyText) {
  const Document doc = Tokenize("   ", {});
  EXPECT_TRUE(doc.empty());
  EXPECT_TRUE(doc.sentences.empty());
}

TEST(TokenizeTest, SentenceBoundaries) {
  const Document doc = Tokenize("I ate. Then I left! ok? fine", {});
  ASSERT_EQ(doc.sentences.size(), 2u);
  EXPECT_EQ(doc.sentences[0].first, 0u);
  EXPECT_EQ(doc.sentences[0].last, 2u);
  EXPECT_EQ(doc.sentences[1].first, 3u);
  EXPECT_EQ(doc.sentences[1].last, doc.size() - 1);
  const auto of = doc.SentenceOfTokens();
  EXPECT_EQ(of[2], 0u);
  EXPECT_EQ(of[3], 1u);
}

TEST(DetokenizeTest, IdentityWithoutReplacements) {
  const std::string text = "  Hello,  world!\tBye. ";
  EXPECT_EQ(Detokenize(Tokenize(text, {}), {}), text);
}

TEST(DetokenizeTest, ReplacesBySpan) {
  const Document doc = Tokenize("John ate pizza, twice.", {});
  EXPECT_EQ(Detokenize(doc, {{0, "Mary"}, {2, "pasta"}}),
            "Mary ate pasta, twice.");
}

TEST(DetokenizeTest, OutOfRangeIndexThrows) {
  const Document doc = Tokenize("a b", {});
  EXPECT_THROW(Detokenize(doc, {{2, "x"}}), ConfigError);
}

TEST(DetokenizeTest, RoundTripProperty) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string text = testing::RandomText(rng, 0, 30);
    EXPECT_EQ(Detokenize(Tokenize(text, {}), {}), text);
  }
}

TEST(LemmatizeTest, SuffixRules) {
  EXPECT_EQ(Lemmatize("Cities"), "city");
  EXPECT_EQ(Lemmatize("glasses"), "glass");
  EXPECT_EQ(Lemmatize("boxes"), "box");
  EXPECT_EQ(Lemmatize("dishes"), "dish");
  EXPECT_EQ(Lemmatize("stopped"), "stop");
  EXPECT_EQ(Lemmatize("walking"), "walk");
  EXPECT_EQ(Lemmatize("dogs"), "dog");
  EXPECT_EQ(Lemmatize("bus"), "bus");
  EXPECT_EQ(Lemmatize("is"), "is");
  EXPECT_EQ(Lemmatize("dog"), "dog");
}

TEST(PosTagNameTest, RoundTrip) {
  for (PosTag t : {PosTag::kNN, PosTag::kPR, PosTag::kVB, PosTag::kCD,
                   PosTag::kJJ, PosTag::kRB, PosTag::kOther}) {
    EXPECT_EQ(ParsePosTag(PosTagName(t)), t);
  }
  EXPECT_FALSE(ParsePosTag("XX").has_value());
}

}  // namespace
}  // namespace tokenbudget
