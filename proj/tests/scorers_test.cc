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
#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "test_support.h"
#include "tokenbudget/error.h"
#include "tokenbudget/pipeline.h"

namespace tokenbudget {
namespace {

// Straightforward cosine without any of the library's shortcuts.
double OracleCosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<double> Row(const Embedder& e, const Token& t) {
  auto r = e.Find(t.surface);
  auto v = e.vector(*r);
  return {v.begin(), v.end()};
}

// Mean of every embeddable token's vector except `skip`.
std::vector<double> OracleMean(const Document& doc, const Embedder& e,
                               std::size_t skip) {
  std::vector<double> sum(e.dimension(), 0.0);
  int n = 0;
  for (const Token& t : doc.tokens) {
    if (t.index == skip || t.is_punct || !e.Find(t.surface)) continue;
    const auto v = Row(e, t);
    for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += v[d];
    ++n;
  }
  for (double& x : sum) x /= n;
  return sum;
}

Document Tagged(std::string_view text, const PosLexicon& lexicon = {},
                const StopwordSet& stop = {}) {
  return TagPos(Tokenize(text, stop), lexicon);
}

TEST(PosTest, WeightsMatchTable) {
  EXPECT_EQ(PosWeight(PosTag::kNN), 14);
  EXPECT_EQ(PosWeight(PosTag::kPR), 7);
  EXPECT_EQ(PosWeight(PosTag::kVB), 15);
  EXPECT_EQ(PosWeight(PosTag::kCD), 2);
  EXPECT_EQ(PosWeight(PosTag::kJJ), 5);
  EXPECT_EQ(PosWeight(PosTag::kRB), 5);
  EXPECT_EQ(PosWeight(PosTag::kOther), 0.1);
}

TEST(PosTest, TaggerRules) {
  const Document doc = Tagged("She quickly visited Paris in 2019 , famous baking",
                              {{"she", PosTag::kPR}});
  std::vector<PosTag> tags;
  for (const Token& t : doc.tokens) tags.push_back(*t.pos);
  EXPECT_EQ(tags, (std::vector<PosTag>{PosTag::kPR, PosTag::kRB, PosTag::kVB,
                                       PosTag::kNN, PosTag::kOther,
                                       PosTag::kCD, PosTag::kOther,
                                       PosTag::kJJ, PosTag::kVB}));
}

TEST(PosTest, ScoresAreWeights) {
  const Document doc =
      Tagged("we ate 3", {{"we", PosTag::kPR}, {"ate", PosTag::kVB}});
  const ScoreVector v = ScorePartOfSpeech(doc);
  EXPECT_EQ(v.raw, (std::vector<double>{7, 15, 2}));
}

TEST(PosTest, UntaggedDocumentThrows) {
  EXPECT_THROW(ScorePartOfSpeech(Tokenize("a b", {})), DataError);
}

TEST(IcTest, DogSpotValue) {
  IcTable table;
  table.Add("dog", 'n', "brown", 235);
  table.Add("dog", 'n', "brown", 12);
  table.Add("dog", 'v', "semcor", 4);
  EXPECT_EQ(table.MaxIc("dog", "brown"), 235.0);
  EXPECT_FALSE(table.MaxIc("cat", "brown").has_value());
  const Document doc = Tagged("dogs bark loudly", {{"dogs", PosTag::kNN}});
  const ScoreVector v = ScoreInformationContent(doc, table);
  // Mean over the five corpora of the max IC, 1.0 where the lemma is absent.
  EXPECT_DOUBLE_EQ(v.raw[0], (4.0 + 235.0 + 1.0 + 1.0 + 1.0) / 5.0);
  EXPECT_EQ(v.raw[2], 1.0);  // adverb: not an IC target
}

TEST(IcTest, RejectsBadRows) {
  IcTable table;
  EXPECT_THROW(table.Add("dog", 'n', "brown", 0.5), ConfigError);
  EXPECT_THROW(table.Add("dog", 'j', "brown", 3), ConfigError);
}

TEST(NerTest, LongestMatchWins) {
  const Gazetteer g({"New", "New York", "New York City"});
  const Document doc = Tagged("we love New York City and new york");
  EXPECT_EQ(g.LongestMatch(doc, 2), 3u);
  const ScoreVector v = ScoreNamedEntities(doc, g);
  EXPECT_EQ(v.raw, (std::vector<double>{0, 0, 1, 1, 1, 0, 0, 0}));
}

TEST(NerTest, CapitalizationFallbackSkipsSentenceStart) {
  const Document doc = Tagged("Then Alice left. Bob stayed", {}, {});
  const ScoreVector v = ScoreNamedEntities(doc, Gazetteer{});
  EXPECT_EQ(v.raw, (std::vector<double>{0, 1, 0, 0, 0, 0}));
}

TEST(EmbeddingScorersTest, WordImportanceMatchesBruteForce) {
  const Embedder e = testing::SmallEmbedder();
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const Document doc = testing::RandomDocument(rng, 3, 20);
    const ScoreVector v = ScoreWordImportance(doc, e);
    if (v.degenerate) continue;
    for (const Token& t : doc.tokens) {
      if (t.is_punct || !e.Find(t.surface)) {
        EXPECT_EQ(v.raw[t.index], 0.0);
        continue;
      }
      const double want =
          1.0 - OracleCosine(Row(e, t), OracleMean(doc, e, t.index));
      EXPECT_NEAR(v.raw[t.index], want, 1e-12);
    }
  }
}

TEST(EmbeddingScorersTest, SentenceDifferenceMatchesBruteForce) {
  const Embedder e = testing::SmallEmbedder();
  Rng rng(100);
  for (int trial = 0; trial < 100; ++trial) {
    const Document doc = testing::RandomDocument(rng, 3, 20);
    const ScoreVector prose = ScoreSentenceDifference(doc, e, SdSign::kProse);
    const ScoreVector verbatim =
        ScoreSentenceDifference(doc, e, SdSign::kVerbatim);
    if (prose.degenerate) continue;
    const auto full = OracleMean(doc, e, doc.size());
    for (const Token& t : doc.tokens) {
      double sim = 1.0;
      if (!t.is_punct && e.Find(t.surface)) {
        sim = OracleCosine(full, OracleMean(doc, e, t.index));
      }
      EXPECT_NEAR(prose.raw[t.index], 1.0 - sim, 1e-12);
      EXPECT_NEAR(verbatim.raw[t.index], sim, 1e-12);
    }
  }
}

TEST(EmbeddingScorersTest, DegenerateBelowTwoEmbeddableTokens) {
  const Embedder e = testing::SmallEmbedder();
  const Document doc = Tagged("pizza zorblax !");
  EXPECT_TRUE(ScoreWordImportance(doc, e).degenerate);
  EXPECT_TRUE(ScoreSentenceDifference(doc, e).degenerate);
}

TEST(NormalizeTest, MinMaxAndConstant) {
  ScoreVector v;
  v.raw = {2, 4, 6};
  EXPECT_EQ(NormalizeScores(v).normalized, (std::vector<double>{0, 0.5, 1}));
  v.raw = {3, 3};
  EXPECT_EQ(NormalizeScores(v).normalized, (std::vector<double>{0.5, 0.5}));
}

TEST(AggregateTest, MeanWithFloor) {
  ScoreVector a{ScoringMethod::kIC, {0, 0}, {0, 1}, false};
  ScoreVector b{ScoringMethod::kPOS, {0, 0}, {0, 0.5}, false};
  const SensitivityProfile p =
      Aggregate({a, b}, {ScoringMethod::kIC, ScoringMethod::kPOS}, 1e-3);
  EXPECT_EQ(p.scores, (std::vector<double>{1e-3, 0.75}));
  EXPECT_THROW(Aggregate({a, b}, {}, 1e-3), ConfigError);
  EXPECT_THROW(Aggregate({a}, {ScoringMethod::kNER}, 1e-3), ConfigError);
  EXPECT_THROW(Aggregate({a}, {ScoringMethod::kIC}, 0.0), ConfigError);
}

TEST(AggregateTest, MethodNames) {
  for (ScoringMethod m : kAllMethods) EXPECT_EQ(ParseMethod(MethodName(m)), m);
  EXPECT_EQ(ParseMethod("wi"), ScoringMethod::kWI);
  EXPECT_THROW(ParseMethod("XYZ"), ConfigError);
}

class ToyAssetsTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    assets_ = new Assets(Assets::Load(testing::ToyAssetPaths()));
  }
  static void TearDownTestSuite() { delete assets_; }
  static Assets* assets_;
};
Assets* ToyAssetsTest::assets_ = nullptr;

TEST_F(ToyAssetsTest, SingleScorerReproducesItsNormalizedValues) {
  const Document doc = PrepareDocument(
      {"x", "John Smith visited the Golden Dragon in Boston in 2019.", {}, {}},
      *assets_);
  for (ScoringMethod keep : kAllMethods) {
    ScoringOptions options;
    options.enabled = {keep};
    const ScoredDocument scored =
        ScoreDocument(doc, assets_->scorer_assets(), options);
    ScoreVector direct;
    switch (keep) {
      case ScoringMethod::kIC:
        direct = ScoreInformationContent(doc, *assets_->ic_table);
        break;
      case ScoringMethod::kPOS:
        direct = ScorePartOfSpeech(doc);
        break;
      case ScoringMethod::kNER:
        direct = ScoreNamedEntities(doc, *assets_->gazetteer);
        break;
      case ScoringMethod::kWI:
        direct = ScoreWordImportance(doc, assets_->embedder);
        break;
      case ScoringMethod::kSD:
        direct = ScoreSentenceDifference(doc, assets_->embedder);
        break;
    }
    direct = NormalizeScores(direct);
    for (std::size_t i = 0; i < doc.size(); ++i) {
      EXPECT_EQ(scored.profile.scores[i],
                std::max(direct.normalized[i], kDefaultScoreFloor))
          << MethodName(keep) << " token " << i;
    }
  }
}

TEST_F(ToyAssetsTest, YearTokenAmongMostSensitive) {
  const Document doc = PrepareDocument(
      {"x", "We celebrated in Boston in 2019 with friends.", {}, {}},
      *assets_);
  const ScoredDocument scored =
      ScoreDocument(doc, assets_->scorer_assets(), ScoringOptions{});
  std::vector<double> budgeted;
  double year = 0.0;
  for (std::size_t i : DefaultRecipients(doc)) {
    budgeted.push_back(scored.profile.scores[i]);
    if (doc.tokens[i].surface == "2019") year = scored.profile.scores[i];
  }
  std::sort(budgeted.rbegin(), budgeted.rend());
  EXPECT_NE(budgeted.front(), budgeted.back());  // non-uniform
  EXPECT_GE(year, budgeted[std::min<std::size_t>(2, budgeted.size() - 1)]);
}

TEST_F(ToyAssetsTest, MissingAssetIsConfigError) {
  const Document doc = PrepareDocument({"x", "a b", {}, {}}, *assets_);
  ScorerAssets none{nullptr, nullptr, &assets_->embedder};
  EXPECT_THROW(ScoreDocument(doc, none, ScoringOptions{}), ConfigError);
  ScoringOptions only_pos;
  only_pos.enabled = {ScoringMethod::kPOS};
  EXPECT_NO_THROW(ScoreDocument(doc, none, only_pos));
}

}  // namespace
}  // namespace tokenbudget
