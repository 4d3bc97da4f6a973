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

#include "tokenbudget/allocator.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "test_support.h"
#include "tokenbudget/error.h"

namespace tokenbudget {
namespace {

using testing::RandomDocument;
using testing::RandomProfile;

SensitivityProfile Profile(std::vector<double> scores) {
  SensitivityProfile p;
  p.scores = std::move(scores);
  return p;
}

CompositionLedger AppliedLedger(const BudgetAllocation& alloc) {
  CompositionLedger ledger = OpenLedger(alloc);
  for (LedgerSpend& s : ledger.spends) s.applied = true;
  return ledger;
}

TEST(AllocateUniformTest, SplitsEvenlyOverBudgetedTokens) {
  const Document doc = Tokenize("the cat sat , on a mat", {"the", "on", "a"});
  const BudgetAllocation alloc = AllocateUniform(doc, 3.0);
  EXPECT_EQ(alloc.mode, AllocationMode::kNaive);
  ASSERT_EQ(alloc.per_token.size(), 3u);
  for (const auto& [i, e] : alloc.per_token) EXPECT_DOUBLE_EQ(e, 1.0);
  EXPECT_EQ(alloc.excluded, (std::set<std::size_t>{0, 3, 4, 5}));
  EXPECT_DOUBLE_EQ(alloc.Sum(), 3.0);
}

TEST(AllocateWeightedTest, InverseScoreHandExample) {
  const Document doc = Tokenize("red blue", {});
  const BudgetAllocation alloc = AllocateWeighted(Profile({0.5, 0.25}), doc, 3);
  // 1/s = {2, 4}: shares 1/3 and 2/3 of the budget.
  EXPECT_DOUBLE_EQ(alloc.per_token.at(0), 1.0);
  EXPECT_DOUBLE_EQ(alloc.per_token.at(1), 2.0);
  EXPECT_EQ(alloc.mode, AllocationMode::kDistributed);
}

TEST(AllocateWeightedTest, MatchesLongDoubleOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const Document doc = RandomDocument(rng, 1, 40);
    const SensitivityProfile p = RandomProfile(rng, doc);
    const double eps = 0.01 + 10 * rng.Uniform();
    const BudgetAllocation alloc = AllocateWeighted(p, doc, eps);
    const auto recipients = DefaultRecipients(doc);
    long double z = 0;
    for (std::size_t i : recipients) z += 1.0L / p.scores[i];
    for (std::size_t i : recipients) {
      const long double want = eps * (1.0L / p.scores[i]) / z;
      EXPECT_NEAR(alloc.per_token.at(i), static_cast<double>(want),
                  1e-12 * eps);
    }
  }
}

TEST(AllocateWeightedTest, EqualScoresGiveEqualBudgets) {
  const Document doc = Tokenize("a b c d e f g", {});
  const BudgetAllocation alloc =
      AllocateWeighted(Profile(std::vector<double>(7, 0.3)), doc, 0.7);
  for (const auto& [i, e] : alloc.per_token) {
    EXPECT_EQ(e, alloc.per_token.at(0));
  }
  EXPECT_LE(std::abs(alloc.Sum() - 0.7) / 0.7, kCompositionTolerance);
}

TEST(AllocateWeightedTest, MonotoneProperty) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Document doc = RandomDocument(rng, 2, 30);
    const SensitivityProfile p = RandomProfile(rng, doc);
    const BudgetAllocation alloc = AllocateWeighted(p, doc, 1.0);
    for (const auto& [i, ei] : alloc.per_token) {
      for (const auto& [j, ej] : alloc.per_token) {
        if (p.scores[i] > p.scores[j]) EXPECT_LT(ei, ej);
      }
    }
  }
}

TEST(AllocateTest, CompositionProperty) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Document doc = RandomDocument(rng, 0, 50);
    const double eps = std::pow(10.0, -3 + 6 * rng.Uniform());
    for (const BudgetAllocation& alloc :
         {AllocateUniform(doc, eps),
          AllocateWeighted(RandomProfile(rng, doc), doc, eps)}) {
      if (alloc.no_recipients) {
        EXPECT_TRUE(alloc.per_token.empty());
        continue;
      }
      EXPECT_LE(std::abs(alloc.Sum() - eps) / eps, kCompositionTolerance);
      EXPECT_TRUE(VerifyComposition(AppliedLedger(alloc)).pass);
    }
  }
}

TEST(AllocateTest, ExplicitRecipients) {
  const Document doc = Tokenize("a b c", {});
  const std::vector<std::size_t> only = {2};
  const BudgetAllocation alloc = AllocateUniform(doc, 1.0, only);
  EXPECT_EQ(alloc.per_token.size(), 1u);
  EXPECT_EQ(alloc.per_token.at(2), 1.0);
  EXPECT_EQ(alloc.excluded, (std::set<std::size_t>{0, 1}));
}

TEST(AllocateTest, AllStopwordsHaveNoRecipients) {
  const Document doc = Tokenize("the and the .", {"the", "and"});
  const BudgetAllocation alloc = AllocateUniform(doc, 1.0);
  EXPECT_TRUE(alloc.no_recipients);
  EXPECT_TRUE(alloc.per_token.empty());
  EXPECT_TRUE(VerifyComposition(OpenLedger(alloc)).pass);
}

TEST(AllocateTest, RejectsBadInput) {
  const Document doc = Tokenize("a b", {});
  EXPECT_THROW(AllocateUniform(doc, 0.0), ConfigError);
  EXPECT_THROW(AllocateWeighted(Profile({0.5, 0.5}), doc, -1), ConfigError);
  EXPECT_THROW(AllocateWeighted(Profile({0.5}), doc, 1), ConfigError);
  EXPECT_THROW(AllocateWeighted(Profile({0.5, 0.0}), doc, 1), ConfigError);
}

TEST(RollupTest, SentenceBudgetsSumToTotal) {
  const Document doc = Tokenize("Good food here. Bad service there.", {"here"});
  const BudgetAllocation alloc = AllocateUniform(doc, 5.0);
  const auto sentences = RollupSentences(alloc, doc);
  ASSERT_EQ(sentences.size(), 2u);
  EXPECT_DOUBLE_EQ(sentences[0], 2.0);
  EXPECT_DOUBLE_EQ(sentences[1], 3.0);
}

TEST(ScaleBudgetTest, TableBudgets) {
  struct Case {
    double eps, avg, want;
  };
  for (const Case& c : {Case{0.1, 181.06, 18.11}, Case{0.5, 181.06, 90.53},
                        Case{0.5, 51.23, 25.62}, Case{0.1, 51.23, 5.12},
                        Case{0.5, 53.94, 26.97}, Case{0.1, 53.94, 5.39},
                        Case{0.1, 8.31, 0.83}, Case{0.5, 18.29, 9.15}}) {
    EXPECT_NEAR(RoundHalfUp(ScaleBudget(c.eps, c.avg), 2), c.want, 1e-12)
        << c.eps << " x " << c.avg;
  }
  EXPECT_THROW(ScaleBudget(0.0, 5.0), ConfigError);
  EXPECT_THROW(ScaleBudget(0.1, 0.0), ConfigError);
}

TEST(RoundHalfUpTest, Basics) {
  EXPECT_EQ(RoundHalfUp(2.345, 2), 2.35);
  EXPECT_EQ(RoundHalfUp(2.344, 2), 2.34);
  EXPECT_EQ(RoundHalfUp(1.5, 0), 2.0);
}

TEST(LedgerTest, UnappliedSpendsFail) {
  const Document doc = Tokenize("a b c", {});
  const BudgetAllocation alloc = AllocateUniform(doc, 1.0);
  CompositionLedger ledger = OpenLedger(alloc);
  EXPECT_FALSE(VerifyComposition(ledger).pass);
  for (LedgerSpend& s : ledger.spends) s.applied = true;
  EXPECT_TRUE(VerifyComposition(ledger).pass);
  ledger.spends[0].epsilon *= 1.001;
  const CompositionReport r = VerifyComposition(ledger);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.relative_error, 1e-9);
}

}  // namespace
}  // namespace tokenbudget
