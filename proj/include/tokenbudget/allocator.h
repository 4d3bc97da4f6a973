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

// Splits a document budget into per-token budgets that compose exactly to
// the document budget, and keeps a ledger of what the mechanism spent.

#ifndef TOKENBUDGET_ALLOCATOR_H_
#define TOKENBUDGET_ALLOCATOR_H_

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tokenbudget/scorers.h"
#include "tokenbudget/text_model.h"

namespace tokenbudget {

enum class AllocationMode { kNaive, kDistributed };

std::string_view ModeName(AllocationMode mode);

inline constexpr double kCompositionTolerance = 1e-9;

struct BudgetAllocation {
  std::string document_id;
  std::size_t token_count = 0;
  AllocationMode mode = AllocationMode::kNaive;
  double total_epsilon = 0.0;
  std::map<std::size_t, double> per_token;  // budgeted tokens only
  std::set<std::size_t> excluded;
  bool no_recipients = false;

  double Sum() const;
};

// Non-stopword, non-punctuation tokens in index order.
std::vector<std::size_t> DefaultRecipients(const Document& doc);

// epsilon / |recipients| each. Throws ConfigError if epsilon <= 0.
BudgetAllocation AllocateUniform(const Document& doc, double epsilon);
BudgetAllocation AllocateUniform(const Document& doc, double epsilon,
                                 std::span<const std::size_t> recipients);

// epsilon * (1/s_i) / sum_j (1/s_j) over the recipients. Throws ConfigError
// if epsilon <= 0, the profile does not cover the document, or a recipient's
// score is not positive.
BudgetAllocation AllocateWeighted(const SensitivityProfile& profile,
                                  const Document& doc, double epsilon);
BudgetAllocation AllocateWeighted(const SensitivityProfile& profile,
                                  const Document& doc, double epsilon,
                                  std::span<const std::size_t> recipients);

// Sum of per-token budgets inside each sentence.
std::vector<double> RollupSentences(const BudgetAllocation& alloc,
                                    const Document& doc);

// Per-document budget from a per-word budget and a corpus's average length.
double ScaleBudget(double per_word_epsilon, double avg_tokens);

// Decimal half-up rounding that ignores binary representation noise below
// 1e-9, so 0.5 * 51.23 rounds to 25.62.
double RoundHalfUp(double value, int decimals);

struct LedgerSpend {
  std::size_t token_index = 0;
  double epsilon = 0.0;
  bool applied = false;
};

struct CompositionLedger {
  std::string document_id;
  double budget = 0.0;
  std::vector<LedgerSpend> spends;
  bool no_recipients = false;

  double AppliedSum() const;
  double Residual() const { return budget - AppliedSum(); }
};

// One unapplied spend per budgeted token.
CompositionLedger OpenLedger(const BudgetAllocation& alloc);

struct CompositionReport {
  bool pass = false;
  double residual = 0.0;
  double relative_error = 0.0;
};

// Passes iff |applied - budget| / budget <= 1e-9, or the allocation had no
// recipients and nothing was spent.
CompositionReport VerifyComposition(const CompositionLedger& ledger);

}  // namespace tokenbudget

#endif  // TOKENBUDGET_ALLOCATOR_H_
