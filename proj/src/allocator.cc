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

#include <algorithm>
#include <cmath>

#include "tokenbudget/error.h"

namespace tokenbudget {

namespace {

void CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be a positive finite number, got " +
                      std::to_string(epsilon));
  }
}

BudgetAllocation Skeleton(const Document& doc, double epsilon,
                          AllocationMode mode,
                          std::span<const std::size_t> recipients) {
  CheckEpsilon(epsilon);
  BudgetAllocation alloc;
  alloc.document_id = doc.id;
  alloc.token_count = doc.size();
  alloc.mode = mode;
  alloc.total_epsilon = epsilon;
  std::vector<bool> is_recipient(doc.size(), false);
  for (std::size_t i : recipients) {
    if (i >= doc.size()) {
      throw ConfigError("recipient index " + std::to_string(i) +
                        " out of range");
    }
    is_recipient[i] = true;
  }
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!is_recipient[i]) alloc.excluded.insert(i);
  }
  alloc.no_recipients = recipients.empty();
  return alloc;
}

// Hands the rounding residual to the largest allocations so the sum matches
// the budget. Ties at the maximum share it equally, which keeps equal scores
// on equal budgets.
void CloseResidual(BudgetAllocation& alloc) {
  if (alloc.per_token.empty()) return;
  const double residual = alloc.total_epsilon - alloc.Sum();
  if (residual == 0.0) return;
  double max = 0.0;
  for (const auto& [i, e] : alloc.per_token) max = std::max(max, e);
  std::size_t ties = 0;
  for (const auto& [i, e] : alloc.per_token) ties += e == max ? 1 : 0;
  const double share = residual / static_cast<double>(ties);
  for (auto& [i, e] : alloc.per_token) {
    if (e == max) e += share;
  }
}

}  // namespace

std::string_view ModeName(AllocationMode mode) {
  return mode == AllocationMode::kNaive ? "naive" : "distributed";
}

double BudgetAllocation::Sum() const {
  double sum = 0.0;
  for (const auto& [i, e] : per_token) sum += e;
  return sum;
}

std::vector<std::size_t> DefaultRecipients(const Document& doc) {
  std::vector<std::size_t> out;
  for (const Token& t : doc.tokens) {
    if (!t.is_punct && !t.is_stopword) out.push_back(t.index);
  }
  return out;
}

BudgetAllocation AllocateUniform(const Document& doc, double epsilon) {
  const auto recipients = DefaultRecipients(doc);
  return AllocateUniform(doc, epsilon, recipients);
}

BudgetAllocation AllocateUniform(const Document& doc, double epsilon,
                                 std::span<const std::size_t> recipients) {
  BudgetAllocation alloc =
      Skeleton(doc, epsilon, AllocationMode::kNaive, recipients);
  if (alloc.no_recipients) return alloc;
  const double share = epsilon / static_cast<double>(recipients.size());
  for (std::size_t i : recipients) alloc.per_token[i] = share;
  CloseResidual(alloc);
  return alloc;
}

BudgetAllocation AllocateWeighted(const SensitivityProfile& profile,
                                  const Document& doc, double epsilon) {
  const auto recipients = DefaultRecipients(doc);
  return AllocateWeighted(profile, doc, epsilon, recipients);
}

BudgetAllocation AllocateWeighted(const SensitivityProfile& profile,
                                  const Document& doc, double epsilon,
                                  std::span<const std::size_t> recipients) {
  BudgetAllocation alloc =
      Skeleton(doc, epsilon, AllocationMode::kDistributed, recipients);
  if (profile.scores.size() != doc.size()) {
    throw ConfigError("profile has " + std::to_string(profile.scores.size()) +
                      " scores for a document of " +
                      std::to_string(doc.size()) + " tokens");
  }
  if (alloc.no_recipients) return alloc;
  double total_weight = 0.0;
  for (std::size_t i : recipients) {
    const double s = profile.scores[i];
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ConfigError("sensitivity score of token " + std::to_string(i) +
                        " must be positive");
    }
    total_weight += 1.0 / s;
  }
  for (std::size_t i : recipients) {
    alloc.per_token[i] = epsilon * (1.0 / profile.scores[i]) / total_weight;
  }
  CloseResidual(alloc);
  return alloc;
}

std::vector<double> RollupSentences(const BudgetAllocation& alloc,
                                    const Document& doc) {
  std::vector<double> out(doc.sentences.size(), 0.0);
  const std::vector<std::size_t> sentence_of = doc.SentenceOfTokens();
  for (const auto& [i, e] : alloc.per_token) {
    if (i < sentence_of.size()) out[sentence_of[i]] += e;
  }
  return out;
}

double ScaleBudget(double per_word_epsilon, double avg_tokens) {
  if (!(per_word_epsilon > 0.0) || !(avg_tokens > 0.0)) {
    throw ConfigError("budget scaling needs positive inputs");
  }
  return per_word_epsilon * avg_tokens;
}

double RoundHalfUp(double value, int decimals) {
  // Snap to 1e-9 in integer arithmetic first; scaling in floating point
  // would reintroduce the error being removed.
  const long long nano = std::llround(std::fabs(value) * 1e9);
  long long unit = 1;
  for (int d = decimals; d < 9; ++d) unit *= 10;
  const long long units = (nano + unit / 2) / unit;
  const double rounded = static_cast<double>(units) / std::pow(10.0, decimals);
  return value < 0 ? -rounded : rounded;
}

double CompositionLedger::AppliedSum() const {
  double sum = 0.0;
  for (const LedgerSpend& s : spends) {
    if (s.applied) sum += s.epsilon;
  }
  return sum;
}

CompositionLedger OpenLedger(const BudgetAllocation& alloc) {
  CompositionLedger ledger;
  ledger.document_id = alloc.document_id;
  ledger.budget = alloc.total_epsilon;
  ledger.no_recipients = alloc.no_recipients;
  for (const auto& [i, e] : alloc.per_token) ledger.spends.push_back({i, e, false});
  return ledger;
}

CompositionReport VerifyComposition(const CompositionLedger& ledger) {
  CompositionReport report;
  report.residual = ledger.Residual();
  const double applied = ledger.AppliedSum();
  if (ledger.no_recipients && applied == 0.0) {
    report.pass = true;
    return report;
  }
  if (!(ledger.budget > 0.0)) return report;
  report.relative_error = std::fabs(applied - ledger.budget) / ledger.budget;
  report.pass = report.relative_error <= kCompositionTolerance;
  return report;
}

}  // namespace tokenbudget
