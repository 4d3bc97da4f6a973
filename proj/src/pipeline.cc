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

#include "tokenbudget/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <thread>

#include "tokenbudget/error.h"

namespace tokenbudget {

namespace {

using nlohmann::ordered_json;

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index owns its
// output slot, so results do not depend on scheduling. The exception of the
// lowest failing index is rethrown.
template <typename Fn>
void ParallelFor(std::size_t n, std::size_t threads, Fn fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < std::min(threads, n); ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::size_t> IdOrder(const std::vector<CorpusRecord>& corpus) {
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus[a].id < corpus[b].id;
  });
  return order;
}

std::vector<CorpusRecord> SortedById(const std::vector<CorpusRecord>& corpus) {
  std::vector<CorpusRecord> out;
  for (std::size_t i : IdOrder(corpus)) out.push_back(corpus[i]);
  return out;
}

ordered_json MethodList(const MethodSet& methods) {
  ordered_json out = ordered_json::array();
  for (ScoringMethod m : methods) out.push_back(std::string(MethodName(m)));
  return out;
}

ordered_json ConfigToJson(const RunConfig& config, double avg_tokens,
                          double budget) {
  ordered_json j;
  j["distribution"] = std::string(DistributionName(config.distribution));
  j["epsilon"] = config.epsilon;
  j["scale_by_avg_tokens"] = config.scale_by_avg_tokens;
  j["avg_budgeted_tokens"] = avg_tokens;
  j["document_budget"] = budget;
  j["disabled_scorers"] = MethodList(config.disabled_scorers);
  j["sd_sign"] = config.sd_sign == SdSign::kProse ? "prose" : "verbatim";
  j["k_lists"] = config.k_lists;
  j["score_floor"] = config.score_floor;
  j["seed"] = config.seed;
  return j;
}

DocumentReport MakeDocumentReport(const Document& doc,
                                  const BudgetAllocation& alloc,
                                  const PrivatizedDocument& priv) {
  DocumentReport d;
  d.id = doc.id;
  d.mode = std::string(ModeName(alloc.mode));
  d.budget = alloc.total_epsilon;
  d.spent = priv.ledger.AppliedSum();
  d.residual = priv.ledger.Residual();
  d.composition_pass = VerifyComposition(priv.ledger).pass;
  d.no_recipients = alloc.no_recipients;
  d.sentence_budgets = RollupSentences(alloc, doc);
  std::map<std::size_t, bool> applied;
  for (const LedgerSpend& s : priv.ledger.spends) {
    applied[s.token_index] = s.applied;
  }
  for (const Token& t : doc.tokens) {
    TokenReport tr;
    tr.index = t.index;
    tr.surface = t.surface;
    auto rep = priv.replacements.find(t.index);
    tr.output = rep == priv.replacements.end() ? t.surface : rep->second;
    if (auto e = alloc.per_token.find(t.index); e != alloc.per_token.end()) {
      tr.epsilon = e->second;
      tr.applied = applied[t.index];
    }
    tr.flag = std::string(FlagName(priv.flags[t.index]));
    d.tokens.push_back(std::move(tr));
  }
  return d;
}

ordered_json MetricsToJson(const RewriteResult& rewrite,
                           const EvalReport& eval) {
  double spent = 0.0;
  for (const auto& p : rewrite.privatized) spent += p.ledger.AppliedSum();
  ordered_json j;
  j["document_budget"] = rewrite.document_budget;
  j["total_spent"] = spent;
  j["avg_cosine_similarity"] = eval.avg_cosine_similarity;
  j["avg_bleu"] = eval.avg_bleu;
  j["nn_average_k"] = eval.nn.average_k;
  j["perturbed_fraction"] = eval.perturbation.perturbed_fraction;
  return j;
}

EvalReport EvaluateRewrite(const std::vector<CorpusRecord>& corpus,
                           const RewriteResult& rewrite,
                           const Embedder& embedder) {
  EvalReport eval = Evaluate(ToTextRecords(corpus),
                             ToTextRecords(rewrite.output), embedder);
  eval.perturbation = ComputePerturbationStats(rewrite.privatized);
  return eval;
}

}  // namespace

std::string_view DistributionName(Distribution d) {
  return d == Distribution::kNaive ? "naive" : "toolkit";
}

Distribution ParseDistribution(std::string_view name) {
  if (name == "naive") return Distribution::kNaive;
  if (name == "toolkit") return Distribution::kToolkit;
  throw ConfigError("distribution must be 'naive' or 'toolkit', got '" +
                    std::string(name) + "'");
}

SdSign ParseSdSign(std::string_view name) {
  if (name == "prose") return SdSign::kProse;
  if (name == "verbatim") return SdSign::kVerbatim;
  throw ConfigError("sd-sign must be 'prose' or 'verbatim', got '" +
                    std::string(name) + "'");
}

void RunConfig::Validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be positive");
  }
  if (AllMethodsExcept(disabled_scorers).empty()) {
    throw ConfigError("at least one scorer must stay enabled");
  }
  if (k_lists == 0) throw ConfigError("k-lists must be at least 1");
  if (threads == 0) throw ConfigError("threads must be at least 1");
  if (!(score_floor > 0.0 && score_floor <= 1.0)) {
    throw ConfigError("score floor must lie in (0, 1]");
  }
}

ScoringOptions RunConfig::scoring() const {
  ScoringOptions o;
  o.enabled = AllMethodsExcept(disabled_scorers);
  o.sd_sign = sd_sign;
  o.score_floor = score_floor;
  return o;
}

Assets Assets::Load(const AssetPaths& paths) {
  if (paths.embeddings.empty()) {
    throw ConfigError("an embeddings file is required");
  }
  Assets assets{LoadEmbeddings(paths.embeddings), {}, {}, {}, {}, {}};
  if (!paths.ic_table.empty()) {
    assets.ic_table = LoadIcTable(paths.ic_table, &assets.warnings);
  }
  if (!paths.gazetteer.empty()) {
    assets.gazetteer = LoadGazetteer(paths.gazetteer);
  }
  if (!paths.stopwords.empty()) {
    assets.stopwords = LoadStopwords(paths.stopwords);
  }
  if (!paths.pos_lexicon.empty()) {
    assets.pos_lexicon = LoadPosLexicon(paths.pos_lexicon);
  }
  return assets;
}

ScorerAssets Assets::scorer_assets() const {
  return {ic_table ? &*ic_table : nullptr, gazetteer ? &*gazetteer : nullptr,
          &embedder};
}

Document PrepareDocument(const CorpusRecord& record, const Assets& assets) {
  return TagPos(Tokenize(record.text, assets.stopwords, record.id),
                assets.pos_lexicon);
}

std::vector<std::size_t> PerturbableRecipients(const Document& doc,
                                               const Embedder& embedder) {
  std::vector<std::size_t> out;
  for (std::size_t i : DefaultRecipients(doc)) {
    if (embedder.Contains(doc.tokens[i].surface)) out.push_back(i);
  }
  return out;
}

double AverageBudgetedTokens(const std::vector<Document>& docs) {
  if (docs.empty()) return 0.0;
  double total = 0.0;
  for (const Document& d : docs) {
    total += static_cast<double>(DefaultRecipients(d).size());
  }
  return total / static_cast<double>(docs.size());
}

double DocumentBudget(const RunConfig& config,
                      const std::vector<Document>& docs) {
  if (!config.scale_by_avg_tokens) return config.epsilon;
  const double avg = AverageBudgetedTokens(docs);
  if (!(avg > 0.0)) {
    throw DataError("cannot scale the budget: corpus has no budgeted tokens");
  }
  return ScaleBudget(config.epsilon, avg);
}

std::vector<ScoreRecord> ScoreCorpus(const std::vector<CorpusRecord>& corpus,
                                     const Assets& assets,
                                     const RunConfig& config) {
  config.Validate();
  const std::vector<CorpusRecord> sorted = SortedById(corpus);
  const ScoringOptions options = config.scoring();
  std::vector<ScoreRecord> out(sorted.size());
  ParallelFor(sorted.size(), config.threads, [&](std::size_t i) {
    out[i].doc = PrepareDocument(sorted[i], assets);
    out[i].scored = ScoreDocument(out[i].doc, assets.scorer_assets(), options);
    out[i].recipients = PerturbableRecipients(out[i].doc, assets.embedder);
  });
  return out;
}

RewriteResult RewriteCorpus(const std::vector<CorpusRecord>& corpus,
                            const Assets& assets, const RunConfig& config) {
  config.Validate();
  RewriteResult result;
  const std::vector<CorpusRecord> sorted = SortedById(corpus);
  const std::size_t n = sorted.size();
  result.documents.resize(n);
  ParallelFor(n, config.threads, [&](std::size_t i) {
    result.documents[i] = PrepareDocument(sorted[i], assets);
  });
  const double avg_tokens = AverageBudgetedTokens(result.documents);
  result.document_budget = DocumentBudget(config, result.documents);
  const ProjectionLists lists =
      ProjectionLists::Build(assets.embedder, config.k_lists, config.seed);
  const ScoringOptions options = config.scoring();

  result.allocations.resize(n);
  result.privatized.resize(n);
  ParallelFor(n, config.threads, [&](std::size_t i) {
    const Document& doc = result.documents[i];
    const auto recipients = PerturbableRecipients(doc, assets.embedder);
    if (config.distribution == Distribution::kNaive) {
      result.allocations[i] =
          AllocateUniform(doc, result.document_budget, recipients);
    } else {
      const ScoredDocument scored =
          ScoreDocument(doc, assets.scorer_assets(), options);
      result.allocations[i] = AllocateWeighted(
          scored.profile, doc, result.document_budget, recipients);
    }
    result.privatized[i] =
        RewriteDocument(doc, result.allocations[i], lists, config.seed);
  });

  result.report.header["command"] = "rewrite";
  result.report.header["config"] =
      ConfigToJson(config, avg_tokens, result.document_budget);
  for (std::size_t i = 0; i < n; ++i) {
    const CompositionReport check =
        VerifyComposition(result.privatized[i].ledger);
    if (!check.pass) {
      throw CompositionError(
          sorted[i].id, "relative error " +
                            std::to_string(check.relative_error) +
                            ", residual " + std::to_string(check.residual));
    }
    CorpusRecord rec = sorted[i];
    rec.text = result.privatized[i].text;
    result.output.push_back(std::move(rec));
    result.report.documents.push_back(MakeDocumentReport(
        result.documents[i], result.allocations[i], result.privatized[i]));
  }
  result.report.header["documents"] = n;
  return result;
}

nlohmann::ordered_json AllocateCorpus(const std::vector<CorpusRecord>& corpus,
                                      const Assets& assets,
                                      const RunConfig& config) {
  const std::vector<ScoreRecord> scored = ScoreCorpus(corpus, assets, config);
  std::vector<Document> docs;
  for (const auto& s : scored) docs.push_back(s.doc);
  const double budget = DocumentBudget(config, docs);
  ordered_json out = ordered_json::array();
  for (const ScoreRecord& s : scored) {
    const BudgetAllocation alloc =
        config.distribution == Distribution::kNaive
            ? AllocateUniform(s.doc, budget, s.recipients)
            : AllocateWeighted(s.scored.profile, s.doc, budget, s.recipients);
    ordered_json tokens = ordered_json::array();
    for (const auto& [i, e] : alloc.per_token) {
      tokens.push_back({{"index", i},
                        {"surface", s.doc.tokens[i].surface},
                        {"score", s.scored.profile.scores[i]},
                        {"epsilon", e}});
    }
    ordered_json j;
    j["id"] = s.doc.id;
    j["mode"] = std::string(ModeName(alloc.mode));
    j["budget"] = alloc.total_epsilon;
    j["sum"] = alloc.Sum();
    j["no_recipients"] = alloc.no_recipients;
    j["sentence_budgets"] = RollupSentences(alloc, s.doc);
    j["tokens"] = std::move(tokens);
    out.push_back(std::move(j));
  }
  return out;
}

nlohmann::ordered_json ScoreRecordToJson(const ScoreRecord& record) {
  const Document& doc = record.doc;
  ordered_json tokens = ordered_json::array();
  for (const Token& t : doc.tokens) {
    ordered_json scores = ordered_json::object();
    for (const ScoreVector& v : record.scored.vectors) {
      scores[std::string(MethodName(v.method))] = v.normalized[t.index];
    }
    tokens.push_back({{"index", t.index},
                      {"surface", t.surface},
                      {"pos", std::string(PosTagName(t.pos.value_or(
                                  PosTag::kOther)))},
                      {"stopword", t.is_stopword},
                      {"punct", t.is_punct},
                      {"scores", std::move(scores)}});
  }
  ordered_json profile = ordered_json::array();
  for (std::size_t i : record.recipients) {
    profile.push_back({{"index", i},
                       {"surface", doc.tokens[i].surface},
                       {"aggregate", record.scored.profile.scores[i]}});
  }
  ordered_json degenerate = ordered_json::array();
  for (const ScoreVector& v : record.scored.vectors) {
    if (v.degenerate) degenerate.push_back(std::string(MethodName(v.method)));
  }
  ordered_json j;
  j["id"] = doc.id;
  j["enabled"] = MethodList(record.scored.profile.enabled);
  j["no_recipients"] = record.recipients.empty();
  j["degenerate"] = std::move(degenerate);
  j["tokens"] = std::move(tokens);
  j["profile"] = std::move(profile);
  return j;
}

std::vector<PrivatizedDocument> PrivatizedFromReport(const RunReport& report) {
  std::vector<PrivatizedDocument> out;
  for (const DocumentReport& d : report.documents) {
    PrivatizedDocument p;
    p.document_id = d.id;
    p.ledger.document_id = d.id;
    p.ledger.budget = d.budget;
    p.ledger.no_recipients = d.no_recipients;
    for (const TokenReport& t : d.tokens) {
      p.flags.push_back(ParseFlag(t.flag));
      if (t.epsilon > 0.0) {
        p.ledger.spends.push_back({t.index, t.epsilon, t.applied});
      }
      if (t.output != t.surface) p.replacements[t.index] = t.output;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<TextRecord> ToTextRecords(const std::vector<CorpusRecord>& corpus) {
  std::vector<TextRecord> out;
  out.reserve(corpus.size());
  for (const auto& r : corpus) out.push_back({r.id, r.text});
  return out;
}

nlohmann::ordered_json EvalReportToJson(const EvalReport& report) {
  ordered_json ranks = ordered_json::object();
  for (const auto& [id, k] : report.nn.rank) ranks[id] = k;
  ordered_json histogram = ordered_json::object();
  for (const auto& [bin, count] : report.perturbation.epsilon_histogram) {
    histogram["1e" + std::to_string(bin)] = count;
  }
  ordered_json flags = ordered_json::object();
  for (const auto& [flag, count] : report.perturbation.flag_counts) {
    flags[flag] = count;
  }
  ordered_json j;
  j["avg_cosine_similarity"] = report.avg_cosine_similarity;
  j["degenerate_similarities"] = report.degenerate_similarities;
  j["avg_bleu"] = report.avg_bleu;
  j["nn"] = {{"average_k", report.nn.average_k}, {"ranks", std::move(ranks)}};
  j["perturbation"] = {
      {"budgeted_tokens", report.perturbation.budgeted_tokens},
      {"perturbed_tokens", report.perturbation.perturbed_tokens},
      {"perturbed_fraction", report.perturbation.perturbed_fraction},
      {"epsilon_histogram", std::move(histogram)},
      {"flag_counts", std::move(flags)}};
  return j;
}

F1Sidecar F1Sidecar::FromJson(const nlohmann::json& j) {
  auto pair = [](const nlohmann::json& p) {
    return Pair{p.at("utility").get<double>(), p.at("privacy").get<double>()};
  };
  F1Sidecar s;
  try {
    s.utility_baseline = j.at("utility_baseline").get<double>();
    s.privacy_baseline = j.at("privacy_baseline").get<double>();
    s.utility_majority = j.at("utility_majority").get<double>();
    s.privacy_majority = j.at("privacy_majority").get<double>();
    if (j.contains("naive")) s.naive = pair(j["naive"]);
    if (j.contains("toolkit")) s.toolkit = pair(j["toolkit"]);
    if (j.contains("ablation")) {
      for (const auto& [name, p] : j["ablation"].items()) {
        s.ablation[std::string(MethodName(ParseMethod(name)))] = pair(p);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad F1 sidecar: ") + e.what());
  }
  return s;
}

F1Sidecar F1Sidecar::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

RelativeGainInputs F1Sidecar::Inputs(const Pair& p) const {
  return {utility_baseline, p.utility,        privacy_baseline,
          p.privacy,        utility_majority, privacy_majority};
}

nlohmann::ordered_json CompareCorpus(const std::vector<CorpusRecord>& corpus,
                                     const Assets& assets,
                                     const RunConfig& config,
                                     const CompareOptions& options) {
  config.Validate();
  if (corpus.empty()) throw DataError("cannot compare on an empty corpus");
  RunConfig naive_config = config;
  naive_config.distribution = Distribution::kNaive;
  RunConfig toolkit_config = config;
  toolkit_config.distribution = Distribution::kToolkit;

  const RewriteResult naive = RewriteCorpus(corpus, assets, naive_config);
  const RewriteResult toolkit = RewriteCorpus(corpus, assets, toolkit_config);

  bool equal_budgets = naive.document_budget == toolkit.document_budget;
  for (std::size_t i = 0; i < naive.privatized.size(); ++i) {
    equal_budgets = equal_budgets && naive.privatized[i].ledger.budget ==
                                         toolkit.privatized[i].ledger.budget;
  }

  ordered_json j;
  j["command"] = "compare";
  j["config"] = ConfigToJson(config, AverageBudgetedTokens(naive.documents),
                             naive.document_budget);
  j["equal_budgets"] = equal_budgets;
  j["naive"] = MetricsToJson(
      naive, EvaluateRewrite(corpus, naive, assets.embedder));
  j["toolkit"] = MetricsToJson(
      toolkit, EvaluateRewrite(corpus, toolkit, assets.embedder));

  if (options.f1) {
    const F1Sidecar& f1 = *options.f1;
    ordered_json gamma = ordered_json::object();
    if (f1.naive) gamma["naive"] = RelativeGain(f1.Inputs(*f1.naive));
    if (f1.toolkit) gamma["toolkit"] = RelativeGain(f1.Inputs(*f1.toolkit));
    j["relative_gain"] = std::move(gamma);
  }

  if (options.ablation) {
    ordered_json columns = ordered_json::object();
    for (ScoringMethod m : toolkit_config.scoring().enabled) {
      RunConfig ablated = toolkit_config;
      ablated.disabled_scorers.insert(m);
      if (AllMethodsExcept(ablated.disabled_scorers).empty()) continue;
      const RewriteResult run = RewriteCorpus(corpus, assets, ablated);
      ordered_json column =
          MetricsToJson(run, EvaluateRewrite(corpus, run, assets.embedder));
      const std::string name(MethodName(m));
      if (options.f1) {
        if (auto it = options.f1->ablation.find(name);
            it != options.f1->ablation.end()) {
          column["relative_gain"] = RelativeGain(options.f1->Inputs(it->second));
        }
      }
      columns["without_" + name] = std::move(column);
    }
    j["ablation"] = std::move(columns);
  }
  return j;
}

}  // namespace tokenbudget
