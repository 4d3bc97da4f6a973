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

// tokenbudget: score, allocate, rewrite, evaluate and compare JSONL corpora.
//
// Exit codes: 0 success, 2 configuration error, 3 data error,
// 4 composition failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tokenbudget/assets_io.h"
#include "tokenbudget/error.h"
#include "tokenbudget/evaluation.h"
#include "tokenbudget/pipeline.h"

namespace tb = tokenbudget;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitComposition = 4;

struct Flags {
  std::string input;
  std::string output;
  std::string privatized;
  std::string rewrite_report;
  std::string report;
  std::string f1_sidecar;
  tb::AssetPaths assets;
  double epsilon = 0.1;
  bool scale_by_avg_tokens = false;
  std::string distribution = "toolkit";
  std::vector<std::string> disabled;
  std::string sd_sign = "prose";
  std::size_t k_lists = tb::kDefaultListCount;
  double score_floor = tb::kDefaultScoreFloor;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool ablation = false;
};

void AddAssetFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--embeddings", f.assets.embeddings, "Embedding file")
      ->required();
  cmd->add_option("--ic-table", f.assets.ic_table, "IC table (TSV)");
  cmd->add_option("--gazetteer", f.assets.gazetteer, "Gazetteer");
  cmd->add_option("--stopwords", f.assets.stopwords, "Stopword list");
  cmd->add_option("--pos-lexicon", f.assets.pos_lexicon, "POS lexicon (TSV)");
}

void AddRunFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--input", f.input, "Input corpus (JSONL)")->required();
  cmd->add_option("--output", f.output, "Output path (default: stdout)");
  cmd->add_option("--epsilon", f.epsilon,
                  "Document budget, or per-word budget when scaling");
  cmd->add_flag("--scale-by-avg-tokens", f.scale_by_avg_tokens,
                "Multiply epsilon by the corpus mean budgeted-token count");
  cmd->add_option("--distribution", f.distribution, "naive|toolkit")
      ->check(CLI::IsMember({"naive", "toolkit"}));
  cmd->add_option("--disable-scorer", f.disabled,
                  "Disable a scorer (IC, POS, NER, WI, SD); repeatable");
  cmd->add_option("--sd-sign", f.sd_sign, "prose|verbatim")
      ->check(CLI::IsMember({"prose", "verbatim"}));
  cmd->add_option("--k-lists", f.k_lists, "Number of projection lists");
  cmd->add_option("--score-floor", f.score_floor,
                  "Lower clamp for aggregate scores");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--threads", f.threads, "Worker threads");
  AddAssetFlags(cmd, f);
}

tb::RunConfig ToConfig(const Flags& f) {
  tb::RunConfig c;
  c.epsilon = f.epsilon;
  c.scale_by_avg_tokens = f.scale_by_avg_tokens;
  c.distribution = tb::ParseDistribution(f.distribution);
  for (const std::string& name : f.disabled) {
    c.disabled_scorers.insert(tb::ParseMethod(name));
  }
  c.sd_sign = tb::ParseSdSign(f.sd_sign);
  c.k_lists = f.k_lists;
  c.score_floor = f.score_floor;
  c.seed = f.seed;
  c.threads = f.threads;
  c.Validate();
  return c;
}

tb::Assets LoadAssets(const Flags& f) {
  tb::Assets assets = tb::Assets::Load(f.assets);
  for (const std::string& w : assets.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return assets;
}

void Emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    tb::WriteTextFile(path, contents);
  }
}

std::string JsonLines(const nlohmann::ordered_json& array) {
  std::string out;
  for (const auto& item : array) out += item.dump() + "\n";
  return out;
}

int RunScore(const Flags& f) {
  const tb::RunConfig config = ToConfig(f);
  const tb::Assets assets = LoadAssets(f);
  std::string out;
  for (const auto& rec : tb::ScoreCorpus(tb::ReadCorpus(f.input), assets,
                                         config)) {
    out += tb::ScoreRecordToJson(rec).dump() + "\n";
  }
  Emit(f.output, out);
  return 0;
}

int RunAllocate(const Flags& f) {
  const tb::RunConfig config = ToConfig(f);
  const tb::Assets assets = LoadAssets(f);
  Emit(f.output,
       JsonLines(tb::AllocateCorpus(tb::ReadCorpus(f.input), assets, config)));
  return 0;
}

int RunRewrite(const Flags& f) {
  const tb::RunConfig config = ToConfig(f);
  const tb::Assets assets = LoadAssets(f);
  const tb::RewriteResult result =
      tb::RewriteCorpus(tb::ReadCorpus(f.input), assets, config);
  Emit(f.output, tb::FormatCorpus(result.output));
  if (!f.report.empty()) tb::WriteRunReport(f.report, result.report);
  return 0;
}

int RunEvaluate(const Flags& f) {
  const tb::Assets assets = LoadAssets(f);
  const auto originals = tb::ReadCorpus(f.input);
  const auto privatized = tb::ReadCorpus(f.privatized);
  tb::EvalReport report =
      tb::Evaluate(tb::ToTextRecords(originals), tb::ToTextRecords(privatized),
                   assets.embedder);
  if (!f.rewrite_report.empty()) {
    report.perturbation = tb::ComputePerturbationStats(
        tb::PrivatizedFromReport(tb::ReadRunReport(f.rewrite_report)));
  }
  Emit(f.output, tb::EvalReportToJson(report).dump(2) + "\n");
  return 0;
}

int RunCompare(const Flags& f) {
  const tb::RunConfig config = ToConfig(f);
  const tb::Assets assets = LoadAssets(f);
  tb::CompareOptions options;
  options.ablation = f.ablation;
  if (!f.f1_sidecar.empty()) options.f1 = tb::F1Sidecar::Load(f.f1_sidecar);
  Emit(f.output, tb::CompareCorpus(tb::ReadCorpus(f.input), assets, config,
                                   options)
                         .dump(2) +
                     "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distribute a privacy budget across tokens and rewrite text"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* score = app.add_subcommand("score", "Per-token sensitivity scores");
  AddRunFlags(score, f);
  CLI::App* allocate =
      app.add_subcommand("allocate", "Per-token budgets without rewriting");
  AddRunFlags(allocate, f);
  CLI::App* rewrite = app.add_subcommand("rewrite", "Privatize a corpus");
  AddRunFlags(rewrite, f);
  rewrite->add_option("--report", f.report, "Write the run report (JSONL)");

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Compare original and privatized corpora");
  evaluate->add_option("--input", f.input, "Original corpus")->required();
  evaluate->add_option("--privatized", f.privatized, "Privatized corpus")
      ->required();
  evaluate->add_option("--rewrite-report", f.rewrite_report,
                       "Run report for perturbation statistics");
  evaluate->add_option("--output", f.output, "Output path (default: stdout)");
  AddAssetFlags(evaluate, f);

  CLI::App* compare =
      app.add_subcommand("compare", "Naive vs toolkit at equal budget");
  AddRunFlags(compare, f);
  compare->add_option("--f1-sidecar", f.f1_sidecar,
                      "Externally measured F1 scores (JSON)");
  compare->add_flag("--ablation", f.ablation,
                    "Add one column per disabled scorer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*score) return RunScore(f);
    if (*allocate) return RunAllocate(f);
    if (*rewrite) return RunRewrite(f);
    if (*evaluate) return RunEvaluate(f);
    if (*compare) return RunCompare(f);
  } catch (const tb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const tb::CompositionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComposition;
  } catch (const tb::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitConfig;
}
