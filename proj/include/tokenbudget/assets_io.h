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

// Loaders for flat-file assets, corpora and run reports. All formats are
// UTF-8 text; every parse failure is a ParseError naming file and line.
//
//   embeddings    optional "<count> <dim>" header, then "word v1 ... vd"
//   IC table      lemma<TAB>pos(n|v)<TAB>corpus<TAB>ic, ic >= 1
//   gazetteer     one phrase per line
//   stopwords     one word per line, '#' starts a comment
//   POS lexicon   word<TAB>tag, tag in {NN, PR, VB, CD, JJ, RB, OTHER}
//   corpus        one JSON object per line: id, text, optional label/group
//   run report    one JSON object per line: a "run" header, then one
//                 "document" record per document

#ifndef TOKENBUDGET_ASSETS_IO_H_
#define TOKENBUDGET_ASSETS_IO_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tokenbudget/embedder.h"
#include "tokenbudget/scorers.h"
#include "tokenbudget/text_model.h"

namespace tokenbudget {

using Warnings = std::vector<std::string>;

Embedder ParseEmbeddings(std::istream& in, const std::string& source);
Embedder LoadEmbeddings(const std::filesystem::path& path);

// Rows naming a corpus outside IcTable::kCorpora are kept and reported in
// `warnings`.
IcTable ParseIcTable(std::istream& in, const std::string& source,
                     Warnings* warnings = nullptr);
IcTable LoadIcTable(const std::filesystem::path& path,
                    Warnings* warnings = nullptr);

Gazetteer LoadGazetteer(const std::filesystem::path& path);
StopwordSet LoadStopwords(const std::filesystem::path& path);
PosLexicon LoadPosLexicon(const std::filesystem::path& path);

struct CorpusRecord {
  std::string id;
  std::string text;
  std::optional<std::string> label;
  std::optional<std::string> group;

  bool operator==(const CorpusRecord&) const = default;
};

std::vector<CorpusRecord> ParseCorpus(std::istream& in,
                                      const std::string& source);
std::vector<CorpusRecord> ReadCorpus(const std::filesystem::path& path);
void WriteCorpus(const std::filesystem::path& path,
                 const std::vector<CorpusRecord>& records);
std::string FormatCorpus(const std::vector<CorpusRecord>& records);

struct TokenReport {
  std::size_t index = 0;
  std::string surface;
  std::string output;
  double epsilon = 0.0;  // 0 for tokens without a budget
  bool applied = false;
  std::string flag;

  bool operator==(const TokenReport&) const = default;
};

struct DocumentReport {
  std::string id;
  std::string mode;
  double budget = 0.0;
  double spent = 0.0;
  double residual = 0.0;
  bool composition_pass = false;
  bool no_recipients = false;
  std::vector<double> sentence_budgets;
  std::vector<TokenReport> tokens;

  bool operator==(const DocumentReport&) const = default;
};

struct RunReport {
  // Command, configuration and corpus-level summary.
  nlohmann::ordered_json header = nlohmann::ordered_json::object();
  std::vector<DocumentReport> documents;

  bool operator==(const RunReport&) const = default;
};

std::string FormatRunReport(const RunReport& report);
RunReport ParseRunReport(std::istream& in, const std::string& source);
void WriteRunReport(const std::filesystem::path& path, const RunReport& report);
RunReport ReadRunReport(const std::filesystem::path& path);

// Writes `contents` to `path`, throwing DataError on failure.
void WriteTextFile(const std::filesystem::path& path,
                   const std::string& contents);

}  // namespace tokenbudget

#endif  // TOKENBUDGET_ASSETS_IO_H_
