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

#include "tokenbudget/assets_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tokenbudget/error.h"

namespace tokenbudget {

namespace {

using nlohmann::ordered_json;

std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

// getline that also drops a trailing '\r'.
bool ReadLine(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::vector<std::string_view> SplitFields(std::string_view line,
                                          std::string_view delims) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t start = line.find_first_not_of(delims, pos);
    if (start == std::string_view::npos) break;
    std::size_t end = line.find_first_of(delims, start);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(start, end - start));
    pos = end;
  }
  return out;
}

std::string_view Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

std::optional<double> ParseDouble(std::string_view s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<std::size_t> ParseCount(std::string_view s) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string OptionalString(const ordered_json& obj, const char* key,
                           const std::string& source, std::size_t line) {
  const auto& v = obj.at(key);
  if (!v.is_string()) {
    throw ParseError(source, line, std::string("field '") + key +
                                       "' must be a string");
  }
  return v.get<std::string>();
}

ordered_json RecordToJson(const CorpusRecord& r) {
  ordered_json obj;
  obj["id"] = r.id;
  obj["text"] = r.text;
  if (r.label) obj["label"] = *r.label;
  if (r.group) obj["group"] = *r.group;
  return obj;
}

ordered_json DocumentToJson(const DocumentReport& d) {
  ordered_json tokens = ordered_json::array();
  for (const TokenReport& t : d.tokens) {
    tokens.push_back({{"index", t.index},
                      {"surface", t.surface},
                      {"output", t.output},
                      {"epsilon", t.epsilon},
                      {"applied", t.applied},
                      {"flag", t.flag}});
  }
  ordered_json obj;
  obj["kind"] = "document";
  obj["id"] = d.id;
  obj["mode"] = d.mode;
  obj["budget"] = d.budget;
  obj["spent"] = d.spent;
  obj["residual"] = d.residual;
  obj["composition_pass"] = d.composition_pass;
  obj["no_recipients"] = d.no_recipients;
  obj["sentence_budgets"] = d.sentence_budgets;
  obj["tokens"] = std::move(tokens);
  return obj;
}

DocumentReport DocumentFromJson(const ordered_json& obj) {
  DocumentReport d;
  d.id = obj.at("id").get<std::string>();
  d.mode = obj.at("mode").get<std::string>();
  d.budget = obj.at("budget").get<double>();
  d.spent = obj.at("spent").get<double>();
  d.residual = obj.at("residual").get<double>();
  d.composition_pass = obj.at("composition_pass").get<bool>();
  d.no_recipients = obj.at("no_recipients").get<bool>();
  d.sentence_budgets = obj.at("sentence_budgets").get<std::vector<double>>();
  for (const auto& t : obj.at("tokens")) {
    d.tokens.push_back({t.at("index").get<std::size_t>(),
                        t.at("surface").get<std::string>(),
                        t.at("output").get<std::string>(),
                        t.at("epsilon").get<double>(),
                        t.at("applied").get<bool>(),
                        t.at("flag").get<std::string>()});
  }
  return d;
}

}  // namespace

void WriteTextFile(const std::filesystem::path& path,
                   const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << contents;
  out.flush();
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

Embedder ParseEmbeddings(std::istream& in, const std::string& source) {
  std::vector<std::string> words;
  std::vector<std::vector<double>> vectors;
  std::unordered_set<std::string> seen;
  std::optional<std::size_t> declared_count;
  std::optional<std::size_t> dim;
  std::string line;
  std::size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    const auto fields = SplitFields(line, " \t");
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2) {
      auto count = ParseCount(fields[0]);
      auto d = ParseCount(fields[1]);
      if (count && d) {
        if (*d == 0) throw ParseError(source, line_no, "dimension must be > 0");
        declared_count = count;
        dim = d;
        continue;
      }
    }
    if (fields.size() < 2) {
      throw ParseError(source, line_no, "expected a word followed by values");
    }
    const std::size_t row_dim = fields.size() - 1;
    if (!dim) dim = row_dim;
    if (row_dim != *dim) {
      throw ParseError(source, line_no,
                       "vector has " + std::to_string(row_dim) +
                           " values, expected " + std::to_string(*dim));
    }
    std::vector<double> vec;
    vec.reserve(row_dim);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto v = ParseDouble(fields[i]);
      if (!v) {
        throw ParseError(source, line_no,
                         "bad number '" + std::string(fields[i]) + "'");
      }
      if (!std::isfinite(*v)) {
        throw ParseError(source, line_no,
                         "non-finite value '" + std::string(fields[i]) + "'");
      }
      vec.push_back(*v);
    }
    std::string word(fields[0]);
    if (!seen.insert(word).second) {
      throw ParseError(source, line_no, "duplicate word '" + word + "'");
    }
    words.push_back(std::move(word));
    vectors.push_back(std::move(vec));
  }
  if (declared_count && *declared_count != words.size()) {
    throw ParseError(source, 1,
                     "header declares " + std::to_string(*declared_count) +
                         " rows but file has " + std::to_string(words.size()));
  }
  if (words.empty()) throw ParseError(source, line_no, "no embedding rows");
  try {
    return Embedder(std::move(words), std::move(vectors));
  } catch (const ConfigError& e) {
    throw ParseError(source, line_no, e.what());
  }
}

Embedder LoadEmbeddings(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  return ParseEmbeddings(in, path.string());
}

IcTable ParseIcTable(std::istream& in, const std::string& source,
                     Warnings* warnings) {
  IcTable table;
  std::string line;
  std::size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    if (Trim(line).empty() || Trim(line).front() == '#') continue;
    const auto fields = SplitFields(line, "\t");
    if (fields.size() != 4) {
      throw ParseError(source, line_no,
                       "expected 4 tab-separated fields, got " +
                           std::to_string(fields.size()));
    }
    if (fields[1] != "n" && fields[1] != "v") {
      throw ParseError(source, line_no,
                       "part of speech must be 'n' or 'v', got '" +
                           std::string(fields[1]) + "'");
    }
    auto ic = ParseDouble(fields[3]);
    if (!ic || !std::isfinite(*ic)) {
      throw ParseError(source, line_no,
                       "bad IC value '" + std::string(fields[3]) + "'");
    }
    if (*ic < 1.0) {
      throw ParseError(source, line_no,
                       "IC value " + std::string(fields[3]) + " is below 1");
    }
    const std::string corpus(fields[2]);
    if (std::find(IcTable::kCorpora.begin(), IcTable::kCorpora.end(), corpus) ==
            IcTable::kCorpora.end() &&
        warnings != nullptr) {
      warnings->push_back(source + ":" + std::to_string(line_no) +
                          ": unknown corpus '" + corpus + "'");
    }
    table.Add(std::string(fields[0]), fields[1][0], corpus, *ic);
  }
  return table;
}

IcTable LoadIcTable(const std::filesystem::path& path, Warnings* warnings) {
  auto in = OpenInput(path);
  return ParseIcTable(in, path.string(), warnings);
}

Gazetteer LoadGazetteer(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  Gazetteer gazetteer;
  std::string line;
  while (ReadLine(in, line)) {
    const auto phrase = Trim(line);
    if (phrase.empty() || phrase.front() == '#') continue;
    gazetteer.Add(phrase);
  }
  return gazetteer;
}

StopwordSet LoadStopwords(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  StopwordSet words;
  std::string line;
  while (ReadLine(in, line)) {
    std::string_view content = line;
    if (auto hash = content.find('#'); hash != std::string_view::npos) {
      content = content.substr(0, hash);
    }
    content = Trim(content);
    if (!content.empty()) words.insert(AsciiLower(content));
  }
  return words;
}

PosLexicon LoadPosLexicon(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  const std::string source = path.string();
  PosLexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    if (Trim(line).empty() || Trim(line).front() == '#') continue;
    const auto fields = SplitFields(line, "\t");
    if (fields.size() != 2) {
      throw ParseError(source, line_no, "expected word<TAB>tag");
    }
    auto tag = ParsePosTag(fields[1]);
    if (!tag) {
      throw ParseError(source, line_no,
                       "unknown tag '" + std::string(fields[1]) + "'");
    }
    lexicon[AsciiLower(fields[0])] = *tag;
  }
  return lexicon;
}

std::vector<CorpusRecord> ParseCorpus(std::istream& in,
                                      const std::string& source) {
  std::vector<CorpusRecord> records;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    ordered_json obj;
    try {
      obj = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) {
      throw ParseError(source, line_no, "record must be a JSON object");
    }
    for (const char* key : {"id", "text"}) {
      if (!obj.contains(key)) {
        throw ParseError(source, line_no,
                         std::string("missing field '") + key + "'");
      }
    }
    CorpusRecord r;
    r.id = OptionalString(obj, "id", source, line_no);
    r.text = OptionalString(obj, "text", source, line_no);
    for (const char* key : {"label", "group"}) {
      if (!obj.contains(key) || obj[key].is_null()) continue;
      std::string value = OptionalString(obj, key, source, line_no);
      (key[0] == 'l' ? r.label : r.group) = std::move(value);
    }
    if (!ids.insert(r.id).second) {
      throw ParseError(source, line_no, "duplicate id '" + r.id + "'");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<CorpusRecord> ReadCorpus(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  return ParseCorpus(in, path.string());
}

std::string FormatCorpus(const std::vector<CorpusRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += RecordToJson(r).dump();
    out += '\n';
  }
  return out;
}

void WriteCorpus(const std::filesystem::path& path,
                 const std::vector<CorpusRecord>& records) {
  WriteTextFile(path, FormatCorpus(records));
}

std::string FormatRunReport(const RunReport& report) {
  ordered_json header = report.header;
  header["kind"] = "run";
  std::string out = header.dump();
  out += '\n';
  for (const auto& d : report.documents) {
    out += DocumentToJson(d).dump();
    out += '\n';
  }
  return out;
}

RunReport ParseRunReport(std::istream& in, const std::string& source) {
  RunReport report;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      ordered_json obj = ordered_json::parse(line);
      const std::string kind = obj.at("kind").get<std::string>();
      if (kind == "run") {
        if (have_header) throw ParseError(source, line_no, "second run header");
        obj.erase("kind");
        report.header = std::move(obj);
        have_header = true;
      } else if (kind == "document") {
        report.documents.push_back(DocumentFromJson(obj));
      } else {
        throw ParseError(source, line_no, "unknown record kind '" + kind + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(source, line_no, "missing run header");
  return report;
}

void WriteRunReport(const std::filesystem::path& path,
                    const RunReport& report) {
  WriteTextFile(path, FormatRunReport(report));
}

RunReport ReadRunReport(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  return ParseRunReport(in, path.string());
}

}  // namespace tokenbudget
