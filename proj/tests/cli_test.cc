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

// Runs the tokenbudget binary end to end on the bundled toy assets.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "gtest/gtest.h"
#include "json.hpp"
#include "test_support.h"

namespace tokenbudget {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tokenbudget_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string Assets() {
    const auto p = testing::ToyAssetPaths();
    return " --embeddings " + p.embeddings.string() + " --ic-table " +
           p.ic_table.string() + " --gazetteer " + p.gazetteer.string() +
           " --stopwords " + p.stopwords.string() + " --pos-lexicon " +
           p.pos_lexicon.string();
  }

  int Run(const std::string& args) {
    const std::string cmd = std::string(TOKENBUDGET_CLI) + " " + args +
                            " 2>" + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string Input() const {
    return " --input " + testing::ToyCorpusPath().string();
  }

  fs::path dir_;
};

TEST_F(CliTest, RewriteTwiceIsByteIdentical) {
  for (const char* name : {"a", "b"}) {
    const fs::path out = dir_ / (std::string(name) + ".jsonl");
    const fs::path rep = dir_ / (std::string(name) + ".report.jsonl");
    ASSERT_EQ(Run("rewrite" + Input() + Assets() +
                  " --epsilon 0.5 --scale-by-avg-tokens --seed 4 --output " +
                  out.string() + " --report " + rep.string()),
              0);
  }
  EXPECT_EQ(Slurp(dir_ / "a.jsonl"), Slurp(dir_ / "b.jsonl"));
  EXPECT_EQ(Slurp(dir_ / "a.report.jsonl"), Slurp(dir_ / "b.report.jsonl"));
  EXPECT_FALSE(Slurp(dir_ / "a.jsonl").empty());
}

TEST_F(CliTest, EvaluateIdentityCorpus) {
  const fs::path out = dir_ / "eval.json";
  ASSERT_EQ(Run("evaluate" + Input() + " --privatized " +
                testing::ToyCorpusPath().string() + Assets() + " --output " +
                out.string()),
            0);
  const auto j = nlohmann::json::parse(Slurp(out));
  EXPECT_EQ(j["avg_cosine_similarity"].get<double>(), 1.0);
  EXPECT_EQ(j["avg_bleu"].get<double>(), 1.0);
  EXPECT_EQ(j["nn"]["average_k"].get<double>(), 1.0);
}

TEST_F(CliTest, EvaluateWithRewriteReport) {
  const fs::path priv = dir_ / "p.jsonl", rep = dir_ / "r.jsonl",
                 out = dir_ / "e.json";
  ASSERT_EQ(Run("rewrite" + Input() + Assets() + " --epsilon 2 --output " +
                priv.string() + " --report " + rep.string()),
            0);
  ASSERT_EQ(Run("evaluate" + Input() + " --privatized " + priv.string() +
                " --rewrite-report " + rep.string() + Assets() +
                " --output " + out.string()),
            0);
  const auto j = nlohmann::json::parse(Slurp(out));
  EXPECT_GT(j["perturbation"]["budgeted_tokens"].get<int>(), 0);
}

TEST_F(CliTest, CompareWithSidecar) {
  const fs::path out = dir_ / "cmp.json";
  ASSERT_EQ(Run("compare" + Input() + Assets() +
                " --epsilon 0.1 --scale-by-avg-tokens --ablation"
                " --f1-sidecar " +
                (testing::DataDir() / "f1_sidecar_yelp.json").string() +
                " --output " + out.string()),
            0);
  const auto j = nlohmann::json::parse(Slurp(out));
  EXPECT_TRUE(j["equal_budgets"].get<bool>());
  EXPECT_NEAR(j["relative_gain"]["naive"].get<double>(), 1.81, 0.005);
  EXPECT_TRUE(j["ablation"].contains("without_SD"));
}

TEST_F(CliTest, ScoreAndAllocateEmitOneLinePerDocument) {
  for (const char* cmd : {"score", "allocate"}) {
    const fs::path out = dir_ / (std::string(cmd) + ".jsonl");
    ASSERT_EQ(Run(std::string(cmd) + Input() + Assets() +
                  " --disable-scorer SD --output " + out.string()),
              0);
    std::istringstream lines(Slurp(out));
    int n = 0;
    for (std::string line; std::getline(lines, line);) {
      EXPECT_TRUE(nlohmann::json::accept(line));
      ++n;
    }
    EXPECT_EQ(n, 30) << cmd;
  }
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Run("rewrite" + Input() + Assets() + " --epsilon -1"), 2);
  EXPECT_EQ(Run("rewrite" + Input() + Assets() + " --disable-scorer XYZ"), 2);
  EXPECT_EQ(Run("rewrite" + Input() + Assets() + " --distribution equal"), 2);
  EXPECT_EQ(Run("rewrite" + Input()), 2);  // missing --embeddings
  EXPECT_EQ(Run("rewrite --input /nonexistent.jsonl" + Assets()), 3);
  const fs::path bad = dir_ / "bad.jsonl";
  std::ofstream(bad) << "{\"id\":\"a\",\"text\":\"x\"}\n{oops\n";
  EXPECT_EQ(Run("rewrite --input " + bad.string() + Assets()), 3);
  EXPECT_NE(Slurp(dir_ / "stderr.txt").find(":2:"), std::string::npos);
}

}  // namespace
}  // namespace tokenbudget
