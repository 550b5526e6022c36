// Copyright 2026 the amredit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "amredit/corpus.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "amredit/text.hpp"

using namespace amredit;

TEST_CASE("read_corpus_jsonl") {
  SECTION("well-formed records") {
    std::istringstream in(
        R"json({"id":"r1","text":"hello","label":"greet","amr":"(h / hello-01)"})json"
        "\n"
        R"json({"id":"r2","text":"bye","label":"farewell","tri":["bye"]})json"
        "\n");
    LoadResult result = read_corpus_jsonl(in);
    CHECK(result.errors.empty());
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].id == "r1");
    CHECK(result.records[0].amr == "(h / hello-01)");
    CHECK_FALSE(result.records[0].tri.has_value());
    REQUIRE(result.records[1].tri.has_value());
    CHECK(result.records[1].tri->at(0) == "bye");
  }
  SECTION("missing required field") {
    std::istringstream in(R"json({"id":"r1","text":"hello"})json" "\n");
    LoadResult result = read_corpus_jsonl(in);
    CHECK(result.records.empty());
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].line == 1);
  }
  SECTION("invalid JSON reports the line") {
    std::istringstream in("{\"id\":\"a\",\"text\":\"t\",\"label\":\"l\"}\nnot json\n");
    LoadResult result = read_corpus_jsonl(in);
    CHECK(result.records.size() == 1);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].line == 2);
  }
  SECTION("duplicate ids rejected") {
    std::istringstream in(
        R"json({"id":"r1","text":"a","label":"x"})json" "\n"
        R"json({"id":"r1","text":"b","label":"y"})json" "\n");
    LoadResult result = read_corpus_jsonl(in);
    CHECK(result.records.size() == 1);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].id == "r1");
  }
  SECTION("blank lines skipped") {
    std::istringstream in("\n" R"json({"id":"r1","text":"a","label":"x"})json" "\n\n");
    LoadResult result = read_corpus_jsonl(in);
    CHECK(result.records.size() == 1);
    CHECK(result.errors.empty());
  }
}

TEST_CASE("read_corpus_penman blocks") {
  std::istringstream in(
      "(a / agree-01)\n"
      "\n"
      "(s / say-01\n"
      "   :ARG0 (p / person))\n"
      "\n\n"
      "(w / win-01)\n");
  LoadResult result = read_corpus_auto(in);
  CHECK(result.errors.empty());
  REQUIRE(result.records.size() == 3);
  CHECK(result.records[0].id == "g1");
  CHECK(result.records[1].id == "g2");
  REQUIRE(result.records[1].amr.has_value());
  // multi-line blocks parse as-is
  CHECK_NOTHROW(parse_penman(*result.records[1].amr));
}

TEST_CASE("write then read round-trips records") {
  std::vector<CorpusRecord> records;
  CorpusRecord a;
  a.id = "r1";
  a.text = "a text";
  a.label = "lab";
  a.amr = "(a / agree-01)";
  records.push_back(a);
  std::ostringstream out;
  write_corpus_jsonl(records, out);
  std::istringstream in(out.str());
  LoadResult back = read_corpus_jsonl(in);
  CHECK(back.errors.empty());
  REQUIRE(back.records.size() == 1);
  CHECK(back.records[0].id == "r1");
  CHECK(back.records[0].amr == a.amr);

  // writing again is byte-identical
  std::ostringstream out2;
  write_corpus_jsonl(back.records, out2);
  CHECK(out.str() == out2.str());
}

TEST_CASE("config parsing") {
  SECTION("all keys") {
    std::istringstream in(
        "# edit parameters\n"
        "mu = 0.4\n"
        "sigma2 = 0.2\n"
        "alpha = 0.3\n"
        "mix_mu = 0.6\n"
        "mix_sigma2 = 0.05\n"
        "beta = 0.7\n"
        "top_k_mix = 2\n"
        "rounds = 3\n"
        "tri_k = 4\n"
        "seed = 99\n"
        "workers = 2\n"
        "smatch_restarts = 6\n"
        "no_mix = false\n"
        "subgraph_score = f1\n"
        "attribute_roles = :mod, :quant, :op*\n"
        "adapter.expander = sed -e s/x/y/\n"
        "embeddings = vecs.tsv\n");
    ToolConfig config = parse_config(in);
    CHECK(config.edit.mu == 0.4);
    CHECK(config.edit.sigma2 == 0.2);
    CHECK(config.edit.alpha == 0.3);
    CHECK(config.edit.mix_mu == 0.6);
    CHECK(config.edit.beta == 0.7);
    CHECK(config.edit.top_k_mix == 2);
    CHECK(config.edit.rounds == 3);
    CHECK(config.edit.tri_k == 4);
    CHECK(config.edit.seed == 99);
    CHECK(config.edit.workers == 2);
    CHECK(config.edit.attribute_roles ==
          std::vector<std::string>{":mod", ":quant", ":op*"});
    CHECK(config.adapters.expander.argv ==
          std::vector<std::string>{"sed", "-e", "s/x/y/"});
    CHECK(config.embeddings_path == "vecs.tsv");
  }
  SECTION("unknown key is a hard error") {
    std::istringstream in("mue = 0.5\n");
    CHECK_THROWS_AS(parse_config(in), ConfigError);
  }
  SECTION("bad number") {
    std::istringstream in("mu = fast\n");
    CHECK_THROWS_AS(parse_config(in), ConfigError);
  }
  SECTION("range validation") {
    std::istringstream in("alpha = 1.5\n");
    CHECK_THROWS_AS(parse_config(in), ConfigError);
    std::istringstream in2("rounds = 0\n");
    CHECK_THROWS_AS(parse_config(in2), ConfigError);
  }
  SECTION("defaults match the published settings") {
    std::istringstream in("");
    ToolConfig config = parse_config(in);
    CHECK(config.edit.mu == 0.5);
    CHECK(config.edit.sigma2 == 0.1);
    CHECK(config.edit.alpha == 0.35);
    CHECK(config.edit.mix_mu == 0.5);
    CHECK(config.edit.mix_sigma2 == 0.1);
    CHECK(config.edit.beta == 0.6);
    CHECK(config.edit.rounds == 5);
  }
}

TEST_CASE("shell_split") {
  CHECK(shell_split("cat") == std::vector<std::string>{"cat"});
  CHECK(shell_split("sed -e 's/a b/c/'") ==
        std::vector<std::string>{"sed", "-e", "s/a b/c/"});
  CHECK(shell_split("cmd \"two words\" three") ==
        std::vector<std::string>{"cmd", "two words", "three"});
  CHECK(shell_split("a\\ b") == std::vector<std::string>{"a b"});
  CHECK(shell_split("  spaced   out  ") == std::vector<std::string>{"spaced", "out"});
  CHECK(shell_split("") == std::vector<std::string>{});
  CHECK_THROWS(shell_split("unterminated 'quote"));
}
