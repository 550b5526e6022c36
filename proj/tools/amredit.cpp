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

// amredit: batch CLI for AMR abstraction, mixing, SMATCH scoring, and
// diversity metrics over JSON-Lines corpora.
//
// Exit codes: 0 success, 1 I/O error, 2 content or usage error.
// Diagnostics go to stderr; data goes to files or stdout.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "amredit/corpus.hpp"
#include "amredit/metrics.hpp"
#include "amredit/mix.hpp"
#include "amredit/penman.hpp"
#include "amredit/pipeline.hpp"
#include "amredit/smatch.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitContent = 2;

struct CommonOptions {
  std::string config_path;
};

amredit::ToolConfig load_tool_config(const CommonOptions& opts) {
  // AMREDIT_CONFIG overrides the --config path
  const char* env = std::getenv("AMREDIT_CONFIG");
  std::string path = env && *env ? std::string(env) : opts.config_path;
  if (path.empty()) return {};
  return amredit::load_config_file(path);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw amredit::IoError("cannot open output file: " + path);
  return out;
}

void report_record_errors(const std::vector<amredit::RecordError>& errors) {
  for (const auto& e : errors) {
    std::cerr << "error: line " << e.line;
    if (!e.id.empty()) std::cerr << " (record '" << e.id << "')";
    std::cerr << ": " << e.message << "\n";
  }
}

// ---------------------------------------------------------------------------
// parse: validate and normalize PENMAN graphs

int cmd_parse(const std::string& input, const std::string& output) {
  amredit::LoadResult loaded = amredit::load_corpus_file(input);
  report_record_errors(loaded.errors);

  std::vector<amredit::CorpusRecord> normalized;
  bool any_bad = !loaded.errors.empty();
  for (auto& rec : loaded.records) {
    if (rec.amr) {
      try {
        amredit::AmrGraph g = amredit::parse_penman(*rec.amr);
        rec.amr = amredit::serialize_penman(g);
      } catch (const amredit::ParseError& e) {
        std::cerr << "error: record '" << rec.id << "': " << e.what() << "\n";
        any_bad = true;
        continue;
      }
    }
    normalized.push_back(std::move(rec));
  }
  std::ofstream out = open_output(output);
  amredit::write_corpus_jsonl(normalized, out);
  return any_bad ? kExitContent : kExitOk;
}

// ---------------------------------------------------------------------------
// abstract: run the augmentation pipeline

int cmd_abstract(const std::string& input, const std::string& output, const CommonOptions& common,
                 std::optional<std::uint64_t> seed, std::optional<int> rounds, bool no_mix) {
  amredit::ToolConfig config = load_tool_config(common);
  if (seed) config.edit.seed = *seed;
  if (rounds) config.edit.rounds = *rounds;
  if (no_mix) config.edit.no_mix = true;
  config.edit.validate();

  amredit::LoadResult loaded = amredit::load_corpus_file(input);
  report_record_errors(loaded.errors);
  if (!loaded.errors.empty()) return kExitContent;

  std::vector<amredit::AugRecord> records;
  records.reserve(loaded.records.size());
  for (const auto& rec : loaded.records) {
    try {
      records.push_back(amredit::to_aug_record(rec));
    } catch (const amredit::ParseError& e) {
      std::cerr << "error: record '" << rec.id << "': " << e.what() << "\n";
      return kExitContent;
    }
  }

  std::unique_ptr<amredit::SimilarityProvider> provider;
  if (!config.embeddings_path.empty())
    provider = std::make_unique<amredit::VectorFileProvider>(config.embeddings_path);
  else
    provider = std::make_unique<amredit::LexicalProvider>();

  amredit::PipelineResult result =
      amredit::run_pipeline(std::move(records), config.edit, config.adapters, *provider);

  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& f : result.failures) {
    std::cerr << "failure: stage " << f.stage;
    if (!f.record_id.empty()) std::cerr << ", record '" << f.record_id << "'";
    if (f.round >= 0) std::cerr << ", round " << f.round;
    std::cerr << ": " << f.message << "\n";
  }
  if (!result.failures.empty())
    std::cerr << result.failures.size() << " failure(s) during augmentation\n";

  std::ofstream out = open_output(output);
  amredit::write_outputs_jsonl(result.records, out, config.adapters.amr_to_text.configured(),
                               config.adapters.expander.configured());
  return result.failures.empty() ? kExitOk : kExitContent;
}

// ---------------------------------------------------------------------------
// mix: standalone graph mixing over a corpus

int cmd_mix(const std::string& input, const std::string& output, const CommonOptions& common,
            std::optional<int> top_k) {
  amredit::ToolConfig config = load_tool_config(common);
  if (top_k) config.edit.top_k_mix = *top_k;
  config.edit.validate();

  amredit::LoadResult loaded = amredit::load_corpus_file(input);
  report_record_errors(loaded.errors);
  if (!loaded.errors.empty()) return kExitContent;

  std::vector<amredit::AugRecord> records;
  for (const auto& rec : loaded.records) {
    if (!rec.amr) {
      std::cerr << "error: record '" << rec.id << "' has no amr field\n";
      return kExitContent;
    }
    try {
      records.push_back(amredit::to_aug_record(rec));
    } catch (const amredit::ParseError& e) {
      std::cerr << "error: record '" << rec.id << "': " << e.what() << "\n";
      return kExitContent;
    }
  }
  if (records.size() < 2) {
    std::cerr << "error: mixing needs at least 2 records\n";
    return kExitContent;
  }

  std::unique_ptr<amredit::SimilarityProvider> provider;
  if (!config.embeddings_path.empty())
    provider = std::make_unique<amredit::VectorFileProvider>(config.embeddings_path);
  else
    provider = std::make_unique<amredit::LexicalProvider>();

  std::ofstream out = open_output(output);
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::size_t j = amredit::retrieve_partner(records, i, *provider);
    amredit::MixPlan plan = amredit::build_mix_plan(
        *records[i].amr, *records[j].amr, config.edit.top_k_mix, config.edit.subgraph_score);
    amredit::AmrGraph mixed = amredit::apply_mix(*records[i].amr, *records[j].amr, plan);
    amredit::ordered_json obj;
    obj["id"] = records[i].id;
    obj["partner_id"] = records[j].id;
    obj["mixed_amr"] = amredit::serialize_penman(mixed);
    obj["grafts"] = plan.grafts.size();
    out << obj.dump() << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// smatch: pairwise scores between two graph files

int cmd_smatch(const std::string& file_a, const std::string& file_b, bool exact, int restarts,
               std::uint64_t seed) {
  amredit::LoadResult a = amredit::load_corpus_file(file_a);
  amredit::LoadResult b = amredit::load_corpus_file(file_b);
  report_record_errors(a.errors);
  report_record_errors(b.errors);
  if (!a.errors.empty() || !b.errors.empty()) return kExitContent;
  if (a.records.size() != b.records.size()) {
    std::cerr << "error: record counts differ (" << a.records.size() << " vs "
              << b.records.size() << ")\n";
    return kExitContent;
  }

  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& ra = a.records[i];
    const auto& rb = b.records[i];
    if (!ra.amr || !rb.amr) {
      std::cerr << "error: record '" << (ra.amr ? rb.id : ra.id) << "' has no amr field\n";
      return kExitContent;
    }
    amredit::TripleSet ta = amredit::to_triples(amredit::parse_penman(*ra.amr));
    amredit::TripleSet tb = amredit::to_triples(amredit::parse_penman(*rb.amr));
    amredit::SmatchScore score;
    if (exact) {
      score = amredit::score_exact(ta, tb);
    } else {
      std::mt19937_64 rng(amredit::derive_seed(seed, ra.id + "\x1f" + rb.id, i));
      score = amredit::smatch_score(ta, tb, restarts, rng);
    }
    std::printf("%s %s %d %.4f %.4f %.4f\n", ra.id.c_str(), rb.id.c_str(), score.matched,
                score.precision, score.recall, score.f1);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// metrics: diversity report joining originals with augmentations

int cmd_metrics(const std::string& original_path, const std::string& augmented_path,
                const std::string& output, const std::string& json_output, bool per_aug) {
  amredit::LoadResult originals = amredit::load_corpus_file(original_path);
  report_record_errors(originals.errors);
  if (!originals.errors.empty()) return kExitContent;

  std::map<std::string, std::size_t> index;
  std::vector<amredit::MetricsInput> inputs;
  for (const auto& rec : originals.records) {
    index[rec.id] = inputs.size();
    inputs.push_back({rec.id, rec.text, {}});
  }

  // The augmented file may be pipeline output (source_id + abstract_amr /
  // expanded_text) or a plain corpus (id + text).
  std::ifstream aug_in(augmented_path);
  if (!aug_in) throw amredit::IoError("cannot open input file: " + augmented_path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(aug_in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    amredit::ordered_json obj;
    try {
      obj = amredit::ordered_json::parse(line);
    } catch (const std::exception& e) {
      std::cerr << "error: augmented line " << line_no << ": invalid JSON: " << e.what() << "\n";
      return kExitContent;
    }
    std::string source_id =
        obj.contains("source_id") ? obj["source_id"].get<std::string>()
                                  : obj.value("id", std::string());
    auto it = index.find(source_id);
    if (it == index.end()) {
      std::cerr << "error: augmented line " << line_no << ": source_id '" << source_id
                << "' not found in the original corpus\n";
      return kExitContent;
    }
    std::string text;
    if (obj.contains("expanded_text") && obj["expanded_text"].is_string() &&
        !obj["expanded_text"].get<std::string>().empty())
      text = obj["expanded_text"].get<std::string>();
    else if (obj.contains("abstract_text") && obj["abstract_text"].is_string() &&
             !obj["abstract_text"].get<std::string>().empty())
      text = obj["abstract_text"].get<std::string>();
    else if (obj.contains("abstract_amr") && obj["abstract_amr"].is_string())
      text = obj["abstract_amr"].get<std::string>();
    else
      text = obj.value("text", std::string());
    inputs[it->second].augmentations.push_back(std::move(text));
  }

  // records with no augmentations are left out of the join
  std::vector<amredit::MetricsInput> joined;
  for (auto& input : inputs)
    if (!input.augmentations.empty()) joined.push_back(std::move(input));

  amredit::DiversityReport report;
  try {
    report = amredit::diversity_report(joined, per_aug);
  } catch (const amredit::EmptyOriginal& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitContent;
  }

  std::ofstream out = open_output(output);
  out << "id\tD\tD-L\n";
  char buf[64];
  for (const auto& rec : report.per_record) {
    std::snprintf(buf, sizeof(buf), "%.2f\t%.2f", rec.d, rec.dl);
    out << rec.id << '\t' << buf << '\n';
  }
  std::snprintf(buf, sizeof(buf), "%.2f\t%.2f", report.d, report.dl);
  out << "TOTAL\t" << buf << '\n';

  std::string json_path = json_output.empty() ? output + ".json" : json_output;
  std::ofstream json_out = open_output(json_path);
  amredit::ordered_json doc;
  doc["d"] = report.d;
  doc["dl"] = report.dl;
  doc["records"] = amredit::ordered_json::array();
  for (const auto& rec : report.per_record) {
    amredit::ordered_json r;
    r["id"] = rec.id;
    r["d"] = rec.d;
    r["dl"] = rec.dl;
    doc["records"].push_back(r);
  }
  json_out << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AMR abstraction and mixing toolkit"};
  app.require_subcommand(1);

  CommonOptions common;

  // parse
  std::string parse_input, parse_output;
  CLI::App* parse = app.add_subcommand("parse", "validate and normalize PENMAN graphs");
  parse->add_option("-i,--input", parse_input, "input corpus (JSON-Lines or raw PENMAN)")
      ->required();
  parse->add_option("-o,--output", parse_output, "normalized JSON-Lines output")->required();

  // abstract
  std::string abs_input, abs_output;
  std::optional<std::uint64_t> abs_seed;
  std::optional<int> abs_rounds;
  bool abs_no_mix = false;
  CLI::App* abstract_cmd = app.add_subcommand("abstract", "run the augmentation pipeline");
  abstract_cmd->add_option("-i,--input", abs_input, "input corpus")->required();
  abstract_cmd->add_option("-o,--output", abs_output, "augmentation output (JSON-Lines)")
      ->required();
  abstract_cmd->add_option("-c,--config", common.config_path, "config file path");
  abstract_cmd->add_option("--seed", abs_seed, "override the config seed");
  abstract_cmd->add_option("--rounds", abs_rounds, "override the number of rounds (R >= 1)");
  abstract_cmd->add_flag("--no-mix", abs_no_mix, "disable graph mixing");

  // mix
  std::string mix_input, mix_output;
  std::optional<int> mix_top_k;
  CLI::App* mix = app.add_subcommand("mix", "mix each record's graph with its retrieved partner");
  mix->add_option("-i,--input", mix_input, "input corpus with amr fields")->required();
  mix->add_option("-o,--output", mix_output, "mixed-graph output (JSON-Lines)")->required();
  mix->add_option("-c,--config", common.config_path, "config file path");
  mix->add_option("--top-k", mix_top_k, "number of subtrees to graft");

  // smatch
  std::string smatch_a, smatch_b;
  bool smatch_exact = false;
  int smatch_restarts = 4;
  std::uint64_t smatch_seed = 0;
  CLI::App* smatch = app.add_subcommand("smatch", "pairwise SMATCH scores between two files");
  smatch->add_option("a", smatch_a, "first graph file")->required();
  smatch->add_option("b", smatch_b, "second graph file")->required();
  smatch->add_flag("--exact", smatch_exact, "exhaustive alignment (small graphs only)");
  smatch->add_option("--restarts", smatch_restarts, "hill-climbing restarts");
  smatch->add_option("--seed", smatch_seed, "hill-climbing seed");

  // metrics
  std::string met_original, met_augmented, met_output, met_json;
  bool met_per_aug = false;
  CLI::App* metrics = app.add_subcommand("metrics", "token and length diversity report");
  metrics->add_option("--original", met_original, "original corpus")->required();
  metrics->add_option("--augmented", met_augmented, "augmented corpus")->required();
  metrics->add_option("-o,--output", met_output, "report output path")->required();
  metrics->add_option("--json", met_json, "JSON report path (default: <output>.json)");
  metrics->add_flag("--per-aug", met_per_aug, "average D per augmentation instead of pooling");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitContent;
  }

  try {
    if (parse->parsed()) return cmd_parse(parse_input, parse_output);
    if (abstract_cmd->parsed())
      return cmd_abstract(abs_input, abs_output, common, abs_seed, abs_rounds, abs_no_mix);
    if (mix->parsed()) return cmd_mix(mix_input, mix_output, common, mix_top_k);
    if (smatch->parsed())
      return cmd_smatch(smatch_a, smatch_b, smatch_exact, smatch_restarts, smatch_seed);
    if (metrics->parsed())
      return cmd_metrics(met_original, met_augmented, met_output, met_json, met_per_aug);
  } catch (const amredit::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitContent;
  }
  return kExitOk;
}
