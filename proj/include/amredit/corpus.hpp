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

// Corpus interchange: JSON-Lines records (one UTF-8 object per line) or raw
// PENMAN blocks separated by blank lines, plus the flat key=value config
// file. Unknown config keys are a hard error.

#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "amredit/pipeline.hpp"
#include "amredit/record.hpp"
#include "amredit/text.hpp"

namespace amredit {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RecordError {
  std::size_t line = 0;
  std::string id;
  std::string message;
};

struct LoadResult {
  std::vector<CorpusRecord> records;
  std::vector<RecordError> errors;
};

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Reading

inline LoadResult read_corpus_jsonl(std::istream& in) {
  LoadResult result;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json obj;
    try {
      obj = ordered_json::parse(line);
    } catch (const std::exception& e) {
      result.errors.push_back({line_no, "", std::string("invalid JSON: ") + e.what()});
      continue;
    }
    CorpusRecord rec;
    try {
      if (!obj.is_object()) throw std::runtime_error("record is not a JSON object");
      rec.id = obj.at("id").get<std::string>();
      rec.text = obj.at("text").get<std::string>();
      rec.label = obj.at("label").get<std::string>();
      if (obj.contains("amr") && !obj["amr"].is_null())
        rec.amr = obj["amr"].get<std::string>();
      if (obj.contains("tri") && !obj["tri"].is_null())
        rec.tri = obj["tri"].get<std::vector<std::string>>();
    } catch (const std::exception& e) {
      result.errors.push_back({line_no, rec.id, e.what()});
      continue;
    }
    if (!ids.insert(rec.id).second) {
      result.errors.push_back({line_no, rec.id, "duplicate record id"});
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

// Raw PENMAN input: one graph per blank-line-separated block. Records get
// sequential ids and empty text/label fields.
inline LoadResult read_corpus_penman(std::istream& in) {
  LoadResult result;
  std::string line;
  std::string block;
  std::size_t block_start = 1;
  std::size_t line_no = 0;
  int counter = 0;
  auto flush = [&] {
    if (block.find_first_not_of(" \t\r\n") == std::string::npos) {
      block.clear();
      return;
    }
    CorpusRecord rec;
    rec.id = "g" + std::to_string(++counter);
    rec.amr = block;
    result.records.push_back(std::move(rec));
    block.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      flush();
      block_start = line_no + 1;
    } else {
      if (block.empty()) block_start = line_no;
      block += line;
      block.push_back('\n');
    }
  }
  flush();
  (void)block_start;
  return result;
}

// Auto-detect: a corpus whose first non-space character is '{' is
// JSON-Lines, otherwise raw PENMAN.
inline LoadResult read_corpus_auto(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string content = buffer.str();
  auto first = content.find_first_not_of(" \t\r\n");
  std::istringstream replay(content);
  if (first != std::string::npos && content[first] == '{') return read_corpus_jsonl(replay);
  return read_corpus_penman(replay);
}

inline LoadResult load_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path);
  return read_corpus_auto(in);
}

// ---------------------------------------------------------------------------
// Writing

inline ordered_json corpus_record_json(const CorpusRecord& rec) {
  ordered_json obj;
  obj["id"] = rec.id;
  obj["text"] = rec.text;
  obj["label"] = rec.label;
  if (rec.amr) obj["amr"] = *rec.amr;
  if (rec.tri) obj["tri"] = *rec.tri;
  return obj;
}

inline void write_corpus_jsonl(const std::vector<CorpusRecord>& records, std::ostream& out) {
  for (const auto& rec : records) out << corpus_record_json(rec).dump() << '\n';
}

// Augmentation output records: one line per produced output.
inline void write_outputs_jsonl(const std::vector<AugRecord>& records, std::ostream& out,
                                bool with_abstract_text, bool with_expanded_text) {
  for (const auto& rec : records) {
    for (const auto& output : rec.outputs) {
      ordered_json obj;
      obj["id"] = rec.id + ".r" + std::to_string(output.round);
      obj["source_id"] = rec.id;
      obj["round"] = output.round;
      obj["label"] = rec.label;
      obj["abstract_amr"] = serialize_penman(output.graph);
      obj["mixed"] = output.mixed;
      if (output.mixed) obj["partner_id"] = output.partner_id;
      if (with_abstract_text) obj["abstract_text"] = output.abstract_text;
      if (with_expanded_text) obj["expanded_text"] = output.expanded_text;
      out << obj.dump() << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Config file
//
// Flat `key = value` lines; '#' lines are comments. Keys mirror the edit
// config field names; adapter commands are shell-split argv (quotes group,
// nothing is expanded).

struct ToolConfig {
  EditConfig edit;
  ExternalAdapters adapters;
  std::string embeddings_path;  // optional sidecar for retrieval
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

inline double config_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
  }
}

inline long long config_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not an integer: '" + value + "'");
  }
}

inline bool config_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': not a boolean: '" + value + "'");
}

}  // namespace detail

inline ToolConfig parse_config(std::istream& in) {
  ToolConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = detail::trim(trimmed.substr(0, eq));
    std::string value = detail::trim(trimmed.substr(eq + 1));

    if (key == "mu") config.edit.mu = detail::config_double(key, value);
    else if (key == "sigma2") config.edit.sigma2 = detail::config_double(key, value);
    else if (key == "alpha") config.edit.alpha = detail::config_double(key, value);
    else if (key == "mix_mu") config.edit.mix_mu = detail::config_double(key, value);
    else if (key == "mix_sigma2") config.edit.mix_sigma2 = detail::config_double(key, value);
    else if (key == "beta") config.edit.beta = detail::config_double(key, value);
    else if (key == "top_k_mix") config.edit.top_k_mix = static_cast<int>(detail::config_int(key, value));
    else if (key == "rounds") config.edit.rounds = static_cast<int>(detail::config_int(key, value));
    else if (key == "tri_k") config.edit.tri_k = static_cast<int>(detail::config_int(key, value));
    else if (key == "seed") config.edit.seed = static_cast<std::uint64_t>(detail::config_int(key, value));
    else if (key == "workers") config.edit.workers = static_cast<int>(detail::config_int(key, value));
    else if (key == "smatch_restarts") config.edit.smatch_restarts = static_cast<int>(detail::config_int(key, value));
    else if (key == "no_mix") config.edit.no_mix = detail::config_bool(key, value);
    else if (key == "attribute_roles") {
      config.edit.attribute_roles.clear();
      std::stringstream ss(value);
      std::string role;
      while (std::getline(ss, role, ',')) {
        role = detail::trim(role);
        if (!role.empty()) config.edit.attribute_roles.push_back(role);
      }
    } else if (key == "subgraph_score") {
      if (value == "f1") config.edit.subgraph_score = SubgraphScoreMode::kF1;
      else if (value == "f") config.edit.subgraph_score = SubgraphScoreMode::kRawF;
      else throw ConfigError("config key 'subgraph_score': expected f1 or f, got '" + value + "'");
    } else if (key == "adapter.text_to_amr") {
      config.adapters.text_to_amr.argv = shell_split(value);
    } else if (key == "adapter.amr_to_text") {
      config.adapters.amr_to_text.argv = shell_split(value);
    } else if (key == "adapter.expander") {
      config.adapters.expander.argv = shell_split(value);
    } else if (key == "embeddings") {
      config.embeddings_path = value;
    } else {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  config.edit.validate();
  return config;
}

inline ToolConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace amredit
