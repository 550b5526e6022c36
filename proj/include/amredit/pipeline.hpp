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

// Augmentation pipeline: keyword extraction, per-round abstraction (filter
// attributes, delete subtrees), gate-sampled mixing with a retrieved
// partner, external adapter calls, and post-processing.
//
// Every stochastic step draws from an rng seeded per (record id, round), so
// corpus order and worker count never change a record's outputs.

#pragma once

#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "amredit/adapter.hpp"
#include "amredit/graphops.hpp"
#include "amredit/mix.hpp"
#include "amredit/penman.hpp"
#include "amredit/random.hpp"
#include "amredit/record.hpp"
#include "amredit/smatch.hpp"
#include "amredit/text.hpp"

namespace amredit {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EditConfig {
  double mu = 0.5;          // deletion-rate Gaussian mean
  double sigma2 = 0.1;      // deletion-rate Gaussian variance
  double alpha = 0.35;      // depth-ratio threshold
  double mix_mu = 0.5;      // mix-gate Gaussian mean
  double mix_sigma2 = 0.1;  // mix-gate Gaussian variance
  double beta = 0.6;        // mix-gate threshold (strict >)
  int top_k_mix = 1;
  int rounds = 5;  // R
  int tri_k = 3;
  std::uint64_t seed = 0;
  std::vector<std::string> attribute_roles = DeletionPolicy::default_attribute_roles();
  bool no_mix = false;
  int workers = 0;  // 0 = logical CPU count
  int smatch_restarts = 4;
  SubgraphScoreMode subgraph_score = SubgraphScoreMode::kF1;

  DeletionPolicy deletion_policy() const {
    DeletionPolicy policy;
    policy.alpha = alpha;
    policy.mu = mu;
    policy.sigma2 = sigma2;
    policy.attribute_roles = attribute_roles;
    return policy;
  }

  void validate() const {
    auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in_unit(mu) || !in_unit(mix_mu)) throw ConfigError("mu must be in [0, 1]");
    if (sigma2 < 0.0 || mix_sigma2 < 0.0) throw ConfigError("sigma2 must be >= 0");
    if (!in_unit(alpha)) throw ConfigError("alpha must be in [0, 1]");
    if (!in_unit(beta)) throw ConfigError("beta must be in [0, 1]");
    if (rounds < 1) throw ConfigError("rounds must be >= 1");
    if (tri_k < 0) throw ConfigError("tri_k must be >= 0");
    if (top_k_mix < 0) throw ConfigError("top_k_mix must be >= 0");
    if (smatch_restarts < 1) throw ConfigError("smatch_restarts must be >= 1");
    if (workers < 0) throw ConfigError("workers must be >= 0");
  }
};

// An optional external tool, run as a child process speaking the one-line-
// in / one-line-out protocol.
struct AdapterSpec {
  std::vector<std::string> argv;
  bool configured() const { return !argv.empty(); }
};

struct ExternalAdapters {
  AdapterSpec text_to_amr;
  AdapterSpec amr_to_text;
  AdapterSpec expander;
};

struct PipelineFailure {
  std::string record_id;
  int round = -1;  // -1: record-level failure
  std::string stage;
  std::string message;
};

struct PipelineResult {
  std::vector<AugRecord> records;  // originals with their outputs attached
  std::vector<PipelineFailure> failures;
  std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------
// TRI extraction

// Scores candidate n-grams (n = 1..3, case-folded word tokens; candidates
// starting or ending with a stopword are pruned) against the label and
// returns the top-k, ties broken by earliest document position.
inline std::vector<std::string> extract_tri(const std::string& text, const std::string& label,
                                            int k, const SimilarityProvider& scorer) {
  if (k <= 0) return {};
  std::vector<std::string> tokens = tokenize_words(text);

  struct Candidate {
    std::string ngram;
    std::size_t position;
    std::size_t length;
    double score;
  };
  std::vector<Candidate> candidates;
  std::unordered_set<std::string> seen;
  for (std::size_t n = 1; n <= 3; ++n) {
    if (tokens.size() < n) break;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      if (is_stopword(tokens[i]) || is_stopword(tokens[i + n - 1])) continue;
      std::string ngram = tokens[i];
      for (std::size_t j = 1; j < n; ++j) ngram += ' ' + tokens[i + j];
      if (!seen.insert(ngram).second) continue;
      candidates.push_back({std::move(ngram), i, n, 0.0});
    }
  }
  for (auto& c : candidates) c.score = scorer.similarity(c.ngram, label);

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.position != b.position) return a.position < b.position;
    if (a.length != b.length) return a.length < b.length;
    return a.ngram < b.ngram;
  });
  if (candidates.size() > static_cast<std::size_t>(k))
    candidates.resize(static_cast<std::size_t>(k));

  std::vector<std::string> keywords;
  keywords.reserve(candidates.size());
  for (auto& c : candidates) keywords.push_back(std::move(c.ngram));
  return keywords;
}

// ---------------------------------------------------------------------------
// Abstraction rounds

// One abstraction pass: keyword protection, attribute filtering, then
// stochastic subtree deletion.
inline AmrGraph abstract_once(const AugRecord& record, const EditConfig& config,
                              std::mt19937_64& rng) {
  if (!record.amr) throw InvariantViolation("record '" + record.id + "' has no graph");
  DeletionPolicy policy = config.deletion_policy();
  TriProtection protection = match_tri(*record.amr, record.tri);
  AmrGraph filtered = filter_attributes(*record.amr, policy, protection);
  return delete_subgraphs(filtered, policy, protection, rng);
}

// One augmentation round. Samples the mix gate gamma ~ N(mix_mu,
// mix_sigma2) clamped to [0,1]; mixing runs only when gamma > beta
// (strictly). The partner is abstracted with this record's rng stream, so
// the round stays reproducible from the record's seed alone.
inline AugOutput augment_round(const AugRecord& record, const std::vector<AugRecord>& corpus,
                               std::size_t self_index, const EditConfig& config,
                               const SimilarityProvider& provider, std::mt19937_64& rng,
                               int round, std::vector<std::string>* warnings = nullptr) {
  AugOutput out;
  out.round = round;

  double gamma = sample_clamped_normal(rng, config.mix_mu, config.mix_sigma2);
  bool mix = !config.no_mix && gamma > config.beta;
  if (mix && corpus.size() < 2) {
    if (warnings)
      warnings->push_back("record '" + record.id + "' round " + std::to_string(round) +
                          ": mixing requested but corpus has a single record; left unmixed");
    mix = false;
  }

  if (!mix) {
    out.graph = abstract_once(record, config, rng);
    return out;
  }

  std::size_t partner_index = retrieve_partner(corpus, self_index, provider);
  const AugRecord& partner = corpus[partner_index];
  AmrGraph self_abstract = abstract_once(record, config, rng);
  if (!partner.amr) {
    if (warnings)
      warnings->push_back("record '" + record.id + "' round " + std::to_string(round) +
                          ": partner '" + partner.id + "' has no graph; left unmixed");
    out.graph = std::move(self_abstract);
    return out;
  }
  AmrGraph partner_abstract = abstract_once(partner, config, rng);
  MixPlan plan =
      build_mix_plan(self_abstract, partner_abstract, config.top_k_mix, config.subgraph_score);
  out.graph = apply_mix(self_abstract, partner_abstract, plan);
  out.mixed = true;
  out.partner_id = partner.id;
  return out;
}

namespace detail {

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  std::size_t pool_size = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  pool.reserve(pool_size);
  for (std::size_t t = 0; t < pool_size; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// Runs the full augmentation pipeline over a corpus. Records lacking a
// graph go through the text-to-AMR adapter (when configured). Outputs whose
// serialization equals the source graph's are dropped. The returned records
// are the originals with their surviving outputs attached; adapter text
// fields are filled when the corresponding adapter is configured.
inline PipelineResult run_pipeline(std::vector<AugRecord> records, const EditConfig& config,
                                   const ExternalAdapters& adapters,
                                   const SimilarityProvider& provider) {
  config.validate();
  PipelineResult result;
  std::vector<bool> failed(records.size(), false);

  // text-to-AMR for records without a graph (sequential: one child process,
  // lock-step protocol)
  bool need_parse = false;
  for (const auto& r : records)
    if (!r.amr) need_parse = true;
  if (need_parse) {
    std::unique_ptr<LineProcess> child;
    if (adapters.text_to_amr.configured()) {
      try {
        child = std::make_unique<LineProcess>(adapters.text_to_amr.argv);
      } catch (const AdapterError& e) {
        child.reset();
        result.failures.push_back({"", -1, "text_to_amr", e.what()});
      }
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].amr) continue;
      if (!child) {
        failed[i] = true;
        result.failures.push_back(
            {records[i].id, -1, "text_to_amr",
             adapters.text_to_amr.configured() ? "adapter unavailable"
                                               : "record has no amr and no adapter configured"});
        continue;
      }
      try {
        std::string line = child->exchange(records[i].text);
        records[i].amr = parse_penman(line);
      } catch (const std::exception& e) {
        failed[i] = true;
        result.failures.push_back({records[i].id, -1, "text_to_amr", e.what()});
      }
    }
    if (child) {
      int code = child->close_and_wait();
      if (code != 0)
        result.failures.push_back(
            {"", -1, "text_to_amr", "adapter exited with code " + std::to_string(code)});
    }
  }

  // keyword extraction (pure, parallel)
  LexicalProvider tri_scorer;
  detail::parallel_for(records.size(), config.workers, [&](std::size_t i) {
    if (failed[i] || records[i].tri_overridden) return;
    records[i].tri = extract_tri(records[i].text, records[i].label, config.tri_k, tri_scorer);
  });

  // abstraction rounds (pure, parallel; per-(record, round) seeds)
  std::vector<std::vector<std::string>> round_warnings(records.size());
  detail::parallel_for(records.size(), config.workers, [&](std::size_t i) {
    if (failed[i] || !records[i].amr) return;
    std::string source_penman = serialize_penman(*records[i].amr);
    for (int round = 0; round < config.rounds; ++round) {
      std::mt19937_64 rng(derive_seed(config.seed, records[i].id,
                                      static_cast<std::uint64_t>(round)));
      AugOutput out = augment_round(records[i], records, i, config, provider, rng, round,
                                    &round_warnings[i]);
      // post-process: drop empty or source-identical outputs
      std::string penman = serialize_penman(out.graph);
      if (penman.empty() || penman == source_penman) continue;
      records[i].outputs.push_back(std::move(out));
    }
  });
  for (auto& w : round_warnings)
    for (auto& msg : w) result.warnings.push_back(std::move(msg));

  // adapter text stages, sequential in record order for a deterministic
  // protocol stream
  auto run_text_stage = [&](const AdapterSpec& spec, const char* stage, auto&& input_of,
                            auto&& store) {
    if (!spec.configured()) return;
    std::unique_ptr<LineProcess> child;
    try {
      child = std::make_unique<LineProcess>(spec.argv);
    } catch (const AdapterError& e) {
      result.failures.push_back({"", -1, stage, e.what()});
      return;
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
      for (auto& out : records[i].outputs) {
        try {
          store(out, child->exchange(input_of(out)));
        } catch (const AdapterError& e) {
          result.failures.push_back({records[i].id, out.round, stage, e.what()});
        }
      }
    }
    int code = child->close_and_wait();
    if (code != 0)
      result.failures.push_back({"", -1, stage,
                                 "adapter exited with code " + std::to_string(code)});
  };

  run_text_stage(
      adapters.amr_to_text, "amr_to_text",
      [](const AugOutput& out) { return serialize_penman(out.graph); },
      [](AugOutput& out, std::string text) { out.abstract_text = std::move(text); });
  run_text_stage(
      adapters.expander, "expander",
      [&](const AugOutput& out) {
        return adapters.amr_to_text.configured() && !out.abstract_text.empty()
                   ? out.abstract_text
                   : serialize_penman(out.graph);
      },
      [](AugOutput& out, std::string text) { out.expanded_text = std::move(text); });

  result.records = std::move(records);
  return result;
}

}  // namespace amredit
