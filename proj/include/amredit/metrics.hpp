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

// Generation-quality metrics: token diversity D (percentage of new token
// types over the original token count, so values above 100 are expected)
// and length diversity D-L (mean absolute token-length difference).
// Tokenization is case-folded whitespace+punctuation splitting; reported
// numbers are comparable only within this tool.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "amredit/text.hpp"

namespace amredit {

class EmptyOriginal : public std::runtime_error {
 public:
  explicit EmptyOriginal(const std::string& id)
      : std::runtime_error("record '" + id + "': original text has no tokens") {}
};

// 100 * |token types in the augmentations but not the original| / |original
// tokens (with multiplicity)|. Pooled over all augmentations by default;
// per_augmentation averages the percentage augmentation by augmentation.
inline double token_diversity(const std::string& original, const std::vector<std::string>& augs,
                              bool per_augmentation = false) {
  std::vector<std::string> orig_tokens = tokenize_words(original);
  if (orig_tokens.empty()) throw EmptyOriginal("");
  std::unordered_set<std::string> orig_types(orig_tokens.begin(), orig_tokens.end());
  double denom = static_cast<double>(orig_tokens.size());
  if (augs.empty()) return 0.0;

  if (per_augmentation) {
    double sum = 0.0;
    for (const auto& aug : augs) {
      std::unordered_set<std::string> fresh;
      for (auto& tok : tokenize_words(aug))
        if (!orig_types.count(tok)) fresh.insert(std::move(tok));
      sum += 100.0 * static_cast<double>(fresh.size()) / denom;
    }
    return sum / static_cast<double>(augs.size());
  }

  std::unordered_set<std::string> fresh;
  for (const auto& aug : augs)
    for (auto& tok : tokenize_words(aug))
      if (!orig_types.count(tok)) fresh.insert(std::move(tok));
  return 100.0 * static_cast<double>(fresh.size()) / denom;
}

// Mean absolute difference in token count between the original and each
// augmentation.
inline double length_diversity(const std::string& original, const std::vector<std::string>& augs) {
  std::vector<std::string> orig_tokens = tokenize_words(original);
  if (orig_tokens.empty()) throw EmptyOriginal("");
  if (augs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& aug : augs) {
    double len = static_cast<double>(tokenize_words(aug).size());
    sum += std::fabs(len - static_cast<double>(orig_tokens.size()));
  }
  return sum / static_cast<double>(augs.size());
}

struct MetricsInput {
  std::string id;
  std::string original;
  std::vector<std::string> augmentations;
};

struct RecordDiversity {
  std::string id;
  double d = 0.0;
  double dl = 0.0;
};

struct DiversityReport {
  double d = 0.0;   // mean of per-record D
  double dl = 0.0;  // mean of per-record D-L
  std::vector<RecordDiversity> per_record;
};

inline DiversityReport diversity_report(const std::vector<MetricsInput>& inputs,
                                        bool per_augmentation = false) {
  DiversityReport report;
  for (const auto& input : inputs) {
    if (tokenize_words(input.original).empty()) throw EmptyOriginal(input.id);
    RecordDiversity rec;
    rec.id = input.id;
    rec.d = token_diversity(input.original, input.augmentations, per_augmentation);
    rec.dl = length_diversity(input.original, input.augmentations);
    report.d += rec.d;
    report.dl += rec.dl;
    report.per_record.push_back(std::move(rec));
  }
  if (!report.per_record.empty()) {
    report.d /= static_cast<double>(report.per_record.size());
    report.dl /= static_cast<double>(report.per_record.size());
  }
  return report;
}

}  // namespace amredit
