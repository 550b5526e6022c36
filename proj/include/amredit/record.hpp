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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "amredit/penman.hpp"

namespace amredit {

// One corpus document in wire form (JSON-Lines).
struct CorpusRecord {
  std::string id;
  std::string text;
  std::string label;
  std::optional<std::string> amr;               // single-line PENMAN
  std::optional<std::vector<std::string>> tri;  // per-record keyword override
};

// One produced augmentation of a record.
struct AugOutput {
  int round = 0;
  AmrGraph graph;
  bool mixed = false;
  std::string partner_id;      // present iff mixed
  std::string abstract_text;   // AMR-to-text adapter output, when configured
  std::string expanded_text;   // expander adapter output, when configured
};

// A corpus document during augmentation: source fields plus parsed graph,
// extracted keywords, and produced outputs.
struct AugRecord {
  std::string id;
  std::string text;
  std::string label;
  std::optional<AmrGraph> amr;
  std::vector<std::string> tri;
  bool tri_overridden = false;  // keywords supplied by the input record
  std::vector<AugOutput> outputs;
};

inline AugRecord to_aug_record(const CorpusRecord& wire) {
  AugRecord rec;
  rec.id = wire.id;
  rec.text = wire.text;
  rec.label = wire.label;
  if (wire.amr) rec.amr = parse_penman(*wire.amr);
  if (wire.tri) {
    rec.tri = *wire.tri;
    rec.tri_overridden = true;
  }
  return rec;
}

}  // namespace amredit
