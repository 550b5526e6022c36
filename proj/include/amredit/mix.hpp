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

// Graph mixing: retrieve a semantically similar partner document, pair the
// most similar subtrees of the two edited graphs, and graft the partner's
// top-k subtrees into the source graph.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "amredit/graphops.hpp"
#include "amredit/penman.hpp"
#include "amredit/record.hpp"
#include "amredit/smatch.hpp"
#include "amredit/text.hpp"

namespace amredit {

class CorpusTooSmall : public std::runtime_error {
 public:
  CorpusTooSmall() : std::runtime_error("partner retrieval needs at least 2 records") {}
};

// Embedding-backed cosine similarity, sim(a,b) = e(a).e(b) / (|e(a)||e(b)|).
class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual double similarity(const std::string& a, const std::string& b) const = 0;
  // Corpus-level retrieval hook; keyed providers override this to look up
  // records by id instead of embedding their text.
  virtual double record_similarity(const AugRecord& a, const AugRecord& b) const {
    return similarity(a.text, b.text);
  }
};

// Default provider: sparse count vectors over case-folded word tokens.
class LexicalProvider : public SimilarityProvider {
 public:
  double similarity(const std::string& a, const std::string& b) const override {
    auto va = counts(a);
    auto vb = counts(b);
    double dot = 0.0;
    for (const auto& [tok, ca] : va) {
      auto it = vb.find(tok);
      if (it != vb.end()) dot += ca * it->second;
    }
    double na = norm(va);
    double nb = norm(vb);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (na * nb);
  }

 private:
  static std::unordered_map<std::string, double> counts(const std::string& text) {
    std::unordered_map<std::string, double> v;
    for (auto& tok : tokenize_words(text)) v[tok] += 1.0;
    return v;
  }
  static double norm(const std::unordered_map<std::string, double>& v) {
    double s = 0.0;
    for (const auto& [tok, c] : v) s += c * c;
    return std::sqrt(s);
  }
};

// Provider backed by a sidecar embedding file: one record per line,
// `id<TAB>v1,v2,...,vd`, fixed dimension across the file.
class VectorFileProvider : public SimilarityProvider {
 public:
  explicit VectorFileProvider(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embedding file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw std::runtime_error("embedding file line " + std::to_string(line_no) +
                                 ": missing tab separator");
      std::string id = line.substr(0, tab);
      std::vector<double> vec;
      std::stringstream ss(line.substr(tab + 1));
      std::string field;
      while (std::getline(ss, field, ',')) {
        try {
          vec.push_back(std::stod(field));
        } catch (const std::exception&) {
          throw std::runtime_error("embedding file line " + std::to_string(line_no) +
                                   ": bad number '" + field + "'");
        }
      }
      if (dimension_ == 0) dimension_ = vec.size();
      if (vec.size() != dimension_ || vec.empty())
        throw std::runtime_error("embedding file line " + std::to_string(line_no) +
                                 ": dimension " + std::to_string(vec.size()) +
                                 " does not match " + std::to_string(dimension_));
      vectors_[std::move(id)] = std::move(vec);
    }
  }

  // Keys are record ids.
  double similarity(const std::string& a, const std::string& b) const override {
    return cosine(lookup(a), lookup(b));
  }
  double record_similarity(const AugRecord& a, const AugRecord& b) const override {
    return cosine(lookup(a.id), lookup(b.id));
  }

  std::size_t dimension() const { return dimension_; }

 private:
  const std::vector<double>& lookup(const std::string& id) const {
    auto it = vectors_.find(id);
    if (it == vectors_.end())
      throw std::runtime_error("no embedding for record id '" + id + "'");
    return it->second;
  }
  static double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      dot += a[i] * b[i];
      na += a[i] * a[i];
      nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
  }

  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::size_t dimension_ = 0;
};

// Most similar other record: argmax over j != index, ties to the lowest
// position.
inline std::size_t retrieve_partner(const std::vector<AugRecord>& corpus, std::size_t index,
                                    const SimilarityProvider& provider) {
  if (corpus.size() < 2) throw CorpusTooSmall();
  std::size_t best = index == 0 ? 1 : 0;
  double best_sim = provider.record_similarity(corpus[index], corpus[best]);
  for (std::size_t j = best + 1; j < corpus.size(); ++j) {
    if (j == index) continue;
    double sim = provider.record_similarity(corpus[index], corpus[j]);
    if (sim > best_sim) {
      best_sim = sim;
      best = j;
    }
  }
  return best;
}

struct Graft {
  std::string source_root;  // subtree root in the partner graph g_k
  std::string anchor_root;  // subtree root in the source graph g_i
  double similarity = 0.0;
};

struct MixPlan {
  std::vector<Graft> grafts;  // sorted by descending similarity
  int k = 0;
};

// Scores every subtree pair of the two graphs, pairs each partner subtree
// with its most similar anchor, and keeps the top-k partner subtrees. A
// nested pair among the selection (a subtree and its own descendant) is
// pruned keeping the larger subtree. Either graph without non-root subtrees
// yields an empty plan.
inline MixPlan build_mix_plan(const AmrGraph& gi, const AmrGraph& gk, int k,
                              SubgraphScoreMode mode = SubgraphScoreMode::kF1) {
  MixPlan plan;
  plan.k = k;
  if (k <= 0) return plan;
  std::vector<Subgraph> anchors = enumerate_subgraphs(gi);
  std::vector<Subgraph> sources = enumerate_subgraphs(gk);
  if (anchors.empty() || sources.empty()) return plan;

  struct Scored {
    std::size_t source_idx;
    std::size_t anchor_idx;
    double sim;
  };
  std::vector<Scored> scored;
  scored.reserve(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    std::size_t best_anchor = 0;
    double best_sim = -1.0;
    for (std::size_t t = 0; t < anchors.size(); ++t) {
      double sim = subgraph_similarity(gk, sources[s], gi, anchors[t], mode);
      if (sim > best_sim) {
        best_sim = sim;
        best_anchor = t;
      }
    }
    scored.push_back({s, best_anchor, best_sim});
  }

  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) { return a.sim > b.sim; });
  if (scored.size() > static_cast<std::size_t>(k)) scored.resize(static_cast<std::size_t>(k));

  // prune nested selections, larger subtree wins
  std::vector<const Scored*> kept;
  std::vector<const Scored*> by_size(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) by_size[i] = &scored[i];
  std::stable_sort(by_size.begin(), by_size.end(), [&](const Scored* a, const Scored* b) {
    return sources[a->source_idx].members.size() > sources[b->source_idx].members.size();
  });
  std::unordered_set<std::string> covered;
  for (const Scored* s : by_size) {
    if (covered.count(sources[s->source_idx].root)) continue;
    kept.push_back(s);
    for (const auto& m : sources[s->source_idx].members) covered.insert(m);
  }

  std::stable_sort(kept.begin(), kept.end(),
                   [](const Scored* a, const Scored* b) { return a->sim > b->sim; });
  for (const Scored* s : kept)
    plan.grafts.push_back(
        {sources[s->source_idx].root, anchors[s->anchor_idx].root, s->sim});
  return plan;
}

namespace detail {

inline std::string fresh_variable(const std::string& wanted,
                                  const std::unordered_set<std::string>& used) {
  if (!used.count(wanted)) return wanted;
  std::string base = wanted;
  while (!base.empty() && std::isdigit(static_cast<unsigned char>(base.back()))) base.pop_back();
  if (base.empty()) base = "v";
  for (int n = 2;; ++n) {
    std::string candidate = base + std::to_string(n);
    if (!used.count(candidate)) return candidate;
  }
}

}  // namespace detail

// Grafts each planned partner subtree into the source graph: a renamed copy
// of the subtree is attached under the anchor subtree's root, using the
// subtree's original incoming role (":mod" when it was the partner's root).
// Pure addition: every triple of gi survives.
inline AmrGraph apply_mix(const AmrGraph& gi, const AmrGraph& gk, const MixPlan& plan) {
  AmrGraph out = gi;
  if (plan.grafts.empty()) return out;

  TreeView gk_tree = tree_view(gk);
  std::unordered_set<std::string> used;
  for (const auto& inst : out.instances) used.insert(inst.variable);

  for (const auto& graft : plan.grafts) {
    if (!out.has_variable(graft.anchor_root))
      throw InvariantViolation("mix anchor '" + graft.anchor_root + "' is not in the graph");
    if (!gk.has_variable(graft.source_root))
      throw InvariantViolation("mix source '" + graft.source_root + "' is not in the partner");

    std::vector<std::string> members = gk_tree.subtree_members(graft.source_root);
    std::unordered_set<std::string> member_set(members.begin(), members.end());
    std::unordered_map<std::string, std::string> rename;
    for (const auto& m : members) {
      std::string fresh = detail::fresh_variable(m, used);
      used.insert(fresh);
      rename[m] = fresh;
    }

    for (const auto& inst : gk.instances)
      if (member_set.count(inst.variable))
        out.instances.push_back({rename[inst.variable], inst.concept_name});

    auto role_it = gk_tree.parent_role.find(graft.source_root);
    std::string attach_role = role_it != gk_tree.parent_role.end() ? role_it->second : ":mod";
    out.relations.push_back({graft.anchor_root, attach_role, rename[graft.source_root]});

    for (const auto& rel : gk.relations)
      if (member_set.count(rel.source) && member_set.count(rel.target))
        out.relations.push_back({rename[rel.source], rel.role, rename[rel.target]});
    for (const auto& attr : gk.attributes)
      if (member_set.count(attr.source))
        out.attributes.push_back({rename[attr.source], attr.role, attr.constant});
  }
  out.validate();
  return out;
}

}  // namespace amredit
