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

// SMATCH scoring: the overlap between two graphs' triple sets maximized
// over injective variable alignments. f(a, b, map) counts the triples of a
// that land in b under the alignment; F = max over maps; P = F/|a|,
// R = F/|b|, F1 = 2PR/(P+R).
//
// Both searchers (exhaustive and hill-climbing) consider alignments between
// concept-compatible variable pairs: a variable of a may map to a variable
// of b only when their instance concepts are string-equal. Instance
// matching is exact, sense suffix included.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "amredit/graphops.hpp"
#include "amredit/penman.hpp"
#include "amredit/random.hpp"

namespace amredit {

class GraphTooLarge : public std::runtime_error {
 public:
  GraphTooLarge(std::size_t vars, std::size_t bound)
      : std::runtime_error("graph has " + std::to_string(vars) +
                           " variables, exact scoring bound is " + std::to_string(bound)) {}
};

inline constexpr std::size_t kDefaultExactBound = 8;

// Triples of one graph, set semantics (duplicates collapsed).
struct TripleSet {
  std::vector<Instance> instances;
  std::vector<Relation> relations;
  std::vector<Attribute> attributes;

  std::size_t size() const {
    return instances.size() + relations.size() + attributes.size();
  }
};

using VariableMap = std::unordered_map<std::string, std::string>;

struct SmatchScore {
  int matched = 0;  // F: maximal matched-triple count
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  VariableMap witness;
};

inline TripleSet to_triples(const AmrGraph& g) {
  TripleSet t;
  t.instances = g.instances;
  std::unordered_set<std::string> seen;
  for (const auto& rel : g.relations)
    if (seen.insert(rel.source + '\x1f' + rel.role + '\x1f' + rel.target).second)
      t.relations.push_back(rel);
  seen.clear();
  for (const auto& attr : g.attributes)
    if (seen.insert(attr.source + '\x1f' + attr.role + '\x1f' + attr.constant).second)
      t.attributes.push_back(attr);
  return t;
}

// Triples induced by a subgraph's members: member instances, relations with
// both endpoints inside, attributes of members. Reentrant edges leaving the
// subgraph are excluded.
inline TripleSet induced_triples(const AmrGraph& g, const Subgraph& sub) {
  std::unordered_set<std::string> members(sub.members.begin(), sub.members.end());
  AmrGraph restricted;
  restricted.root = sub.root;
  for (const auto& inst : g.instances)
    if (members.count(inst.variable)) restricted.instances.push_back(inst);
  for (const auto& rel : g.relations)
    if (members.count(rel.source) && members.count(rel.target))
      restricted.relations.push_back(rel);
  for (const auto& attr : g.attributes)
    if (members.count(attr.source)) restricted.attributes.push_back(attr);
  return to_triples(restricted);
}

namespace detail {

// Matching context shared by both searchers.
struct MatchContext {
  const TripleSet* a;
  const TripleSet* b;
  std::unordered_set<std::string> b_relation_keys;
  std::unordered_set<std::string> b_attribute_keys;
  // per a-instance index: concept-compatible b variables
  std::vector<std::vector<std::string>> candidates;

  MatchContext(const TripleSet& ta, const TripleSet& tb) : a(&ta), b(&tb) {
    for (const auto& rel : tb.relations)
      b_relation_keys.insert(rel.source + '\x1f' + rel.role + '\x1f' + rel.target);
    for (const auto& attr : tb.attributes)
      b_attribute_keys.insert(attr.source + '\x1f' + attr.role + '\x1f' + attr.constant);
    candidates.resize(ta.instances.size());
    for (std::size_t i = 0; i < ta.instances.size(); ++i)
      for (const auto& binst : tb.instances)
        if (binst.concept_name == ta.instances[i].concept_name)
          candidates[i].push_back(binst.variable);
  }

  // f(a, b, map): triples of a mapped into b. Mapped pairs are concept
  // compatible by construction, so each mapped variable matches its
  // instance triple.
  int overlap(const VariableMap& map) const {
    int f = static_cast<int>(map.size());
    for (const auto& rel : a->relations) {
      auto s = map.find(rel.source);
      auto t = map.find(rel.target);
      if (s == map.end() || t == map.end()) continue;
      if (b_relation_keys.count(s->second + '\x1f' + rel.role + '\x1f' + t->second)) ++f;
    }
    for (const auto& attr : a->attributes) {
      auto s = map.find(attr.source);
      if (s == map.end()) continue;
      if (b_attribute_keys.count(s->second + '\x1f' + attr.role + '\x1f' + attr.constant)) ++f;
    }
    return f;
  }
};

inline SmatchScore finish_score(const TripleSet& a, const TripleSet& b, int best,
                                VariableMap witness) {
  SmatchScore score;
  score.matched = best;
  score.witness = std::move(witness);
  score.precision = a.size() ? static_cast<double>(best) / static_cast<double>(a.size()) : 0.0;
  score.recall = b.size() ? static_cast<double>(best) / static_cast<double>(b.size()) : 0.0;
  double pr = score.precision + score.recall;
  score.f1 = pr > 0.0 ? 2.0 * score.precision * score.recall / pr : 0.0;
  return score;
}

}  // namespace detail

// Exhaustive maximization of f over all injective partial maps between
// concept-compatible variables. Throws GraphTooLarge when either side has
// more than `bound` variables.
inline SmatchScore score_exact(const TripleSet& a, const TripleSet& b,
                               std::size_t bound = kDefaultExactBound) {
  if (a.instances.size() > bound) throw GraphTooLarge(a.instances.size(), bound);
  if (b.instances.size() > bound) throw GraphTooLarge(b.instances.size(), bound);

  detail::MatchContext ctx(a, b);
  VariableMap current;
  std::unordered_set<std::string> used;
  int best = 0;
  VariableMap best_map;

  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == a.instances.size()) {
      int f = ctx.overlap(current);
      if (f > best) {
        best = f;
        best_map = current;
      }
      return;
    }
    self(self, i + 1);  // leave unmapped
    const std::string& avar = a.instances[i].variable;
    for (const auto& bvar : ctx.candidates[i]) {
      if (used.count(bvar)) continue;
      used.insert(bvar);
      current[avar] = bvar;
      self(self, i + 1);
      current.erase(avar);
      used.erase(bvar);
    }
  };
  recurse(recurse, 0);
  return detail::finish_score(a, b, best, std::move(best_map));
}

// Greedy hill climbing from a concept-match-seeded initial alignment, best
// of `restarts` restarts. Moves reassign one a-variable to another
// compatible b-variable (displacing its holder onto the freed partner when
// compatible) or unmap it. Deterministic given the rng seed; never exceeds
// score_exact on the same pair.
inline SmatchScore smatch_score(const TripleSet& a, const TripleSet& b, int restarts,
                                std::mt19937_64& rng) {
  if (restarts < 1) restarts = 1;
  detail::MatchContext ctx(a, b);
  const std::size_t n = a.instances.size();

  int best = -1;
  VariableMap best_map;

  for (int restart = 0; restart < restarts; ++restart) {
    // initial greedy assignment; restarts after the first randomize the
    // assignment order and candidate choice
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    if (restart > 0) shuffle_in_place(rng, order);

    VariableMap map;
    std::unordered_set<std::string> used;
    for (std::size_t i : order) {
      std::vector<const std::string*> free_candidates;
      for (const auto& bvar : ctx.candidates[i])
        if (!used.count(bvar)) free_candidates.push_back(&bvar);
      if (free_candidates.empty()) continue;
      const std::string* pick =
          restart == 0 ? free_candidates.front()
                       : free_candidates[bounded_uint(rng, free_candidates.size())];
      map[a.instances[i].variable] = *pick;
      used.insert(*pick);
    }

    int f = ctx.overlap(map);
    // climb until no single-variable move improves f
    bool improved = true;
    while (improved) {
      improved = false;
      int best_delta = 0;
      VariableMap best_neighbor;
      for (std::size_t i = 0; i < n; ++i) {
        const std::string& avar = a.instances[i].variable;
        auto cur = map.find(avar);
        // unmap move
        if (cur != map.end()) {
          VariableMap neighbor = map;
          neighbor.erase(avar);
          int delta = ctx.overlap(neighbor) - f;
          if (delta > best_delta) {
            best_delta = delta;
            best_neighbor = std::move(neighbor);
          }
        }
        for (const auto& bvar : ctx.candidates[i]) {
          if (cur != map.end() && cur->second == bvar) continue;
          VariableMap neighbor = map;
          // find current holder of bvar, if any
          std::string holder;
          for (const auto& [av, bv] : map)
            if (bv == bvar && av != avar) {
              holder = av;
              break;
            }
          std::string freed = cur != map.end() ? cur->second : std::string();
          neighbor[avar] = bvar;
          if (!holder.empty()) {
            // swap partners when the holder can take the freed variable
            bool holder_compatible = false;
            if (!freed.empty()) {
              for (std::size_t j = 0; j < n; ++j)
                if (a.instances[j].variable == holder) {
                  for (const auto& c : ctx.candidates[j])
                    if (c == freed) {
                      holder_compatible = true;
                      break;
                    }
                  break;
                }
            }
            if (holder_compatible) {
              neighbor[holder] = freed;
            } else {
              neighbor.erase(holder);
            }
          }
          int delta = ctx.overlap(neighbor) - f;
          if (delta > best_delta) {
            best_delta = delta;
            best_neighbor = std::move(neighbor);
          }
        }
      }
      if (best_delta > 0) {
        map = std::move(best_neighbor);
        f += best_delta;
        improved = true;
      }
    }

    if (f > best) {
      best = f;
      best_map = std::move(map);
    }
  }
  return detail::finish_score(a, b, best < 0 ? 0 : best, std::move(best_map));
}

enum class SubgraphScoreMode { kF1, kRawF };

// SMATCH similarity between two subgraphs' induced triple sets: exact when
// both sides fit the exhaustive bound, hill climbing (fixed seed) otherwise.
inline double subgraph_similarity(const AmrGraph& g1, const Subgraph& s1, const AmrGraph& g2,
                                  const Subgraph& s2,
                                  SubgraphScoreMode mode = SubgraphScoreMode::kF1,
                                  int restarts = 4) {
  TripleSet a = induced_triples(g1, s1);
  TripleSet b = induced_triples(g2, s2);
  SmatchScore score;
  if (a.instances.size() <= kDefaultExactBound && b.instances.size() <= kDefaultExactBound) {
    score = score_exact(a, b);
  } else {
    std::mt19937_64 rng(0x5eedULL);
    score = smatch_score(a, b, restarts, rng);
  }
  return mode == SubgraphScoreMode::kF1 ? score.f1 : static_cast<double>(score.matched);
}

}  // namespace amredit
