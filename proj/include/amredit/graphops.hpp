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

// Structural editing of AMR graphs: depth metrics, subtree enumeration,
// attribute filtering, keyword protection, and stochastic subtree deletion.

#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "amredit/penman.hpp"
#include "amredit/random.hpp"
#include "amredit/text.hpp"

namespace amredit {

class UnknownVariable : public std::runtime_error {
 public:
  explicit UnknownVariable(const std::string& var)
      : std::runtime_error("unknown variable '" + var + "'") {}
};

// A subtree of the tree view, identified by its root variable.
struct Subgraph {
  std::string root;
  std::vector<std::string> members;  // root plus all tree descendants
  int depth = 0;                     // longest root-to-leaf edge count inside
};

struct DeletionPolicy {
  double alpha = 0.35;   // depth-ratio threshold
  double mu = 0.5;       // deletion-rate Gaussian mean
  double sigma2 = 0.1;   // deletion-rate Gaussian variance
  std::vector<std::string> attribute_roles = default_attribute_roles();

  // :mod, :wiki, :quant, :value plus every numbered :opN role.
  static std::vector<std::string> default_attribute_roles() {
    return {":mod", ":wiki", ":quant", ":value", ":op*"};
  }
};

// Variables whose concept or attribute constants match a protected keyword,
// plus (for deletion purposes) their tree ancestors.
struct TriProtection {
  std::vector<std::string> keywords;
  std::unordered_set<std::string> protected_variables;
  std::unordered_set<std::string> non_deletable;  // protected + tree ancestors
};

// A role pattern is an exact role or a prefix with trailing '*', which
// matches the prefix followed by one or more digits (":op*" -> :op1, :op2).
inline bool role_matches(const std::string& pattern, const std::string& role) {
  if (!pattern.empty() && pattern.back() == '*') {
    std::string_view prefix(pattern.data(), pattern.size() - 1);
    if (role.size() <= prefix.size() || role.compare(0, prefix.size(), prefix) != 0)
      return false;
    for (std::size_t i = prefix.size(); i < role.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(role[i]))) return false;
    return true;
  }
  return pattern == role;
}

inline bool role_in(const std::vector<std::string>& patterns, const std::string& role) {
  for (const auto& p : patterns)
    if (role_matches(p, role)) return true;
  return false;
}

// depth(subtree at subgraph_root) / depth(whole tree). A single-node graph
// has depth 0; by decision its only ratio is 1.0.
inline double depth_ratio(const AmrGraph& g, const std::string& subgraph_root) {
  if (!g.has_variable(subgraph_root)) throw UnknownVariable(subgraph_root);
  TreeView tv = tree_view(g);
  if (tv.max_depth == 0) return 1.0;
  return static_cast<double>(tv.subtree_depth(subgraph_root)) /
         static_cast<double>(tv.max_depth);
}

// One subtree per non-root variable, in depth-first surface order. The
// root's own (full) tree is excluded.
inline std::vector<Subgraph> enumerate_subgraphs(const AmrGraph& g) {
  TreeView tv = tree_view(g);
  std::vector<Subgraph> subgraphs;
  for (const auto& v : tv.preorder) {
    if (v == g.root) continue;
    subgraphs.push_back({v, tv.subtree_members(v), tv.subtree_depth(v)});
  }
  return subgraphs;
}

namespace detail {

// keyword match: equal to the folded keyword, or one of its word tokens
inline bool matches_keyword(const std::string& folded_term, const std::string& keyword) {
  std::string folded_keyword = ascii_lower(keyword);
  if (folded_term == folded_keyword) return true;
  for (const auto& tok : tokenize_words(keyword))
    if (folded_term == tok) return true;
  return false;
}

}  // namespace detail

// A variable is protected when its concept (sense suffix stripped,
// case-folded) or one of its attribute constants (quotes stripped,
// case-folded) equals a keyword or one of a keyword's tokens. Tree ancestors
// of protected variables become non-deletable: removing an ancestor would
// remove the protected node with it.
inline TriProtection match_tri(const AmrGraph& g, const std::vector<std::string>& keywords) {
  TriProtection protection;
  protection.keywords = keywords;
  if (keywords.empty()) return protection;

  for (const auto& inst : g.instances) {
    std::string folded = ascii_lower(strip_sense_suffix(inst.concept_name));
    for (const auto& kw : keywords) {
      if (detail::matches_keyword(folded, kw)) {
        protection.protected_variables.insert(inst.variable);
        break;
      }
    }
  }
  for (const auto& attr : g.attributes) {
    if (protection.protected_variables.count(attr.source)) continue;
    std::string folded = ascii_lower(strip_quotes(attr.constant));
    for (const auto& kw : keywords) {
      if (detail::matches_keyword(folded, kw)) {
        protection.protected_variables.insert(attr.source);
        break;
      }
    }
  }

  protection.non_deletable = protection.protected_variables;
  if (!protection.protected_variables.empty()) {
    TreeView tv = tree_view(g);
    for (const auto& v : protection.protected_variables) {
      std::string cur = v;
      auto it = tv.parent.find(cur);
      while (it != tv.parent.end()) {
        protection.non_deletable.insert(it->second);
        it = tv.parent.find(it->second);
      }
    }
  }
  return protection;
}

// Removes attribute triples whose role is in policy.attribute_roles, except
// attributes attached to protected variables. Instances are never touched.
inline AmrGraph filter_attributes(const AmrGraph& g, const DeletionPolicy& policy,
                                  const TriProtection& protection) {
  AmrGraph out = g;
  out.attributes.clear();
  for (const auto& attr : g.attributes) {
    bool removable = role_in(policy.attribute_roles, attr.role) &&
                     !protection.protected_variables.count(attr.source);
    if (!removable) out.attributes.push_back(attr);
  }
  return out;
}

namespace detail {

inline AmrGraph remove_variables(const AmrGraph& g,
                                 const std::unordered_set<std::string>& removed) {
  AmrGraph out;
  out.root = g.root;
  for (const auto& inst : g.instances)
    if (!removed.count(inst.variable)) out.instances.push_back(inst);
  for (const auto& rel : g.relations)
    if (!removed.count(rel.source) && !removed.count(rel.target))
      out.relations.push_back(rel);
  for (const auto& attr : g.attributes)
    if (!removed.count(attr.source)) out.attributes.push_back(attr);
  return out;
}

}  // namespace detail

// Stochastic subtree deletion. Candidates are the non-root subtrees with
// depth ratio < alpha that contain no protected variable. A deletion rate
// eps ~ N(mu, sigma2) clamped to [0,1] selects floor(eps * |candidates|)
// candidates uniformly without replacement; a selected candidate already
// removed as part of an earlier deletion is skipped. Deleting a subtree
// removes its members, their instances and attributes, and every relation
// touching a removed variable, so the result stays rooted-connected.
inline AmrGraph delete_subgraphs(const AmrGraph& g, const DeletionPolicy& policy,
                                 const TriProtection& protection, std::mt19937_64& rng) {
  TreeView tv = tree_view(g);
  std::vector<std::string> candidates;
  for (const auto& v : tv.preorder) {
    if (v == g.root) continue;
    if (protection.non_deletable.count(v)) continue;
    double ratio = tv.max_depth == 0
                       ? 1.0
                       : static_cast<double>(tv.subtree_depth(v)) / tv.max_depth;
    if (ratio < policy.alpha) candidates.push_back(v);
  }

  double eps = sample_clamped_normal(rng, policy.mu, policy.sigma2);
  std::size_t count = static_cast<std::size_t>(
      std::floor(eps * static_cast<double>(candidates.size())));
  if (count == 0) return g;

  std::vector<std::size_t> selection = sample_without_replacement(rng, candidates.size(), count);
  std::unordered_set<std::string> removed;
  for (std::size_t idx : selection) {
    const std::string& v = candidates[idx];
    if (removed.count(v)) continue;  // nested inside an earlier deletion
    for (auto& member : tv.subtree_members(v)) removed.insert(std::move(member));
  }
  if (removed.empty()) return g;
  return detail::remove_variables(g, removed);
}

}  // namespace amredit
