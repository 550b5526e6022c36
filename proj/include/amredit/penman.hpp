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

// AMR graphs in PENMAN notation: (var / concept :role child ...).
//
// A graph stores instances (variable -> concept), relations
// (variable -role-> variable) and attributes (variable -role-> constant)
// as flat lists in surface order. Reentrancy: a variable defined once may
// be referenced again as a bare token; the reference becomes an extra
// relation, never a second instance.
//
// The tree view resolves the graph to a spanning tree: a depth-first scan
// from the root in stored relation order claims each variable at its first
// occurrence; later edges to an already-claimed variable are reentrant.
// Depth is counted in edges, root at 0.

#pragma once

#include <cctype>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace amredit {

// ---------------------------------------------------------------------------
// Errors

enum class ParseErrorKind {
  // Broken expression structure: stray or missing parentheses, truncated
  // input, trailing content, a role with no target, nesting too deep.
  kUnbalancedParens,
  // The same variable is given a second "/ concept" instance.
  kDuplicateVariableInstance,
  // A parenthesized node introduces a variable without "/ concept"; variable
  // references must be bare tokens.
  kDanglingVariableReference,
  // "/" followed by no concept token.
  kEmptyConcept,
};

inline const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kUnbalancedParens: return "UnbalancedParens";
    case ParseErrorKind::kDuplicateVariableInstance: return "DuplicateVariableInstance";
    case ParseErrorKind::kDanglingVariableReference: return "DanglingVariableReference";
    case ParseErrorKind::kEmptyConcept: return "EmptyConcept";
  }
  return "ParseError";
}

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t offset, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message +
                           " (byte " + std::to_string(offset) + ")"),
        kind_(kind),
        offset_(offset) {}

  ParseErrorKind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  ParseErrorKind kind_;
  std::size_t offset_;
};

class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Graph model

struct Instance {
  std::string variable;
  std::string concept_name;
  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Relation {
  std::string source;
  std::string role;  // ":" + one or more non-space, non-parenthesis chars
  std::string target;
  friend bool operator==(const Relation&, const Relation&) = default;
};

struct Attribute {
  std::string source;
  std::string role;
  std::string constant;  // stored verbatim; quoted strings keep their quotes
  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct AmrGraph {
  std::string root;
  std::vector<Instance> instances;    // variable definition order
  std::vector<Relation> relations;    // surface order
  std::vector<Attribute> attributes;  // surface order

  bool has_variable(std::string_view v) const {
    for (const auto& inst : instances)
      if (inst.variable == v) return true;
    return false;
  }

  // Null if the variable is unknown.
  const std::string* concept_of(std::string_view v) const {
    for (const auto& inst : instances)
      if (inst.variable == v) return &inst.concept_name;
    return nullptr;
  }

  std::vector<std::string> variables() const {
    std::vector<std::string> vars;
    vars.reserve(instances.size());
    for (const auto& inst : instances) vars.push_back(inst.variable);
    return vars;
  }

  std::size_t size() const { return instances.size(); }

  void validate() const;

  friend bool operator==(const AmrGraph&, const AmrGraph&) = default;
};

inline bool is_valid_role(std::string_view role) {
  if (role.size() < 2 || role[0] != ':') return false;
  for (char c : role.substr(1)) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')') return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Tree view

struct TreeView {
  std::vector<std::string> preorder;  // depth-first order, root first
  std::unordered_map<std::string, std::string> parent;       // non-root only
  std::unordered_map<std::string, std::string> parent_role;  // non-root only
  std::unordered_map<std::string, int> depth;                // root = 0
  std::unordered_map<std::string, std::vector<std::string>> children;
  std::unordered_set<std::size_t> tree_edges;  // indices into graph.relations
  int max_depth = 0;

  // v plus all tree descendants, in depth-first order.
  std::vector<std::string> subtree_members(const std::string& v) const {
    std::vector<std::string> members;
    std::vector<const std::string*> stack{&v};
    while (!stack.empty()) {
      const std::string* cur = stack.back();
      stack.pop_back();
      members.push_back(*cur);
      auto it = children.find(*cur);
      if (it == children.end()) continue;
      for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit)
        stack.push_back(&*rit);
    }
    return members;
  }

  // Longest root-to-leaf edge count within the subtree rooted at v.
  int subtree_depth(const std::string& v) const {
    int base = depth.at(v);
    int deepest = base;
    for (const auto& m : subtree_members(v)) deepest = std::max(deepest, depth.at(m));
    return deepest - base;
  }

  bool is_ancestor(const std::string& anc, const std::string& v) const {
    std::string cur = v;
    while (true) {
      auto it = parent.find(cur);
      if (it == parent.end()) return false;
      if (it->second == anc) return true;
      cur = it->second;
    }
  }
};

// Builds the spanning-tree view. Throws InvariantViolation if some variable
// is unreachable from the root.
inline TreeView tree_view(const AmrGraph& g) {
  TreeView tv;
  if (g.root.empty() || !g.has_variable(g.root))
    throw InvariantViolation("root '" + g.root + "' has no instance");

  // relations grouped by source, preserving stored order
  std::unordered_map<std::string, std::vector<std::size_t>> by_source;
  for (std::size_t i = 0; i < g.relations.size(); ++i)
    by_source[g.relations[i].source].push_back(i);

  std::unordered_set<std::string> claimed{g.root};
  tv.depth[g.root] = 0;

  // Iterative DFS mirroring PENMAN text order: at each node, scan its
  // outgoing relations in stored order and descend into unclaimed targets.
  struct Frame {
    std::string var;
    std::size_t next = 0;
  };
  std::vector<Frame> stack{{g.root}};
  tv.preorder.push_back(g.root);
  while (!stack.empty()) {
    Frame& frame = stack.back();
    auto it = by_source.find(frame.var);
    if (it == by_source.end() || frame.next >= it->second.size()) {
      stack.pop_back();
      continue;
    }
    std::size_t edge = it->second[frame.next++];
    const Relation& rel = g.relations[edge];
    if (claimed.insert(rel.target).second) {
      tv.tree_edges.insert(edge);
      tv.parent[rel.target] = rel.source;
      tv.parent_role[rel.target] = rel.role;
      int d = tv.depth[rel.source] + 1;
      tv.depth[rel.target] = d;
      tv.max_depth = std::max(tv.max_depth, d);
      tv.children[rel.source].push_back(rel.target);
      tv.preorder.push_back(rel.target);
      stack.push_back({rel.target});
    }
  }

  if (claimed.size() != g.instances.size()) {
    for (const auto& inst : g.instances)
      if (!claimed.count(inst.variable))
        throw InvariantViolation("variable '" + inst.variable +
                                 "' is not reachable from the root");
  }
  return tv;
}

inline void AmrGraph::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& inst : instances) {
    if (!seen.insert(inst.variable).second)
      throw InvariantViolation("variable '" + inst.variable + "' has two instances");
    if (inst.concept_name.empty())
      throw InvariantViolation("variable '" + inst.variable + "' has an empty concept");
  }
  if (!seen.count(root)) throw InvariantViolation("root '" + root + "' has no instance");
  for (const auto& rel : relations) {
    if (!seen.count(rel.source))
      throw InvariantViolation("relation source '" + rel.source + "' is not a variable");
    if (!seen.count(rel.target))
      throw InvariantViolation("relation target '" + rel.target + "' is not a variable");
    if (!is_valid_role(rel.role))
      throw InvariantViolation("malformed role '" + rel.role + "'");
  }
  for (const auto& attr : attributes) {
    if (!seen.count(attr.source))
      throw InvariantViolation("attribute source '" + attr.source + "' is not a variable");
    if (!is_valid_role(attr.role))
      throw InvariantViolation("malformed role '" + attr.role + "'");
  }
  tree_view(*this);  // reachability
}

// ---------------------------------------------------------------------------
// Parser

namespace detail {

constexpr int kMaxNesting = 4096;

struct Token {
  enum Kind { kLParen, kRParen, kSlash, kRole, kString, kAtom, kEnd };
  Kind kind;
  std::string text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view input) : input_(input) {}

  Token next() {
    while (pos_ < input_.size() && std::isspace(static_cast<unsigned char>(input_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= input_.size()) return {Token::kEnd, "", start};
    char c = input_[pos_];
    if (c == '(') { ++pos_; return {Token::kLParen, "(", start}; }
    if (c == ')') { ++pos_; return {Token::kRParen, ")", start}; }
    if (c == '/') { ++pos_; return {Token::kSlash, "/", start}; }
    if (c == '"') {
      std::string text;
      text.push_back('"');
      ++pos_;
      while (pos_ < input_.size() && input_[pos_] != '"') {
        if (input_[pos_] == '\\' && pos_ + 1 < input_.size()) {
          text.push_back(input_[pos_++]);
        }
        text.push_back(input_[pos_++]);
      }
      if (pos_ >= input_.size())
        throw ParseError(ParseErrorKind::kUnbalancedParens, start, "unterminated string");
      text.push_back('"');
      ++pos_;
      return {Token::kString, std::move(text), start};
    }
    std::string text;
    while (pos_ < input_.size()) {
      char d = input_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '/' ||
          d == '"')
        break;
      text.push_back(d);
      ++pos_;
    }
    if (c == ':' && text.size() > 1) return {Token::kRole, std::move(text), start};
    return {Token::kAtom, std::move(text), start};
  }

 private:
  std::string_view input_;
  std::size_t pos_ = 0;
};

struct RawNode;

struct RawTarget {
  enum Kind { kNode, kReference, kConstant } kind;
  std::unique_ptr<RawNode> node;  // kNode
  std::string text;               // kReference (bare atom) / kConstant (string)
  std::size_t offset = 0;
};

struct RawBranch {
  std::string role;
  RawTarget target;
};

struct RawNode {
  std::string var;
  std::size_t var_offset = 0;
  std::string concept_name;
  std::vector<RawBranch> branches;
};

class Parser {
 public:
  explicit Parser(std::string_view input) : lexer_(input) { advance(); }

  RawNode parse_document() {
    if (current_.kind != Token::kLParen)
      throw ParseError(ParseErrorKind::kUnbalancedParens, current_.offset,
                       "expected '(' at start of graph");
    RawNode root = parse_node(0);
    if (current_.kind != Token::kEnd)
      throw ParseError(ParseErrorKind::kUnbalancedParens, current_.offset,
                       "trailing content after graph");
    return root;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  RawNode parse_node(int nesting) {
    if (nesting > kMaxNesting)
      throw ParseError(ParseErrorKind::kUnbalancedParens, current_.offset, "nesting too deep");
    // current_ is '('
    std::size_t open_offset = current_.offset;
    advance();
    RawNode node;
    if (current_.kind != Token::kAtom || current_.text.empty())
      throw ParseError(ParseErrorKind::kUnbalancedParens, current_.offset,
                       "expected a variable after '('");
    node.var = current_.text;
    node.var_offset = current_.offset;
    advance();
    if (current_.kind != Token::kSlash)
      throw ParseError(ParseErrorKind::kDanglingVariableReference, open_offset,
                       "node '(" + node.var + "' has no '/ concept'; references must be bare");
    advance();
    if (current_.kind != Token::kAtom || current_.text.empty())
      throw ParseError(ParseErrorKind::kEmptyConcept, current_.offset,
                       "expected a concept after '/'");
    node.concept_name = current_.text;
    advance();
    while (current_.kind == Token::kRole) {
      RawBranch branch;
      branch.role = current_.text;
      advance();
      branch.target.offset = current_.offset;
      switch (current_.kind) {
        case Token::kLParen:
          branch.target.kind = RawTarget::kNode;
          branch.target.node = std::make_unique<RawNode>(parse_node(nesting + 1));
          break;
        case Token::kString:
          branch.target.kind = RawTarget::kConstant;
          branch.target.text = current_.text;
          advance();
          break;
        case Token::kAtom:
          if (current_.text.empty())
            throw ParseError(ParseErrorKind::kUnbalancedParens, current_.offset,
                             "expected a target after role " + branch.role);
          branch.target.kind = RawTarget::kReference;
          branch.target.text = current_.text;
          advance();
          break;
        default:
          throw ParseError(ParseErrorKind::kUnbalancedParens, current_.offset,
                           "expected a target after role " + branch.role);
      }
      node.branches.push_back(std::move(branch));
    }
    if (current_.kind != Token::kRParen)
      throw ParseError(ParseErrorKind::kUnbalancedParens, current_.offset,
                       "expected ')' to close node '(" + node.var + "'");
    advance();
    return node;
  }

  Lexer lexer_;
  Token current_;
};

inline void collect_instances(const RawNode& node, AmrGraph& g,
                              std::unordered_set<std::string>& defined) {
  if (!defined.insert(node.var).second)
    throw ParseError(ParseErrorKind::kDuplicateVariableInstance, node.var_offset,
                     "variable '" + node.var + "' already has an instance");
  g.instances.push_back({node.var, node.concept_name});
  for (const auto& branch : node.branches)
    if (branch.target.kind == RawTarget::kNode)
      collect_instances(*branch.target.node, g, defined);
}

inline void collect_edges(const RawNode& node, AmrGraph& g,
                          const std::unordered_set<std::string>& defined) {
  for (const auto& branch : node.branches) {
    switch (branch.target.kind) {
      case RawTarget::kNode:
        g.relations.push_back({node.var, branch.role, branch.target.node->var});
        collect_edges(*branch.target.node, g, defined);
        break;
      case RawTarget::kReference:
        // A bare token is a reentrant variable reference when the variable is
        // defined anywhere in the expression; otherwise it is a constant.
        if (defined.count(branch.target.text)) {
          g.relations.push_back({node.var, branch.role, branch.target.text});
        } else {
          g.attributes.push_back({node.var, branch.role, branch.target.text});
        }
        break;
      case RawTarget::kConstant:
        g.attributes.push_back({node.var, branch.role, branch.target.text});
        break;
    }
  }
}

}  // namespace detail

// Parses one PENMAN expression. Whitespace (including newlines) between
// tokens is insignificant. Errors carry the byte offset of the offending
// token.
inline AmrGraph parse_penman(std::string_view text) {
  detail::Parser parser(text);
  detail::RawNode raw = parser.parse_document();
  AmrGraph g;
  g.root = raw.var;
  std::unordered_set<std::string> defined;
  detail::collect_instances(raw, g, defined);
  detail::collect_edges(raw, g, defined);
  return g;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

// Emits tokens for the subtree at var: tree-edge targets expand inline,
// reentrant targets emit as bare variables.
inline void emit_node(const AmrGraph& g, const TreeView& tv, const std::string& var,
                      std::vector<std::string>& out) {
  out.push_back("(");
  out.push_back(var);
  out.push_back("/");
  out.push_back(*g.concept_of(var));
  for (std::size_t i = 0; i < g.relations.size(); ++i) {
    const Relation& rel = g.relations[i];
    if (rel.source != var) continue;
    out.push_back(rel.role);
    if (tv.tree_edges.count(i)) {
      emit_node(g, tv, rel.target, out);
    } else {
      out.push_back(rel.target);
    }
  }
  for (const auto& attr : g.attributes) {
    if (attr.source != var) continue;
    out.push_back(attr.role);
    out.push_back(attr.constant);
  }
  out.push_back(")");
}

}  // namespace detail

// Depth-first token stream: "(", variable, "/", concept, roles and targets,
// ")". Joining the tokens with spaces parses back to the same graph.
inline std::vector<std::string> linearize(const AmrGraph& g) {
  TreeView tv = tree_view(g);  // throws InvariantViolation when disconnected
  std::vector<std::string> tokens;
  detail::emit_node(g, tv, g.root, tokens);
  return tokens;
}

// Single-line PENMAN text. Deterministic: children in stored order,
// attributes after relations per node. parse(serialize(g)) is isomorphic
// to g.
inline std::string serialize_penman(const AmrGraph& g) {
  std::vector<std::string> tokens = linearize(g);
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    // single space between tokens, none after '(' or before ')'
    if (i > 0 && tokens[i - 1] != "(" && tokens[i] != ")") out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace amredit
