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

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace amredit {

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

// Word tokenization shared by the diversity metrics, TRI matching, and the
// lexical similarity provider: case-folded maximal runs of alphanumeric
// characters. Bytes >= 0x80 are kept so multi-byte UTF-8 sequences stay in
// one token; everything else (whitespace and punctuation) separates tokens.
inline std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// Stopwords pruned from TRI n-gram candidates.
inline const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> kWords = {
      "a",     "an",    "the",   "and",   "or",    "but",   "if",    "of",
      "to",    "in",    "on",    "at",    "for",   "with",  "from",  "by",
      "is",    "are",   "was",   "were",  "be",    "been",  "being", "am",
      "do",    "does",  "did",   "not",   "no",    "this",  "that",  "these",
      "those", "it",    "its",   "as",    "we",    "you",   "they",  "he",
      "she",   "i",     "me",    "my",    "our",   "your",  "their", "them",
      "him",   "her",   "us",    "what",  "which", "who",   "whom",  "will",
      "would", "can",   "could", "should", "shall", "may",  "might", "must",
      "have",  "has",   "had",   "about", "into",  "over",  "under", "there",
      "here",  "when",  "where", "why",   "how",   "all",   "any",   "both",
      "each",  "few",   "more",  "most",  "some",  "such",  "only",  "own",
      "same",  "so",    "than",  "too",   "very",  "just",  "also",  "s",
      "t",     "don",   "now",   "then",  "up",    "down",  "out",   "off"};
  return kWords;
}

inline bool is_stopword(const std::string& token) {
  return stopwords().count(token) > 0;
}

// Strips a trailing sense suffix ("-01", "-91", ...) from an AMR concept.
inline std::string strip_sense_suffix(std::string_view concept_name) {
  auto dash = concept_name.rfind('-');
  if (dash == std::string_view::npos || dash + 1 >= concept_name.size())
    return std::string(concept_name);
  for (std::size_t i = dash + 1; i < concept_name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(concept_name[i])))
      return std::string(concept_name);
  return std::string(concept_name.substr(0, dash));
}

// Strips one layer of surrounding double quotes from a constant.
inline std::string strip_quotes(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return std::string(s.substr(1, s.size() - 2));
  return std::string(s);
}

// Splits a command line into argv tokens. Single and double quotes group;
// backslash escapes the next character outside single quotes. No variable
// expansion or globbing is performed.
inline std::vector<std::string> shell_split(std::string_view command) {
  std::vector<std::string> argv;
  std::string current;
  bool in_token = false;
  char quote = '\0';
  for (std::size_t i = 0; i < command.size(); ++i) {
    char c = command[i];
    if (quote == '\'') {
      if (c == '\'') {
        quote = '\0';
      } else {
        current.push_back(c);
      }
      continue;
    }
    if (c == '\\' && i + 1 < command.size()) {
      current.push_back(command[++i]);
      in_token = true;
      continue;
    }
    if (quote == '"') {
      if (c == '"') {
        quote = '\0';
      } else {
        current.push_back(c);
      }
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_token || !current.empty()) {
        argv.push_back(std::move(current));
        current.clear();
        in_token = false;
      }
      continue;
    }
    current.push_back(c);
    in_token = true;
  }
  if (quote != '\0') throw std::invalid_argument("unterminated quote in command");
  if (in_token || !current.empty()) argv.push_back(std::move(current));
  return argv;
}

}  // namespace amredit
