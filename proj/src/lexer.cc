// Copyright 2026 The Facetalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lexer.h"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "facetalk/error.h"

namespace facetalk::internal {
namespace {

bool IsRunChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '-' || c == '\'';
}

std::optional<double> AsNumber(std::string_view run) {
  if (run.empty()) return std::nullopt;
  double value = 0;
  auto [ptr, ec] = std::from_chars(run.data(), run.data() + run.size(), value);
  if (ec != std::errc() || ptr != run.data() + run.size()) return std::nullopt;
  return value;
}

constexpr std::string_view kKeywords[] = {"between", "not",  "and",  "over",
                                          "on",      "all",  "best", "worst",
                                          "around",  "prefer"};

}  // namespace

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.position = i;
    if (c == '"') {
      std::string value;
      size_t j = i + 1;
      bool closed = false;
      while (j < text.size()) {
        if (text[j] == '\\' && j + 1 < text.size()) {
          value.push_back(text[j + 1]);
          j += 2;
          continue;
        }
        if (text[j] == '"') {
          closed = true;
          break;
        }
        value.push_back(text[j++]);
      }
      if (!closed) throw ParseError("unterminated string", i);
      t.kind = TokenKind::kString;
      t.text = std::move(value);
      i = j + 1;
    } else if (IsRunChar(c)) {
      size_t j = i;
      while (j < text.size() && IsRunChar(text[j])) ++j;
      std::string_view run = text.substr(i, j - i);
      if (auto n = AsNumber(run)) {
        t.kind = TokenKind::kNumber;
        t.number = *n;
      } else {
        t.kind = TokenKind::kWord;
      }
      t.text = std::string(run);
      i = j;
    } else {
      static constexpr std::string_view kSymbols[] = {"<=", ">=", "!=", "!~", "<",
                                                      ">",  "=",  "~",  ":",  ","};
      bool matched = false;
      for (std::string_view sym : kSymbols) {
        if (text.substr(i, sym.size()) == sym) {
          t.kind = TokenKind::kSymbol;
          t.text = std::string(sym);
          i += sym.size();
          matched = true;
          break;
        }
      }
      if (!matched) {
        throw ParseError(std::string("unexpected character '") + c + "'", i);
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.position = text.size();
  out.push_back(end);
  return out;
}

std::vector<std::pair<std::string_view, size_t>> SplitStatements(
    std::string_view text) {
  std::vector<std::pair<std::string_view, size_t>> out;
  size_t start = 0;
  bool quoted = false;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '\\' && quoted) {
      ++i;
      continue;
    }
    if (i < text.size() && text[i] == '"') quoted = !quoted;
    if (i == text.size() || (text[i] == ';' && !quoted)) {
      std::string_view piece = text.substr(start, i - start);
      if (piece.find_first_not_of(" \t\r\n") != std::string_view::npos) {
        out.emplace_back(piece, start);
      }
      start = i + 1;
    }
  }
  return out;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IEquals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && Lower(a) == Lower(b);
}

bool IsKeyword(std::string_view word) {
  std::string w = Lower(word);
  return std::find(std::begin(kKeywords), std::end(kKeywords), w) !=
         std::end(kKeywords);
}

std::string QuoteLabel(const std::string& label) {
  bool bare = !label.empty() && !IsKeyword(label) && !AsNumber(label) &&
              std::all_of(label.begin(), label.end(), IsRunChar);
  if (bare) return label;
  std::string out = "\"";
  for (char c : label) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

const SlotSchema* ResolveSlot(const KnowledgeBase& kb, std::string_view text) {
  for (const auto& s : kb.slots()) {
    if (s.name == text) return &s;
  }
  for (const auto& s : kb.slots()) {
    if (IEquals(s.name, text)) return &s;
  }
  for (const auto& s : kb.slots()) {
    for (const auto& [label, phrases] : s.synonyms) {
      if (label != s.name) continue;
      for (const auto& p : phrases) {
        if (IEquals(p, text)) return &s;
      }
    }
  }
  return nullptr;
}

std::optional<std::string> ResolveLabel(const KnowledgeBase& kb,
                                        const SlotSchema& slot,
                                        std::string_view text) {
  const auto& domain = kb.Domain(slot.name);
  if (slot.kind != SlotKind::kNumeric) {
    for (const auto& l : domain) {
      if (l == text) return l;
    }
    for (const auto& l : domain) {
      if (IEquals(l, text)) return l;
    }
    for (const auto& [label, phrases] : slot.synonyms) {
      if (label == slot.name) continue;
      for (const auto& p : phrases) {
        if (IEquals(p, text)) return label;
      }
    }
  }
  return std::nullopt;
}

Scalar ParseValue(TokenCursor& cur, const SlotSchema& slot,
                    const KnowledgeBase& kb) {
  const auto& t = cur.Peek();
  if (t.kind == TokenKind::kEnd || t.kind == TokenKind::kSymbol) {
    throw ParseError("expected a value", t.position);
  }
  if (slot.kind == SlotKind::kNumeric) {
    if (t.kind != TokenKind::kNumber) {
      throw ParseError("slot '" + slot.name + "' expects a number", t.position);
    }
    return cur.Next().number;
  }
  if (t.kind == TokenKind::kString || t.kind == TokenKind::kNumber) {
    size_t pos = t.position;
    std::string text = cur.Next().text;
    if (auto label = ResolveLabel(kb, slot, text)) return *label;
    throw Error(ErrorCode::kNotFound, "unknown value '" + text + "' for slot '" +
                                          slot.name + "' at position " +
                                          std::to_string(pos));
  }
  // Bare words: take the longest run of non-keyword words that names a label.
  std::vector<std::string> words;
  for (size_t k = 0;; ++k) {
    const auto& w = cur.Peek(k);
    if (w.kind != TokenKind::kWord || IsKeyword(w.text)) break;
    words.push_back(w.text);
  }
  if (words.empty()) throw ParseError("expected a value", t.position);
  for (size_t n = words.size(); n > 0; --n) {
    std::string phrase = words[0];
    for (size_t k = 1; k < n; ++k) phrase += " " + words[k];
    if (auto label = ResolveLabel(kb, slot, phrase)) {
      for (size_t k = 0; k < n; ++k) cur.Next();
      return *label;
    }
  }
  throw Error(ErrorCode::kNotFound, "unknown value '" + words[0] +
                                        "' for slot '" + slot.name +
                                        "' at position " +
                                        std::to_string(t.position));
}

const Token& TokenCursor::Peek(size_t ahead) const {
  size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
  return tokens_[i];
}

const Token& TokenCursor::Next() {
  const Token& t = Peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenCursor::PeekKeyword(std::string_view word, size_t ahead) const {
  const Token& t = Peek(ahead);
  return t.kind == TokenKind::kWord && IEquals(t.text, word);
}

bool TokenCursor::AcceptKeyword(std::string_view word) {
  if (!PeekKeyword(word)) return false;
  Next();
  return true;
}

void TokenCursor::ExpectKeyword(std::string_view word) {
  if (!AcceptKeyword(word)) {
    throw ParseError("expected '" + std::string(word) + "'", Peek().position);
  }
}

bool TokenCursor::AcceptSymbol(std::string_view symbol) {
  const Token& t = Peek();
  if (t.kind != TokenKind::kSymbol || t.text != symbol) return false;
  Next();
  return true;
}

void TokenCursor::ExpectEnd() {
  if (!AtEnd()) throw ParseError("unexpected trailing input", Peek().position);
}

}  // namespace facetalk::internal
