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

// Tokenizer shared by the constraint and preference grammars.

#ifndef FACETALK_SRC_LEXER_H_
#define FACETALK_SRC_LEXER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "facetalk/kb.h"

namespace facetalk::internal {

enum class TokenKind { kWord, kNumber, kString, kSymbol, kEnd };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;  // unquoted for strings
  double number = 0;
  size_t position = 0;
};

// Throws ParseError on an unterminated string or a stray character.
std::vector<Token> Tokenize(std::string_view text);

// Splits on ';' outside quotes.
std::vector<std::pair<std::string_view, size_t>> SplitStatements(
    std::string_view text);

std::string Lower(std::string_view s);
bool IEquals(std::string_view a, std::string_view b);

bool IsKeyword(std::string_view word);
// Bare when the label tokenizes back to one word; quoted otherwise.
std::string QuoteLabel(const std::string& label);

// Slot by name or slot cue synonym, case-insensitive.
const SlotSchema* ResolveSlot(const KnowledgeBase& kb, std::string_view text);
// Label by exact name or synonym phrase, case-insensitive.
std::optional<std::string> ResolveLabel(const KnowledgeBase& kb,
                                        const SlotSchema& slot,
                                        std::string_view text);

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& Peek(size_t ahead = 0) const;
  const Token& Next();
  bool AtEnd() const { return Peek().kind == TokenKind::kEnd; }
  bool PeekKeyword(std::string_view word, size_t ahead = 0) const;
  bool AcceptKeyword(std::string_view word);
  void ExpectKeyword(std::string_view word);
  bool AcceptSymbol(std::string_view symbol);
  void ExpectEnd();

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

// Operand for `slot`: a number for numeric slots, otherwise a label given as
// a quoted string or the longest run of bare words naming a label.
Scalar ParseValue(TokenCursor& cur, const SlotSchema& slot,
                  const KnowledgeBase& kb);

}  // namespace facetalk::internal

#endif  // FACETALK_SRC_LEXER_H_
