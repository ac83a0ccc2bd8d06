// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mugie::detail {

enum class Tok {
  Ident,
  Keyword,
  Int,
  String,
  Punct,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

struct LexError {
  int line = 0;
  int column = 0;
  std::string message;
};

// Splits `source` into tokens, dropping whitespace and comments. Returns
// false and fills `error` on a malformed token.
bool tokenize(std::string_view source, std::vector<Token> &out, LexError &error);

bool is_ident_start(char c);
bool is_ident_char(char c);

} // namespace mugie::detail
