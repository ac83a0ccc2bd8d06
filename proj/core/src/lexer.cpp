// SPDX-License-Identifier: Apache-2.0

#include "lexer.hpp"

#include <array>
#include <cctype>
#include <set>

namespace mugie::detail {

namespace {

const std::set<std::string, std::less<>> kKeywords = {
    "type",     "const",     "unique",   "var",       "function",
    "axiom",    "procedure", "implementation",        "returns",
    "requires", "ensures",   "modifies", "free",      "invariant",
    "assert",   "assume",    "havoc",    "call",      "if",
    "else",     "while",     "return",   "forall",    "exists",
    "old",      "true",      "false",    "int",       "bool",
    "div",      "mod",
};

// Longest first so that maximal munch works with a linear scan.
constexpr std::array<std::string_view, 27> kPuncts = {
    "<==>", "==>", "<==", "::", ":=", "==", "!=", "<=", ">=", "&&",
    "||",   "<:",  "{:",  "(",  ")",  "[",  "]",  "{",  "}",  ",",
    ";",    ":",   "<",   ">",  "+",  "-",  "!",
};

} // namespace

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '$' || c == '#' || c == '\'' || c == '?' || c == '^' ||
         c == '~' || c == '`';
}

bool is_ident_char(char c) {
  return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

bool tokenize(std::string_view src, std::vector<Token> &out, LexError &error) {
  std::size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto fail = [&](std::string message) {
    error = {line, col, std::move(message)};
    return false;
  };

  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      int sl = line, sc = col;
      advance(2);
      int depth = 1;
      while (i < src.size() && depth > 0) {
        if (src.substr(i, 2) == "/*") {
          ++depth;
          advance(2);
        } else if (src.substr(i, 2) == "*/") {
          --depth;
          advance(2);
        } else {
          advance(1);
        }
      }
      if (depth > 0) {
        error = {sl, sc, "unterminated block comment"};
        return false;
      }
      continue;
    }

    Token tok;
    tok.line = line;
    tok.column = col;

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      if (j < src.size() && src[j] == '.' && j + 1 < src.size() &&
          std::isdigit(static_cast<unsigned char>(src[j + 1])))
        return fail("real literals are not supported");
      if (j + 1 < src.size() && src.substr(j, 2) == "bv")
        return fail("bitvector literals are not supported");
      if (j < src.size() && src[j] == 'e' && j + 1 < src.size() &&
          std::isdigit(static_cast<unsigned char>(src[j + 1])))
        return fail("real literals are not supported");
      std::string digits(src.substr(i, j - i));
      auto nz = digits.find_first_not_of('0');
      tok.kind = Tok::Int;
      tok.text = nz == std::string::npos ? "0" : digits.substr(nz);
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }

    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j]))
        ++j;
      tok.text = std::string(src.substr(i, j - i));
      tok.kind = kKeywords.count(tok.text) ? Tok::Keyword : Tok::Ident;
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }

    if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') {
        if (src[j] == '\\' && j + 1 < src.size())
          ++j;
        ++j;
      }
      if (j >= src.size() || src[j] != '"')
        return fail("unterminated string literal");
      tok.kind = Tok::String;
      tok.text = std::string(src.substr(i, j + 1 - i));
      advance(j + 1 - i);
      out.push_back(std::move(tok));
      continue;
    }

    bool matched = false;
    for (auto p : kPuncts) {
      if (src.substr(i, p.size()) == p) {
        tok.kind = Tok::Punct;
        tok.text = std::string(p);
        advance(p.size());
        out.push_back(std::move(tok));
        matched = true;
        break;
      }
    }
    if (matched)
      continue;

    // Single characters that are tokens but never valid in the subset get
    // their own diagnostics in the parser; everything else is garbage.
    if (c == '*' || c == '/' || c == '%' || c == '=' || c == '|' || c == '&' ||
        c == '@') {
      tok.kind = Tok::Punct;
      tok.text = std::string(1, c);
      advance(1);
      out.push_back(std::move(tok));
      continue;
    }
    return fail(std::string("unexpected character '") + c + "'");
  }

  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(std::move(end));
  return true;
}

} // namespace mugie::detail
