// SPDX-License-Identifier: Apache-2.0

#include "mugie/ast.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

#include "mugie/printer.hpp"

namespace mugie::ivl {

ExprPtr make_expr(Expr::Node node, SourceLoc loc) {
  return ExprPtr(Expr{std::move(node), loc});
}

ExprPtr make_bool(bool value, SourceLoc loc) {
  return make_expr(BoolLit{value}, loc);
}

ExprPtr make_not(ExprPtr operand) {
  SourceLoc loc = operand ? operand->loc : SourceLoc{};
  return make_expr(Unary{UnaryOp::Not, std::move(operand)}, loc);
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  SourceLoc loc = lhs ? lhs->loc : SourceLoc{};
  return make_expr(Binary{op, std::move(lhs), std::move(rhs)}, loc);
}

std::size_t local_decl_count(const Block &body) {
  std::size_t n = 0;
  while (n < body.size() && body[n].is<LocalVarDecl>())
    ++n;
  return n;
}

std::string_view to_string(ClauseKind kind) {
  switch (kind) {
  case ClauseKind::Requires: return "requires";
  case ClauseKind::Ensures: return "ensures";
  case ClauseKind::Invariant: return "invariant";
  case ClauseKind::Assert: return "assert";
  }
  return "?";
}

Program normalize(Program p) {
  for (auto &d : p.declarations) {
    if (auto *proc = d.as<ProcedureDecl>())
      proc->explicit_returns = true;
    else if (auto *impl = d.as<ImplementationDecl>())
      impl->explicit_returns = true;
  }
  return p;
}

namespace {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(),
                 nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

} // namespace

Fingerprint program_fingerprint(const Program &p) {
  return {sha256_hex(print(p))};
}

Fingerprint unit_fingerprint(const Program &primary,
                             const std::optional<Program> &companion) {
  std::string text = print(primary);
  if (companion) {
    text += '\0';
    text += print(*companion);
  }
  return {sha256_hex(text)};
}

} // namespace mugie::ivl
