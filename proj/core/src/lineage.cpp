// SPDX-License-Identifier: Apache-2.0

#include "mugie/lineage.hpp"

#include <charconv>

namespace mugie {

using ivl::ClauseKind;

namespace {

template <class Int> std::optional<Int> parse_int(std::string_view s) {
  Int v{};
  if (s.empty())
    return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    return std::nullopt;
  return v;
}

std::optional<ClauseKind> parse_clause_kind(std::string_view s) {
  if (s == "requires") return ClauseKind::Requires;
  if (s == "ensures") return ClauseKind::Ensures;
  if (s == "invariant") return ClauseKind::Invariant;
  if (s == "assert") return ClauseKind::Assert;
  return std::nullopt;
}

// Splits on commas that are not nested inside parentheses.
std::vector<std::string_view> split_top_level(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(')
      ++depth;
    else if (s[i] == ')')
      --depth;
    else if (s[i] == ',' && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

// How many leading arguments are not plain integers, per operator.
struct Shape {
  bool path;
  bool clause;
  std::size_t ints;
};

Shape shape_of(OperatorKind k) {
  switch (k) {
  case OperatorKind::S1: return {false, false, 2};
  case OperatorKind::S5: return {true, false, 0};
  case OperatorKind::S6: return {false, false, 1};
  case OperatorKind::L1: return {true, false, 2};
  case OperatorKind::L2: return {true, false, 1};
  case OperatorKind::L4: return {true, false, 2};
  case OperatorKind::L5: return {true, false, 2};
  case OperatorKind::L6: return {true, true, 2};
  case OperatorKind::L8: return {true, false, 0};
  case OperatorKind::G1: return {true, true, 1};
  case OperatorKind::G2: return {false, false, 3};
  }
  return {false, false, 0};
}

} // namespace

std::string_view to_string(OperatorKind k) {
  switch (k) {
  case OperatorKind::S1: return "S1";
  case OperatorKind::S5: return "S5";
  case OperatorKind::S6: return "S6";
  case OperatorKind::L1: return "L1";
  case OperatorKind::L2: return "L2";
  case OperatorKind::L4: return "L4";
  case OperatorKind::L5: return "L5";
  case OperatorKind::L6: return "L6";
  case OperatorKind::L8: return "L8";
  case OperatorKind::G1: return "G1";
  case OperatorKind::G2: return "G2";
  }
  return "?";
}

std::optional<OperatorKind> parse_operator(std::string_view text) {
  for (auto k : kAllOperators)
    if (to_string(k) == text)
      return k;
  return std::nullopt;
}

std::string to_string(const NodePath &p) {
  std::string out = p.proc;
  if (p.body_ordinal > 0)
    out += "@" + std::to_string(p.body_ordinal);
  for (const auto &s : p.steps) {
    out += "/" + std::to_string(s.stmt);
    out += static_cast<char>(s.branch);
  }
  if (p.stmt)
    out += ":" + std::to_string(*p.stmt);
  return out;
}

std::optional<NodePath> parse_node_path(std::string_view text) {
  NodePath p;
  std::size_t end = text.find_first_of("@/:");
  p.proc = std::string(text.substr(0, end));
  if (p.proc.empty())
    return std::nullopt;
  text = end == std::string_view::npos ? std::string_view{} : text.substr(end);
  if (!text.empty() && text[0] == '@') {
    std::size_t stop = text.find_first_of("/:", 1);
    auto k = parse_int<std::size_t>(text.substr(1, stop == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : stop - 1));
    if (!k || *k == 0)
      return std::nullopt;
    p.body_ordinal = *k;
    text = stop == std::string_view::npos ? std::string_view{} : text.substr(stop);
  }
  while (!text.empty() && text[0] == '/') {
    std::size_t stop = text.find_first_of("/:", 1);
    std::string_view step =
        text.substr(1, stop == std::string_view::npos ? std::string_view::npos
                                                      : stop - 1);
    if (step.size() < 2)
      return std::nullopt;
    char b = step.back();
    if (b != 't' && b != 'e' && b != 'w')
      return std::nullopt;
    auto n = parse_int<std::size_t>(step.substr(0, step.size() - 1));
    if (!n)
      return std::nullopt;
    p.steps.push_back({*n, static_cast<Branch>(b)});
    text = stop == std::string_view::npos ? std::string_view{} : text.substr(stop);
  }
  if (!text.empty()) {
    if (text[0] != ':')
      return std::nullopt;
    auto n = parse_int<std::size_t>(text.substr(1));
    if (!n)
      return std::nullopt;
    p.stmt = *n;
  }
  return p;
}

std::string to_string(const Site &s) {
  std::string out(to_string(s.op));
  out += '(';
  Shape shape = shape_of(s.op);
  std::vector<std::string> parts;
  if (shape.path)
    parts.push_back(to_string(s.path));
  if (shape.clause)
    parts.emplace_back(ivl::to_string(s.clause));
  if (s.op == OperatorKind::G2 && s.args.size() == 3) {
    parts.push_back(std::to_string(s.args[0]) + ":" + std::to_string(s.args[1]));
    parts.push_back(std::to_string(s.args[2]));
  } else {
    for (auto a : s.args)
      parts.push_back(std::to_string(a));
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i)
      out += ',';
    out += parts[i];
  }
  out += ')';
  return out;
}

std::optional<Site> parse_site(std::string_view text) {
  auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')')
    return std::nullopt;
  auto op = parse_operator(text.substr(0, open));
  if (!op)
    return std::nullopt;
  Site s;
  s.op = *op;
  std::string_view inner = text.substr(open + 1, text.size() - open - 2);
  auto parts = split_top_level(inner);
  Shape shape = shape_of(*op);
  std::size_t idx = 0;
  if (shape.path) {
    if (idx >= parts.size())
      return std::nullopt;
    auto path = parse_node_path(parts[idx++]);
    if (!path)
      return std::nullopt;
    s.path = std::move(*path);
  }
  if (shape.clause) {
    if (idx >= parts.size())
      return std::nullopt;
    auto kind = parse_clause_kind(parts[idx++]);
    if (!kind)
      return std::nullopt;
    s.clause = *kind;
  }
  if (*op == OperatorKind::G2) {
    if (parts.size() != 2)
      return std::nullopt;
    auto colon = parts[0].find(':');
    if (colon == std::string_view::npos)
      return std::nullopt;
    auto d = parse_int<std::size_t>(parts[0].substr(0, colon));
    auto q = parse_int<std::size_t>(parts[0].substr(colon + 1));
    auto t = parse_int<std::size_t>(parts[1]);
    if (!d || !q || !t)
      return std::nullopt;
    s.args = {*d, *q, *t};
    return s;
  }
  if (parts.size() - idx != shape.ints)
    return std::nullopt;
  for (; idx < parts.size(); ++idx) {
    auto n = parse_int<std::size_t>(parts[idx]);
    if (!n)
      return std::nullopt;
    s.args.push_back(*n);
  }
  return s;
}

std::string lineage_ops(const std::vector<Site> &lineage) {
  std::string out;
  for (std::size_t i = 0; i < lineage.size(); ++i) {
    if (i)
      out += ',';
    out += to_string(lineage[i]);
  }
  return out;
}

std::optional<std::vector<Site>> parse_lineage_ops(std::string_view text) {
  std::vector<Site> out;
  if (text.empty())
    return out;
  for (auto part : split_top_level(text)) {
    auto s = parse_site(part);
    if (!s)
      return std::nullopt;
    out.push_back(std::move(*s));
  }
  return out;
}

std::string lineage_header(const MutantRecord &rec) {
  return std::string(kLineagePrefix) + "seed=" + rec.seed_name +
         " rng=" + std::to_string(rec.rng_seed) + " ops=" +
         lineage_ops(rec.lineage);
}

std::optional<MutantRecord> parse_lineage_header(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r'))
    line.remove_suffix(1);
  if (line.substr(0, kLineagePrefix.size()) != kLineagePrefix)
    return std::nullopt;
  line.remove_prefix(kLineagePrefix.size());

  // The seed basename may contain spaces; the rng and ops fields may not.
  auto rng_at = line.rfind(" rng=");
  auto ops_at = line.rfind(" ops=");
  if (line.substr(0, 5) != "seed=" || rng_at == std::string_view::npos ||
      ops_at == std::string_view::npos || ops_at < rng_at)
    return std::nullopt;
  MutantRecord rec;
  rec.seed_name = std::string(line.substr(5, rng_at - 5));
  auto rng = parse_int<std::uint64_t>(line.substr(rng_at + 5, ops_at - rng_at - 5));
  if (!rng)
    return std::nullopt;
  rec.rng_seed = *rng;
  auto ops = parse_lineage_ops(line.substr(ops_at + 5));
  if (!ops)
    return std::nullopt;
  rec.lineage = std::move(*ops);
  return rec;
}

} // namespace mugie
