// SPDX-License-Identifier: Apache-2.0

#include "mugie/fixtures.hpp"

#include <stdexcept>

#include "corpus_data.hpp"
#include "mugie/parser.hpp"

namespace mugie::fixtures {

std::string_view listing1_source() {
  for (const auto &[name, text] : detail::corpus_sources())
    if (name == "listing1.bpl")
      return text;
  throw std::logic_error("listing1.bpl missing from the corpus");
}

ivl::Program build_listing1() { return corpus_program("listing1.bpl").program; }

const std::vector<CorpusProgram> &corpus() {
  static const std::vector<CorpusProgram> programs = [] {
    std::vector<CorpusProgram> out;
    for (const auto &[name, text] : detail::corpus_sources()) {
      auto checked = parse_and_check(text, std::string(name));
      if (!checked.ok())
        throw std::logic_error("corpus program " + std::string(name) +
                               " is invalid:\n" + checked.error_text());
      out.push_back({std::string(name), text, checked->program()});
    }
    return out;
  }();
  return programs;
}

const CorpusProgram &corpus_program(std::string_view name) {
  for (const auto &p : corpus())
    if (p.name == name)
      return p;
  throw std::out_of_range("no corpus program named " + std::string(name));
}

std::filesystem::path corpus_dir() { return MUGIE_CORPUS_DIR; }

std::filesystem::path mock_verifier() { return MUGIE_MOCK_VERIFIER; }

std::string mock_command(const std::vector<std::string> &behavior) {
  auto quote = [](const std::string &s) {
    if (s.find('\'') != std::string::npos)
      throw std::invalid_argument("mock parameter contains a single quote");
    return "'" + s + "'";
  };
  std::string cmd = quote(mock_verifier().string());
  for (const auto &b : behavior)
    cmd += " " + quote(b);
  return cmd + " {files}";
}

} // namespace mugie::fixtures
