// SPDX-License-Identifier: Apache-2.0
//
// Small hand-written programs and a scriptable fake verifier for tests.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mugie/ast.hpp"

namespace mugie::fixtures {

// Five declarations: function h, its axiom, const a, its axiom, procedure p.
ivl::Program build_listing1();
std::string_view listing1_source();

struct CorpusProgram {
  std::string name; // file name, e.g. "listing1.bpl"
  std::string_view source;
  ivl::Program program;
};

// Every program parses and typechecks. Sorted by name.
const std::vector<CorpusProgram> &corpus();

// Throws std::out_of_range for an unknown name.
const CorpusProgram &corpus_program(std::string_view name);

// The directory the corpus was built from (source tree).
std::filesystem::path corpus_dir();

// Fake verifier, run as `mock-verifier.sh <behavior> [params...] <files...>`:
//
//   always-verify
//   always-fail [verification|type]      default: type
//   fail-on-marker MARKER                fails when a file contains MARKER
//                                        (comment lines dropped, lines
//                                        joined with spaces)
//   sleep-then-verify SECONDS
//   flaky-timeout COUNTERFILE K          hangs on runs 1..K-1, then verifies
std::filesystem::path mock_verifier();

// Command template for ToolSpec, quoting the parameters.
std::string mock_command(const std::vector<std::string> &behavior);

} // namespace mugie::fixtures
