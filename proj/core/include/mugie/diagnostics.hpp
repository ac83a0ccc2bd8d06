// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mugie {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string file;
  int line = 0;
  int column = 0;
  std::string message;

  // `file:line:col: error: message`
  std::string str() const;
};

// A value, or the diagnostics explaining why there is none. Any Error
// diagnostic means `value` is empty.
template <class T> struct Result {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
  const T &operator*() const { return *value; }
  T &operator*() { return *value; }
  const T *operator->() const { return &*value; }

  static Result success(T v) { return Result{std::move(v), {}}; }
  static Result failure(std::vector<Diagnostic> d) {
    return Result{std::nullopt, std::move(d)};
  }

  std::string error_text() const {
    std::string out;
    for (const auto &d : diagnostics) {
      out += d.str();
      out += '\n';
    }
    return out;
  }
};

} // namespace mugie
