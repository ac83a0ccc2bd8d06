// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace mugie::fixtures::detail {

// (file name, source text), sorted by name.
const std::vector<std::pair<std::string_view, std::string_view>> &corpus_sources();

} // namespace mugie::fixtures::detail
