// SPDX-License-Identifier: Apache-2.0
// Helpers shared by the subcommands.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mugie/genloop.hpp"
#include "mugie/harness.hpp"

namespace mugie::cli {

std::optional<std::string> read_text(const std::filesystem::path &path);

// Creates parent directories. Throws on failure.
void write_text(const std::filesystem::path &path, const std::string &text);

// Last path component, ignoring a trailing separator.
std::string directory_name(const std::filesystem::path &dir);

std::vector<ProgramJob> jobs_for(const std::vector<ProgramFiles> &programs,
                                 const std::string &batch);

// "Verified 3, VerificationFailure 1, ToolError 0, Timeout 0"
std::string verdict_summary(const std::vector<CampaignRow> &rows);

// Prints the first few launch failures; returns how many rows failed to launch.
int report_launch_errors(const std::vector<CampaignRow> &rows, std::ostream &err);

} // namespace mugie::cli
