#pragma once

#include <array>
#include <exception>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace netsample::cli {

inline constexpr std::array<std::string_view, 8> kCommands{
    "ingest", "generate", "sample", "resample", "estimate", "simulate", "oracle", "export"};

struct Artifact {
  std::string name;
  std::string content;
};

/// Files a command produces (manifest last) and a human summary for stdout.
struct CommandOutput {
  std::vector<Artifact> files;
  std::string summary;
};

/// Runs one command entirely in memory. Throws on any failure, so nothing is
/// written unless every artifact was produced.
CommandOutput execute(std::string_view command, const RunConfig& config);

/// Creates the output directory and writes each artifact atomically.
void write_artifacts(const std::filesystem::path& dir, const CommandOutput& output);

/// Resolved config plus command, version and artifact list.
std::string format_manifest(std::string_view command, const RunConfig& config,
                            const std::vector<Artifact>& artifacts);

/// Process exit status for an exception escaping execute() or parse_config().
int exit_status(const std::exception& e) noexcept;

/// `error: <kind>: <message>` on one line (newlines folded into `; `).
std::string error_line(const std::exception& e);

}  // namespace netsample::cli
