#pragma once

// Batch commands behind the `spinorbit` executable. Each writes its files
// under `out` and returns their paths relative to it.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinorbit/config.hpp"

namespace spinorbit {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ReportFormat { Csv, Json };

struct CommandOptions {
  std::filesystem::path out = "out";
  ReportFormat format = ReportFormat::Csv;
  std::optional<std::uint64_t> seed;  // overrides the config seed
};

using FileList = std::vector<std::filesystem::path>;

FileList cmd_simulate(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
FileList cmd_chsh(const std::filesystem::path& counts_csv, const ChshConfig& settings, const CommandOptions& opts,
                  std::ostream& table);
FileList cmd_fringes(const std::filesystem::path& counts_csv, bool free_frequency, const CommandOptions& opts,
                     std::ostream& table);
// `state_file`, when given, holds a state in the canonical text form and
// replaces the configured input + pipeline.
FileList cmd_render(const RunConfig& cfg, const std::optional<std::filesystem::path>& state_file,
                    const CommandOptions& opts, std::ostream& log);
FileList cmd_reproduce_paper(const CommandOptions& opts, std::ostream& log);

// Settings used by reproduce-paper for every experiment.
RunConfig reproduction_config(std::uint64_t seed);

struct RunManifest {
  std::string command;
  std::string config_yaml;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  FileList outputs;
  double wall_clock_s = 0.0;
};

// The manifest sits next to the output directory (`<out>.manifest.json`) so
// the directory itself only holds reproducible data.
std::filesystem::path manifest_path(const std::filesystem::path& out);
// Writes to a temporary file and renames it into place.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& out);

}  // namespace spinorbit
