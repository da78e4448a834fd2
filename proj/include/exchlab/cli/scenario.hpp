#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace exchlab::cli {

using json = nlohmann::json;

[[nodiscard]] const std::vector<std::string>& commands();

/// Full configuration with every parameter at its default:
///   {"command": ..., "seed": ..., "params": {...}}
[[nodiscard]] json default_config(const std::string& command);

/// Merges `user` over the defaults. Unknown keys and type mismatches throw
/// ConfigInvalid listing every difference.
[[nodiscard]] json resolve_config(const std::string& command, const json& user);

struct RunOptions {
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

struct RunSummary {
  json manifest;
  std::vector<std::filesystem::path> outputs;
};

/// Runs one scenario and writes its artifacts plus manifest.json into
/// options.out. The manifest's "config" member is itself a valid config.
RunSummary run(const std::string& command, const json& config, const RunOptions& options);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Command-line entry point; returns the process exit status.
int main_entry(int argc, char** argv);

}  // namespace exchlab::cli
