#pragma once

// Provenance record written next to every output file.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace apqho {

const char* library_version() noexcept;

struct RunManifest {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    std::uint64_t seed = 0;
    std::string version = library_version();
    std::string timestamp;  // UTC, ISO 8601
    /// Command-line arguments after the subcommand; replaying them
    /// reproduces the outputs.
    std::vector<std::string> arguments;

    nlohmann::ordered_json to_json() const;
    static RunManifest from_json(const nlohmann::ordered_json& j);
};

std::string utc_timestamp();

/// `<output>.manifest.json`.
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace apqho
