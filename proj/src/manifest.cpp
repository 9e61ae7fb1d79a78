#include "apqho/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "apqho/errors.hpp"

namespace apqho {

const char* library_version() noexcept { return APQHO_VERSION; }

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["version"] = version;
    j["timestamp"] = timestamp;
    j["arguments"] = arguments;
    return j;
}

RunManifest RunManifest::from_json(const nlohmann::ordered_json& j) {
    try {
        RunManifest m;
        m.subcommand = j.at("subcommand").get<std::string>();
        m.inputs = j.at("inputs").get<std::vector<std::string>>();
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
        m.parameters = j.at("parameters");
        m.seed = j.at("seed").get<std::uint64_t>();
        m.version = j.at("version").get<std::string>();
        m.timestamp = j.at("timestamp").get<std::string>();
        m.arguments = j.at("arguments").get<std::vector<std::string>>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("invalid manifest: ") + e.what());
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
    return std::filesystem::path(output.string() + ".manifest.json");
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << manifest.to_json().dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(1, std::string("manifest is not valid JSON: ") + e.what());
    }
    return RunManifest::from_json(j);
}

}  // namespace apqho
