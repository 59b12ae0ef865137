#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semithermo {

std::string sha256_hex(std::string_view data);
/// Throws PreconditionError when the file cannot be read.
std::string sha256_file(const std::string& path);

struct Artifact {
    std::string name;
    std::string sha256;
    std::uint64_t bytes = 0;
};

/// Contents of manifest.json. No timestamps or host data, so equal runs give
/// equal manifests.
struct Manifest {
    std::string tool = "semithermo";
    std::string version;
    std::string subcommand;
    std::vector<std::string> args;
    std::string spec_name;
    std::string spec_sha256;
    std::optional<std::uint64_t> seed;
    std::vector<Artifact> artifacts;
};

inline constexpr const char* kManifestName = "manifest.json";

/// Hashes each named file in dir and writes dir/manifest.json.
void write_manifest(const std::string& dir, Manifest manifest, const std::vector<std::string>& artifact_names);
Manifest read_manifest(const std::string& dir);

struct ManifestCheck {
    bool ok = true;
    std::vector<std::string> problems;
};

/// Every listed artifact exists with the recorded size and hash.
ManifestCheck verify_manifest(const std::string& dir);

} // namespace semithermo
