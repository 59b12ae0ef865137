#include "semithermo/manifest.hpp"
#include "semithermo/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

namespace semithermo {

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw PreconditionError(fmt::format("cannot read '{}'", path));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

std::string sha256_hex(std::string_view data)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
        throw Error("SHA-256 computation failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += fmt::format("{:02x}", digest[i]);
    }
    return hex;
}

std::string sha256_file(const std::string& path)
{
    return sha256_hex(read_file(path));
}

void write_manifest(const std::string& dir, Manifest m, const std::vector<std::string>& artifact_names)
{
    namespace fs = std::filesystem;
    m.artifacts.clear();
    for (const auto& name : artifact_names) {
        const std::string data = read_file((fs::path(dir) / name).string());
        m.artifacts.push_back({name, sha256_hex(data), data.size()});
    }
    nlohmann::ordered_json j;
    j["tool"] = m.tool;
    j["version"] = m.version;
    j["subcommand"] = m.subcommand;
    j["args"] = m.args;
    j["spec"] = {{"name", m.spec_name}, {"sha256", m.spec_sha256}};
    j["seed"] = m.seed ? nlohmann::ordered_json(*m.seed) : nlohmann::ordered_json(nullptr);
    j["artifacts"] = nlohmann::ordered_json::array();
    for (const auto& a : m.artifacts) {
        j["artifacts"].push_back({{"name", a.name}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    }
    std::ofstream out(fs::path(dir) / kManifestName, std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out) {
        throw PreconditionError(fmt::format("cannot write manifest in '{}'", dir));
    }
}

Manifest read_manifest(const std::string& dir)
{
    const std::string path = (std::filesystem::path(dir) / kManifestName).string();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
        Manifest m;
        m.tool = j.at("tool").get<std::string>();
        m.version = j.at("version").get<std::string>();
        m.subcommand = j.at("subcommand").get<std::string>();
        m.args = j.at("args").get<std::vector<std::string>>();
        m.spec_name = j.at("spec").at("name").get<std::string>();
        m.spec_sha256 = j.at("spec").at("sha256").get<std::string>();
        if (!j.at("seed").is_null()) {
            m.seed = j.at("seed").get<std::uint64_t>();
        }
        for (const auto& a : j.at("artifacts")) {
            m.artifacts.push_back(
                {a.at("name").get<std::string>(), a.at("sha256").get<std::string>(), a.at("bytes").get<std::uint64_t>()});
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(fmt::format("{}: {}", path, e.what()));
    }
}

ManifestCheck verify_manifest(const std::string& dir)
{
    ManifestCheck check;
    const Manifest m = read_manifest(dir);
    for (const auto& a : m.artifacts) {
        const auto path = std::filesystem::path(dir) / a.name;
        if (!std::filesystem::exists(path)) {
            check.problems.push_back(fmt::format("{}: missing", a.name));
            continue;
        }
        const std::string data = read_file(path.string());
        if (data.size() != a.bytes) {
            check.problems.push_back(fmt::format("{}: size {} != recorded {}", a.name, data.size(), a.bytes));
        }
        if (sha256_hex(data) != a.sha256) {
            check.problems.push_back(fmt::format("{}: hash mismatch", a.name));
        }
    }
    check.ok = check.problems.empty();
    return check;
}

} // namespace semithermo
