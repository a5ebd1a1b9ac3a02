#include "tuberegress/artifacts.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>

#include "tuberegress/errors.hpp"

namespace tuberegress::artifacts {

std::string fmt_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write(const std::filesystem::path& out_dir, const std::string& name,
           const std::string& config_hash, const nlohmann::ordered_json& payload) {
    std::filesystem::create_directories(out_dir);
    nlohmann::ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["artifact"] = name;
    doc["config_hash"] = config_hash;
    doc["payload"] = payload;
    const std::filesystem::path path = out_dir / (name + ".json");
    std::ofstream out(path);
    if (!out.is_open()) {
        throw DataError(Errc::io_error, "cannot write artifact " + path.string());
    }
    out << doc.dump(2) << "\n";
}

nlohmann::ordered_json read(const std::filesystem::path& out_dir, const std::string& name,
                            const std::string& expect_hash) {
    const std::filesystem::path path = out_dir / (name + ".json");
    std::ifstream in(path);
    if (!in.is_open()) {
        throw ConfigError(Errc::missing_artifact,
                          "MissingArtifact: " + path.string() + " (run the '" + name + "' stage first)");
    }
    nlohmann::ordered_json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError(Errc::missing_artifact, "MissingArtifact: unreadable " + path.string() + ": " + e.what());
    }
    if (!doc.contains("schema_version") || doc.at("schema_version").get<int>() != kSchemaVersion) {
        throw ConfigError(Errc::missing_artifact, "MissingArtifact: schema version mismatch in " + path.string());
    }
    if (doc.at("config_hash").get<std::string>() != expect_hash) {
        throw ConfigError(Errc::missing_artifact,
                          "MissingArtifact: stale artifact " + path.string() +
                              " (config hash mismatch; re-run the '" + name + "' stage)");
    }
    return doc.at("payload");
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out.is_open()) {
        throw DataError(Errc::io_error, "cannot write " + path.string());
    }
    for (size_t i = 0; i < header.size(); ++i) {
        out << header[i] << (i + 1 == header.size() ? "\n" : ",");
    }
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            out << row[i] << (i + 1 == row.size() ? "\n" : ",");
        }
    }
}

} // namespace tuberegress::artifacts
