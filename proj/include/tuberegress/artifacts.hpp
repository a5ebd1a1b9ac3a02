#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace tuberegress::artifacts {

inline constexpr int kSchemaVersion = 1;

// Shortest round-trip decimal form of a double, for deterministic CSVs.
std::string fmt_double(double v);

// Wraps the payload as {schema_version, artifact, config_hash, payload} and
// writes it with a stable 2-space indentation.
void write(const std::filesystem::path& out_dir, const std::string& name,
           const std::string& config_hash, const nlohmann::ordered_json& payload);

// Reads an artifact and validates schema version and config hash; a missing
// file or hash mismatch is a MissingArtifact-class ConfigError.
nlohmann::ordered_json read(const std::filesystem::path& out_dir, const std::string& name,
                            const std::string& expect_hash);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

} // namespace tuberegress::artifacts
