#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>

namespace qgrom::io {

// Stage manifests: JSON with sorted keys, no timestamps, workdir-relative
// paths and FNV-1a checksums, so reruns of an identical pipeline produce
// byte-identical manifests.

std::uint64_t checksum_file(const std::string& path);

// 16 hex digits, for embedding checksums in JSON.
std::string hex64(std::uint64_t v);

void save_manifest(const std::string& path, const nlohmann::json& j);
nlohmann::json load_manifest(const std::string& path);

// Loads the manifest and errors if field "key" != expected, naming the stage.
void require_manifest_match(const nlohmann::json& m, const std::string& manifest_path,
                            const std::string& key, const nlohmann::json& expected);

}  // namespace qgrom::io
