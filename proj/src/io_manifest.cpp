#include "qgrom/io/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

#include "qgrom/common.hpp"

namespace qgrom::io {

std::uint64_t checksum_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for checksumming");
    std::vector<char> buf(1 << 20);
    std::uint64_t h = 14695981039346656037ull;
    while (in) {
        in.read(buf.data(), buf.size());
        h = fnv1a(buf.data(), static_cast<std::size_t>(in.gcount()), h);
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void save_manifest(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot create " + path);
    out << j.dump(2) << "\n";  // nlohmann::json orders keys; output is stable
    if (!out) throw IoError("short write to " + path);
}

nlohmann::json load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("missing upstream manifest " + path +
                      " (run the producing stage first)");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": malformed manifest: " + e.what());
    }
    return j;
}

void require_manifest_match(const nlohmann::json& m, const std::string& manifest_path,
                            const std::string& key, const nlohmann::json& expected) {
    if (!m.contains(key)) {
        throw ConfigError(manifest_path + ": missing field '" + key + "'");
    }
    if (m.at(key) != expected) {
        throw ConfigError(manifest_path + ": field '" + key + "' is " + m.at(key).dump() +
                          ", current config needs " + expected.dump());
    }
}

}  // namespace qgrom::io
