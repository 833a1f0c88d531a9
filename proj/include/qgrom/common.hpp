#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qgrom {

static_assert(std::endian::native == std::endian::little,
              "on-disk formats are little-endian and are written by memcpy");

// Bad user input: config files, CLI values, malformed on-disk headers.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally valid input outside the supported domain (grid too small,
// non-square field, negative viscosity).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mismatched array dimensions between caller-supplied objects.
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runtime numerical failure: CFL violation, non-finite field values,
// singular solves.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failure or truncated/corrupt binary record.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// FNV-1a, the checksum recorded in stage manifests.
inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t seed = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace qgrom
