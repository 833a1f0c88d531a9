#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "qgrom/field.hpp"

namespace qgrom::io {

// Snapshot container: little-endian header {magic "QGSNAP01", u32 version=1,
// u32 nx, u32 ny, u32 nlayers, u64 record_count}, then fixed-size records
// {f64 time_days, nlayers * nx*ny f64 row-major fields}. record_count is
// patched on close; a writer that never closed leaves 0 and the reader
// recovers the count from the file size.
struct SnapshotInfo {
    std::uint32_t nx = 0, ny = 0, nlayers = 0;
    std::uint64_t record_count = 0;
};

class SnapshotWriter {
public:
    SnapshotWriter(const std::string& path, int nx, int ny, int nlayers);
    ~SnapshotWriter();
    SnapshotWriter(const SnapshotWriter&) = delete;
    SnapshotWriter& operator=(const SnapshotWriter&) = delete;

    void append(double time_days, const std::vector<const Field*>& layers);
    void close();

    std::uint64_t record_count() const { return count_; }

private:
    std::FILE* f_ = nullptr;
    std::string path_;
    std::uint32_t nx_, ny_, nlayers_;
    std::uint64_t count_ = 0;
};

class SnapshotReader {
public:
    explicit SnapshotReader(const std::string& path);
    ~SnapshotReader();
    SnapshotReader(const SnapshotReader&) = delete;
    SnapshotReader& operator=(const SnapshotReader&) = delete;

    const SnapshotInfo& info() const { return info_; }

    // Reads record k into time and the supplied layer fields (resized on shape
    // mismatch). layers may name fewer fields than stored; extras are skipped.
    void read_record(std::uint64_t k, double& time_days, std::vector<Field*> layers);

    std::vector<double> times();

private:
    std::FILE* f_ = nullptr;
    std::string path_;
    SnapshotInfo info_;
    std::uint64_t record_bytes_ = 0;
};

}  // namespace qgrom::io
