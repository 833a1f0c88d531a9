#include "qgrom/io/snapshot.hpp"

#include <cstring>

namespace qgrom::io {

namespace {
constexpr char kMagic[8] = {'Q', 'G', 'S', 'N', 'A', 'P', '0', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr long kHeaderBytes = 8 + 4 + 4 + 4 + 4 + 8;

void write_raw(std::FILE* f, const void* p, std::size_t n, const std::string& path) {
    if (std::fwrite(p, 1, n, f) != n) throw qgrom::IoError("short write to " + path);
}

void read_raw(std::FILE* f, void* p, std::size_t n, const std::string& path) {
    if (std::fread(p, 1, n, f) != n) throw qgrom::IoError("short read from " + path);
}
}  // namespace

SnapshotWriter::SnapshotWriter(const std::string& path, int nx, int ny, int nlayers)
    : path_(path), nx_(nx), ny_(ny), nlayers_(nlayers) {
    if (nx < 1 || ny < 1 || nlayers < 1) {
        throw qgrom::DomainError("SnapshotWriter: invalid dimensions for " + path);
    }
    f_ = std::fopen(path.c_str(), "wb");
    if (!f_) throw qgrom::IoError("cannot create " + path);
    write_raw(f_, kMagic, sizeof(kMagic), path_);
    write_raw(f_, &kVersion, 4, path_);
    write_raw(f_, &nx_, 4, path_);
    write_raw(f_, &ny_, 4, path_);
    write_raw(f_, &nlayers_, 4, path_);
    write_raw(f_, &count_, 8, path_);
}

SnapshotWriter::~SnapshotWriter() {
    if (f_) std::fclose(f_);
}

void SnapshotWriter::append(double time_days, const std::vector<const Field*>& layers) {
    if (!f_) throw qgrom::IoError("SnapshotWriter: already closed: " + path_);
    if (layers.size() != nlayers_) {
        throw qgrom::ShapeError("SnapshotWriter: expected " + std::to_string(nlayers_) +
                                " layers, got " + std::to_string(layers.size()));
    }
    write_raw(f_, &time_days, 8, path_);
    for (const Field* l : layers) {
        if (l->nx() != static_cast<int>(nx_) || l->ny() != static_cast<int>(ny_)) {
            throw qgrom::ShapeError("SnapshotWriter: layer shape mismatch in " + path_);
        }
        write_raw(f_, l->data(), l->size() * 8, path_);
    }
    ++count_;
}

void SnapshotWriter::close() {
    if (!f_) return;
    if (std::fseek(f_, kHeaderBytes - 8, SEEK_SET) != 0 ||
        std::fwrite(&count_, 1, 8, f_) != 8 || std::fclose(f_) != 0) {
        f_ = nullptr;
        throw qgrom::IoError("failed to finalize " + path_);
    }
    f_ = nullptr;
}

SnapshotReader::SnapshotReader(const std::string& path) : path_(path) {
    f_ = std::fopen(path.c_str(), "rb");
    if (!f_) throw qgrom::IoError("cannot open " + path);
    char magic[8];
    std::uint32_t version = 0;
    read_raw(f_, magic, 8, path_);
    if (std::memcmp(magic, kMagic, 8) != 0) {
        throw qgrom::IoError(path + " is not a snapshot file (bad magic)");
    }
    read_raw(f_, &version, 4, path_);
    if (version != kVersion) {
        throw qgrom::IoError(path + ": unsupported snapshot version " + std::to_string(version));
    }
    read_raw(f_, &info_.nx, 4, path_);
    read_raw(f_, &info_.ny, 4, path_);
    read_raw(f_, &info_.nlayers, 4, path_);
    read_raw(f_, &info_.record_count, 8, path_);
    if (info_.nx == 0 || info_.ny == 0 || info_.nlayers == 0) {
        throw qgrom::IoError(path + ": corrupt snapshot header");
    }
    record_bytes_ = 8 + 8ull * info_.nlayers * info_.nx * info_.ny;
    if (std::fseek(f_, 0, SEEK_END) != 0) throw qgrom::IoError("seek failed on " + path);
    const long long total = std::ftell(f_);
    const std::uint64_t available = (total - kHeaderBytes) / record_bytes_;
    if ((total - kHeaderBytes) % record_bytes_ != 0) {
        throw qgrom::IoError(path + ": truncated record at end of file");
    }
    if (info_.record_count == 0) {
        info_.record_count = available;
    } else if (info_.record_count > available) {
        throw qgrom::IoError(path + ": header promises " + std::to_string(info_.record_count) +
                             " records, file holds " + std::to_string(available));
    }
}

SnapshotReader::~SnapshotReader() {
    if (f_) std::fclose(f_);
}

void SnapshotReader::read_record(std::uint64_t k, double& time_days,
                                 std::vector<Field*> layers) {
    if (k >= info_.record_count) {
        throw qgrom::IoError(path_ + ": record " + std::to_string(k) + " out of range");
    }
    if (layers.size() > info_.nlayers) {
        throw qgrom::ShapeError("SnapshotReader: more layers requested than stored");
    }
    const long long off = kHeaderBytes + static_cast<long long>(k) * record_bytes_;
    if (std::fseek(f_, off, SEEK_SET) != 0) throw qgrom::IoError("seek failed on " + path_);
    read_raw(f_, &time_days, 8, path_);
    for (Field* l : layers) {
        if (l->nx() != static_cast<int>(info_.nx) || l->ny() != static_cast<int>(info_.ny)) {
            *l = Field(info_.nx, info_.ny);
        }
        read_raw(f_, l->data(), l->size() * 8, path_);
    }
}

std::vector<double> SnapshotReader::times() {
    std::vector<double> t(info_.record_count);
    for (std::uint64_t k = 0; k < info_.record_count; ++k) {
        const long long off = kHeaderBytes + static_cast<long long>(k) * record_bytes_;
        if (std::fseek(f_, off, SEEK_SET) != 0) throw qgrom::IoError("seek failed on " + path_);
        read_raw(f_, &t[k], 8, path_);
    }
    return t;
}

}  // namespace qgrom::io
