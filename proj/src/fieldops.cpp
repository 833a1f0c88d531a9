#include "qgrom/fieldops.hpp"

#include <cmath>

#include "qgrom/io/snapshot.hpp"

namespace qgrom::fieldops {

void FieldSeries::validate() const {
    if (times.size() != fields.size()) {
        throw ShapeError("FieldSeries: " + std::to_string(times.size()) + " times vs " +
                         std::to_string(fields.size()) + " fields");
    }
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (fields[k].nx() != nx || fields[k].ny() != ny) {
            throw ShapeError("FieldSeries: record " + std::to_string(k) + " shape mismatch");
        }
        if (k > 0 && !(times[k] > times[k - 1])) {
            throw DomainError("FieldSeries: times not strictly increasing at record " +
                              std::to_string(k));
        }
    }
}

Field subsample(const Field& fine, int coarse_n) {
    if (coarse_n < 2) throw DomainError("subsample: coarse grid needs at least 2 nodes");
    if ((fine.nx() - 1) % (coarse_n - 1) != 0 || (fine.ny() - 1) % (coarse_n - 1) != 0) {
        throw ShapeError("subsample: " + std::to_string(fine.nx()) + " -> " +
                         std::to_string(coarse_n) + " is not an integral node ratio");
    }
    const int rx = (fine.nx() - 1) / (coarse_n - 1);
    const int ry = (fine.ny() - 1) / (coarse_n - 1);
    Field c(coarse_n, coarse_n);
    for (int j = 0; j < coarse_n; ++j) {
        for (int i = 0; i < coarse_n; ++i) c(i, j) = fine(i * rx, j * ry);
    }
    return c;
}

Field time_mean(const FieldSeries& s) {
    if (s.size() == 0) throw DomainError("time_mean: empty series");
    Field m(s.nx, s.ny, 0.0);
    for (const Field& f : s.fields) m.add_scaled(1.0, f);
    const double inv = 1.0 / static_cast<double>(s.size());
    for (std::size_t k = 0; k < m.size(); ++k) m.data()[k] *= inv;
    return m;
}

Field std_field(const FieldSeries& s) {
    if (s.size() < 2) throw DomainError("std_field: need at least 2 records");
    const Field mean = time_mean(s);
    Field acc(s.nx, s.ny, 0.0);
    for (const Field& f : s.fields) {
        for (std::size_t k = 0; k < acc.size(); ++k) {
            const double d = f.data()[k] - mean.data()[k];
            acc.data()[k] += d * d;
        }
    }
    const double inv = 1.0 / static_cast<double>(s.size());
    for (std::size_t k = 0; k < acc.size(); ++k) acc.data()[k] = std::sqrt(acc.data()[k] * inv);
    return acc;
}

double l2_distance(const Field& a, const Field& b) {
    require_same_shape(a, b, "l2_distance");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a.data()[k] - b.data()[k];
        s += d * d;
    }
    return std::sqrt(s);
}

double mean_phase_distance(const FieldSeries& s) {
    if (s.size() == 0) throw DomainError("mean_phase_distance: empty series");
    const Field mean = time_mean(s);
    double acc = 0.0;
    for (const Field& f : s.fields) acc += l2_distance(f, mean);
    return acc / static_cast<double>(s.size());
}

FieldSeries series_from_snapshots(const std::string& path, int layer, double scale) {
    io::SnapshotReader r(path);
    const auto& info = r.info();
    if (layer < 0 || layer >= static_cast<int>(info.nlayers)) {
        throw DomainError("series_from_snapshots: layer " + std::to_string(layer) +
                          " not in " + path);
    }
    FieldSeries s;
    s.nx = info.nx;
    s.ny = info.ny;
    s.times.resize(info.record_count);
    s.fields.resize(info.record_count);
    std::vector<Field> skip(layer);
    for (std::uint64_t k = 0; k < info.record_count; ++k) {
        std::vector<Field*> want;
        for (auto& f : skip) want.push_back(&f);
        want.push_back(&s.fields[k]);
        r.read_record(k, s.times[k], want);
        for (std::size_t p = 0; p < s.fields[k].size(); ++p) s.fields[k].data()[p] *= scale;
    }
    s.validate();
    return s;
}

}  // namespace qgrom::fieldops
