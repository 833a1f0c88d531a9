#include "qgrom/io/serial.hpp"

#include <cstdio>
#include <cstring>
#include <memory>

namespace qgrom::io {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

class Writer {
public:
    Writer(const std::string& path, const char magic[8]) : path_(path) {
        f_.reset(std::fopen(path.c_str(), "wb"));
        if (!f_) throw IoError("cannot create " + path);
        raw(magic, 8);
        u32(1);  // version
    }
    void raw(const void* p, std::size_t n) {
        if (std::fwrite(p, 1, n, f_.get()) != n) throw IoError("short write to " + path_);
    }
    void u32(std::uint32_t v) { raw(&v, 4); }
    void u64(std::uint64_t v) { raw(&v, 8); }
    void i64(std::int64_t v) { raw(&v, 8); }
    void f64(double v) { raw(&v, 8); }
    void vec(const Eigen::VectorXd& v) { raw(v.data(), static_cast<std::size_t>(v.size()) * 8); }
    void mat(const Eigen::MatrixXd& m) {
        // Row-major on disk regardless of in-memory layout.
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
        }
    }
    void field(const Field& f) { raw(f.data(), f.size() * 8); }
    void close() {
        if (std::fclose(f_.release()) != 0) throw IoError("failed to finalize " + path_);
    }

private:
    FilePtr f_;
    std::string path_;
};

class Reader {
public:
    Reader(const std::string& path, const char magic[8]) : path_(path) {
        f_.reset(std::fopen(path.c_str(), "rb"));
        if (!f_) throw IoError("cannot open " + path);
        char got[8];
        raw(got, 8);
        if (std::memcmp(got, magic, 8) != 0) {
            throw IoError(path + ": wrong file type (expected " + std::string(magic, 8) + ")");
        }
        if (u32() != 1) throw IoError(path + ": unsupported version");
    }
    void raw(void* p, std::size_t n) {
        if (std::fread(p, 1, n, f_.get()) != n) throw IoError("short read from " + path_);
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, 4);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        raw(&v, 8);
        return v;
    }
    std::int64_t i64() {
        std::int64_t v;
        raw(&v, 8);
        return v;
    }
    double f64() {
        double v;
        raw(&v, 8);
        return v;
    }
    void vec(Eigen::VectorXd& v, Eigen::Index n) {
        v.resize(n);
        raw(v.data(), static_cast<std::size_t>(n) * 8);
    }
    void mat(Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols) {
        m.resize(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = f64();
        }
    }
    void field(Field& f, int nx, int ny) {
        if (f.nx() != nx || f.ny() != ny) f = Field(nx, ny);
        raw(f.data(), f.size() * 8);
    }

private:
    FilePtr f_;
    std::string path_;
};

constexpr char kBasisMagic[8] = {'Q', 'G', 'E', 'O', 'F', 'B', '0', '1'};
constexpr char kModelMagic[8] = {'Q', 'G', 'R', 'H', 'S', 'M', '0', '1'};
constexpr char kStateMagic[8] = {'Q', 'G', 'R', 'E', 'S', 'T', '0', '1'};

void write_level(Writer& w, const qg::ModelLevel& lev) {
    for (int l = 0; l < 3; ++l) w.field(lev.q[l]);
    for (int l = 0; l < 3; ++l) w.field(lev.psi[l]);
    for (int l = 0; l < 3; ++l) w.field(lev.zeta[l]);
    for (int l = 0; l < 3; ++l) w.f64(lev.constants(l));
}

void read_level(Reader& r, qg::ModelLevel& lev, int n) {
    for (int l = 0; l < 3; ++l) r.field(lev.q[l], n, n);
    for (int l = 0; l < 3; ++l) r.field(lev.psi[l], n, n);
    for (int l = 0; l < 3; ++l) r.field(lev.zeta[l], n, n);
    for (int l = 0; l < 3; ++l) lev.constants(l) = r.f64();
}

}  // namespace

void save_basis(const std::string& path, const eof::EofBasis& b) {
    b.validate();
    Writer w(path, kBasisMagic);
    w.u32(b.nx);
    w.u32(b.ny);
    w.u32(b.m);
    w.u32(b.mean_removed ? 1 : 0);
    w.f64(b.total_variance);
    w.vec(b.eigenvalues);
    w.vec(b.mean);
    w.mat(b.eofs);
    w.close();
}

eof::EofBasis load_basis(const std::string& path) {
    Reader r(path, kBasisMagic);
    eof::EofBasis b;
    b.nx = static_cast<int>(r.u32());
    b.ny = static_cast<int>(r.u32());
    b.m = static_cast<int>(r.u32());
    b.mean_removed = r.u32() != 0;
    b.total_variance = r.f64();
    if (b.nx < 1 || b.ny < 1 || b.m < 1 || b.m > b.n()) {
        throw IoError(path + ": corrupt basis header");
    }
    r.vec(b.eigenvalues, b.m);
    r.vec(b.mean, b.n());
    r.mat(b.eofs, b.n(), b.m);
    b.validate();
    return b;
}

void save_model(const std::string& path, const sysid::RhsModel& m) {
    m.config.validate();
    Writer w(path, kModelMagic);
    const auto& c = m.config;
    w.u32(c.m);
    w.u32(c.poly_degree);
    w.u32(static_cast<std::uint32_t>(c.fourier_mode));
    w.u32(c.harmonics);
    w.u32(static_cast<std::uint32_t>(c.harmonic_set.size()));
    w.f64(c.base_period);
    w.f64(c.rcond);
    w.f64(c.ridge);
    w.vec(c.mid);
    w.vec(c.halfrange);
    for (int k : c.harmonic_set) w.u32(k);
    w.mat(m.coeffs);
    w.vec(m.residual_norms);
    w.close();
}

sysid::RhsModel load_model(const std::string& path) {
    Reader r(path, kModelMagic);
    sysid::RhsModel m;
    auto& c = m.config;
    c.m = static_cast<int>(r.u32());
    c.poly_degree = static_cast<int>(r.u32());
    const std::uint32_t mode = r.u32();
    if (mode > 2) throw IoError(path + ": corrupt fourier mode");
    c.fourier_mode = static_cast<sysid::FourierMode>(mode);
    c.harmonics = static_cast<int>(r.u32());
    const std::uint32_t nset = r.u32();
    c.base_period = r.f64();
    c.rcond = r.f64();
    c.ridge = r.f64();
    r.vec(c.mid, c.m);
    r.vec(c.halfrange, c.m);
    c.harmonic_set.resize(nset);
    for (auto& k : c.harmonic_set) k = static_cast<int>(r.u32());
    c.validate();
    r.mat(m.coeffs, c.m, c.n_features());
    r.vec(m.residual_norms, c.m);
    return m;
}

void save_state(const std::string& path, const qg::ModelState& s) {
    Writer w(path, kStateMagic);
    const int n = s.curr.q[0].nx();
    w.u32(n);
    w.u32(s.prev.has_value() ? 1 : 0);
    w.f64(s.time0);
    w.i64(s.step0);
    w.i64(s.step_index);
    w.f64(s.masses0[0]);
    w.f64(s.masses0[1]);
    write_level(w, s.curr);
    if (s.prev) write_level(w, *s.prev);
    w.close();
}

qg::ModelState load_state(const std::string& path) {
    Reader r(path, kStateMagic);
    qg::ModelState s;
    const int n = static_cast<int>(r.u32());
    if (n < 3) throw IoError(path + ": corrupt restart header");
    const bool has_prev = r.u32() != 0;
    s.time0 = r.f64();
    s.step0 = r.i64();
    s.step_index = r.i64();
    s.masses0[0] = r.f64();
    s.masses0[1] = r.f64();
    read_level(r, s.curr, n);
    if (has_prev) {
        s.prev.emplace();
        read_level(r, *s.prev, n);
    }
    return s;
}

}  // namespace qgrom::io
