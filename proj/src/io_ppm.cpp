#include "qgrom/io/ppm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

namespace qgrom::io {

namespace {

struct Rgb {
    double r, g, b;
};

constexpr Rgb kLow{0.230, 0.299, 0.754};
constexpr Rgb kMid{0.865, 0.865, 0.865};
constexpr Rgb kHigh{0.706, 0.016, 0.150};

unsigned char channel(double a, double b, double t) {
    return static_cast<unsigned char>(std::lround(255.0 * (a + (b - a) * t)));
}

// 255 entries; entry 127 is kMid exactly.
const std::vector<std::array<unsigned char, 3>>& colormap() {
    static const std::vector<std::array<unsigned char, 3>> map = [] {
        std::vector<std::array<unsigned char, 3>> m(255);
        for (int i = 0; i < 255; ++i) {
            if (i <= 127) {
                const double t = i / 127.0;
                m[i] = {channel(kLow.r, kMid.r, t), channel(kLow.g, kMid.g, t),
                        channel(kLow.b, kMid.b, t)};
            } else {
                const double t = (i - 127) / 127.0;
                m[i] = {channel(kMid.r, kHigh.r, t), channel(kMid.g, kHigh.g, t),
                        channel(kMid.b, kHigh.b, t)};
            }
        }
        return m;
    }();
    return map;
}

}  // namespace

std::vector<unsigned char> render_ppm(const Field& f, std::optional<double> range) {
    if (!f.all_finite()) throw NumericError("render_ppm: non-finite field values");
    double mid, half;
    if (range) {
        if (*range < 0.0) throw DomainError("render_ppm: range must be non-negative");
        mid = 0.0;
        half = *range;
    } else {
        double lo = f.data()[0], hi = f.data()[0];
        for (std::size_t k = 0; k < f.size(); ++k) {
            lo = std::min(lo, f.data()[k]);
            hi = std::max(hi, f.data()[k]);
        }
        mid = 0.5 * (lo + hi);
        half = 0.5 * (hi - lo);
    }

    char head[64];
    const int hn = std::snprintf(head, sizeof(head), "P6\n%d %d\n255\n", f.nx(), f.ny());
    std::vector<unsigned char> out(head, head + hn);
    out.reserve(hn + f.size() * 3);
    const auto& map = colormap();
    for (int j = f.ny() - 1; j >= 0; --j) {
        for (int i = 0; i < f.nx(); ++i) {
            int idx = 127;
            if (half > 0.0) {
                const long r = std::lround((f(i, j) - mid) / half * 127.0);
                idx = 127 + static_cast<int>(std::clamp(r, -127l, 127l));
            }
            const auto& c = map[idx];
            out.push_back(c[0]);
            out.push_back(c[1]);
            out.push_back(c[2]);
        }
    }
    return out;
}

void save_ppm(const std::string& path, const Field& f, std::optional<double> range) {
    const auto bytes = render_ppm(f, range);
    struct FileCloser {
        void operator()(std::FILE* fp) const {
            if (fp) std::fclose(fp);
        }
    };
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot create " + path);
    if (std::fwrite(bytes.data(), 1, bytes.size(), fp.get()) != bytes.size()) {
        throw IoError("short write to " + path);
    }
    if (std::fclose(fp.release()) != 0) throw IoError("failed to finalize " + path);
}

}  // namespace qgrom::io
