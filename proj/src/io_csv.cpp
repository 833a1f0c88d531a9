#include "qgrom/io/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace qgrom::io {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : path_(path), f_(std::fopen(path.c_str(), "w")) {
        if (!f_) throw IoError("cannot create " + path);
    }
    void line(const std::string& s) { put(s + "\n"); }
    void number(double v, char sep) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g%c", v, sep);
        put(buf);
    }
    void close() {
        if (std::fclose(f_.release()) != 0) throw IoError("failed to finalize " + path_);
    }

private:
    void put(const std::string& s) {
        if (std::fwrite(s.data(), 1, s.size(), f_.get()) != s.size()) {
            throw IoError("short write to " + path_);
        }
    }
    std::string path_;
    std::unique_ptr<std::FILE, FileCloser> f_;
};

std::vector<double> parse_row(const std::string& line, const std::string& path, int lineno) {
    std::vector<double> vals;
    const char* p = line.c_str();
    while (*p) {
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p) {
            throw IoError(path + ":" + std::to_string(lineno) + ": malformed number near '" +
                          std::string(p).substr(0, 12) + "'");
        }
        vals.push_back(v);
        p = end;
        if (*p == ',') ++p;
        else if (*p != '\0' && *p != '\r') {
            throw IoError(path + ":" + std::to_string(lineno) + ": unexpected character '" +
                          *p + "'");
        } else {
            break;
        }
    }
    return vals;
}

// Reads all data rows (header skipped, '#' comments ignored) with a fixed
// column count.
std::vector<std::vector<double>> load_rows(const std::string& path, std::size_t& ncols) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    std::vector<std::vector<double>> rows;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column names
            continue;
        }
        auto vals = parse_row(line, path, lineno);
        if (rows.empty()) {
            ncols = vals.size();
        } else if (vals.size() != ncols) {
            throw IoError(path + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(ncols) + " columns, got " + std::to_string(vals.size()));
        }
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw IoError(path + ": no data rows");
    return rows;
}

}  // namespace

void save_pcs(const std::string& path, const eof::PcSeries& pcs) {
    CsvWriter w(path);
    std::ostringstream head;
    head << "t";
    for (int i = 1; i <= pcs.m(); ++i) head << ",z" << i;
    w.line(head.str());
    for (int k = 0; k < pcs.K(); ++k) {
        w.number(pcs.times[k], pcs.m() > 0 ? ',' : '\n');
        for (int i = 0; i < pcs.m(); ++i) {
            w.number(pcs.y(i, k), i + 1 < pcs.m() ? ',' : '\n');
        }
    }
    w.close();
}

eof::PcSeries load_pcs(const std::string& path) {
    std::size_t ncols = 0;
    const auto rows = load_rows(path, ncols);
    if (ncols < 2) throw IoError(path + ": PC series needs t plus at least one component");
    eof::PcSeries pcs;
    pcs.times.resize(rows.size());
    pcs.y.resize(ncols - 1, rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        pcs.times[k] = rows[k][0];
        for (std::size_t i = 1; i < ncols; ++i) pcs.y(i - 1, k) = rows[k][i];
    }
    pcs.validate();
    return pcs;
}

void save_trajectory(const std::string& path, const nudge::RomTrajectory& traj) {
    CsvWriter w(path);
    const int m = static_cast<int>(traj.z.rows());
    std::ostringstream head;
    head << "t,eta,sigma";
    for (int i = 1; i <= m; ++i) head << ",z" << i;
    w.line(head.str());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        w.number(traj.times[k], ',');
        w.number(traj.eta[k], ',');
        w.number(traj.sigma[k], m > 0 ? ',' : '\n');
        for (int i = 0; i < m; ++i) w.number(traj.z(i, k), i + 1 < m ? ',' : '\n');
    }
    w.close();
}

nudge::RomTrajectory load_trajectory(const std::string& path) {
    std::size_t ncols = 0;
    const auto rows = load_rows(path, ncols);
    if (ncols < 4) throw IoError(path + ": trajectory needs t,eta,sigma plus components");
    nudge::RomTrajectory traj;
    const std::size_t K = rows.size();
    traj.times.resize(K);
    traj.eta.resize(K);
    traj.sigma.resize(K);
    traj.z.resize(ncols - 3, K);
    for (std::size_t k = 0; k < K; ++k) {
        traj.times[k] = rows[k][0];
        traj.eta[k] = rows[k][1];
        traj.sigma[k] = rows[k][2];
        for (std::size_t i = 3; i < ncols; ++i) traj.z(i - 3, k) = rows[k][i];
    }
    traj.validate();
    return traj;
}

void save_report(const std::string& path, const std::vector<std::pair<std::string, double>>& rows,
                 const std::vector<std::string>& footer_comments) {
    CsvWriter w(path);
    w.line("name,value");
    for (const auto& [name, value] : rows) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        w.line(name + "," + buf);
    }
    for (const auto& c : footer_comments) w.line("# " + c);
    w.close();
}

}  // namespace qgrom::io
