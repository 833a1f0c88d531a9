#include "qgrom/pipeline/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "qgrom/common.hpp"

namespace qgrom::pipeline {

namespace {

double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') {
        throw ConfigError("config: bad number for " + key + ": '" + v + "'");
    }
    return x;
}

int parse_int(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x) {
        throw ConfigError("config: " + key + " must be an integer, got '" + v + "'");
    }
    return i;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError("config: bad boolean for " + key + ": '" + v + "'");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

void apply_kv(PipelineConfig& c, const std::string& section, const std::string& key,
              const std::string& value) {
    const std::string where = section + "." + key;
    if (section == "grid") {
        if (key == "high_n") c.high_n = parse_int(where, value);
        else if (key == "low_n") c.low_n = parse_int(where, value);
        else throw ConfigError("config: unknown key " + where);
    } else if (section == "physics") {
        if (key == "beta") c.beta = parse_double(where, value);
        else if (key == "mu") c.mu = parse_double(where, value);
        else if (key == "nu") c.nu = parse_double(where, value);
        else if (key == "tau0") c.tau0 = parse_double(where, value);
        else if (key == "L") c.L = parse_double(where, value);
        else if (key == "H1") c.H1 = parse_double(where, value);
        else if (key == "H2") c.H2 = parse_double(where, value);
        else if (key == "H3") c.H3 = parse_double(where, value);
        else if (key == "alpha") c.alpha = parse_double(where, value);
        else if (key == "f0") c.f0 = parse_double(where, value);
        else if (key == "rho0") c.rho0 = parse_double(where, value);
        else if (key == "forcing_scale") c.forcing_scale = parse_double(where, value);
        else if (key == "ra_filter") c.ra_filter = parse_double(where, value);
        else throw ConfigError("config: unknown key " + where);
    } else if (section == "protocol") {
        if (key == "spinup_years") c.spinup_years = parse_double(where, value);
        else if (key == "run_years") c.run_years = parse_double(where, value);
        else if (key == "train_years") c.train_years = parse_double(where, value);
        else if (key == "snapshot_interval_days")
            c.snapshot_interval_days = parse_double(where, value);
        else if (key == "year_days") c.year_days = parse_double(where, value);
        else if (key == "dt_days_high") c.dt_days_high = parse_double(where, value);
        else if (key == "dt_days_low") c.dt_days_low = parse_double(where, value);
        else throw ConfigError("config: unknown key " + where);
    } else if (section == "eof") {
        if (key == "variance_fraction") c.variance_fraction = parse_double(where, value);
        else if (key == "mean_removed") c.mean_removed = parse_bool(where, value);
        else if (key == "max_modes") c.max_modes = parse_int(where, value);
        else throw ConfigError("config: unknown key " + where);
    } else if (section == "sysid") {
        if (key == "poly_degree") c.poly_degree = parse_int(where, value);
        else if (key == "fourier_mode") c.fourier_mode = value;
        else if (key == "harmonics") c.harmonics = parse_int(where, value);
        else if (key == "rcond") c.rcond = parse_double(where, value);
        else if (key == "ridge") c.ridge = parse_double(where, value);
        else throw ConfigError("config: unknown key " + where);
    } else if (section == "nudge") {
        if (key == "neighbors") c.neighbors = parse_int(where, value);
        else if (key == "eta_h") c.eta_h = parse_double(where, value);
        else if (key == "eta0") c.eta0 = parse_double(where, value);
        else if (key == "dt_rom_days") c.dt_rom_days = parse_double(where, value);
        else if (key == "substeps") c.substeps = parse_int(where, value);
        else if (key == "sigma_stat") c.sigma_stat = value;
        else if (key == "sigma_window") c.sigma_window = parse_int(where, value);
        else throw ConfigError("config: unknown key " + where);
    } else if (section == "paths") {
        if (key == "workdir") c.workdir = value;
        else throw ConfigError("config: unknown key " + where);
    } else {
        throw ConfigError("config: unknown section [" + section + "]");
    }
}

PipelineConfig load_config(const std::string& path) {
    PipelineConfig c;
    if (path.empty()) return c;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto cut = line.find_first_of("#;");
        std::string s = trim(cut == std::string::npos ? line : line.substr(0, cut));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section");
            }
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        if (section.empty()) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": key before any section");
        }
        apply_kv(c, section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    return c;
}

void PipelineConfig::validate() const {
    if (high_n < 3 || high_n % 2 == 0 || low_n < 3 || low_n % 2 == 0) {
        throw ConfigError("config: grid sizes must be odd and >= 3");
    }
    if ((high_n - 1) % (low_n - 1) != 0) {
        throw ConfigError("config: (high_n - 1) must be divisible by (low_n - 1)");
    }
    if (!(run_years > train_years)) {
        throw ConfigError("config: run_years must exceed train_years");
    }
    if (train_years <= 0.0 || spinup_years < 0.0) {
        throw ConfigError("config: training window must be positive, spin-up non-negative");
    }
    if (snapshot_interval_days <= 0.0 || year_days <= 0.0) {
        throw ConfigError("config: snapshot interval and year length must be positive");
    }
    if (variance_fraction <= 0.0 || variance_fraction > 1.0) {
        throw ConfigError("config: variance_fraction must lie in (0, 1]");
    }
    if (max_modes < 0) throw ConfigError("config: max_modes must be non-negative");
    if (fourier_mode != "state" && fourier_mode != "time" && fourier_mode != "none") {
        throw ConfigError("config: fourier_mode must be state, time or none");
    }
    if (sigma_stat != "instant" && sigma_stat != "window") {
        throw ConfigError("config: sigma_stat must be instant or window");
    }
    qg_params(true).validate();
    qg_params(false).validate();
    feature_config();
    nudge_config(true).validate();
}

double PipelineConfig::dt_days(bool high) const {
    const double given = high ? dt_days_high : dt_days_low;
    if (given > 0.0) return given;
    return qg::QgParams::default_dt(high ? high_n : low_n) / 86400.0;
}

double PipelineConfig::effective_forcing_scale() const {
    return forcing_scale > 0.0 ? forcing_scale : 1.0 / (rho0 * H1 * L);
}

qg::QgParams PipelineConfig::qg_params(bool high) const {
    qg::QgParams p = qg::QgParams::defaults(high ? high_n : low_n);
    p.beta = beta;
    p.mu = mu;
    p.nu = nu;
    p.tau0 = tau0;
    p.L = L;
    p.H = {H1, H2, H3};
    p.alpha = alpha;
    p.f0 = f0;
    p.rho0 = rho0;
    p.forcing_scale = effective_forcing_scale();
    p.ra_filter = ra_filter;
    p.dt = dt_days(high) * 86400.0;
    return p;
}

sysid::FeatureConfig PipelineConfig::feature_config() const {
    sysid::FeatureConfig fc;
    fc.poly_degree = poly_degree;
    if (fourier_mode == "state") fc.fourier_mode = sysid::FourierMode::State;
    else if (fourier_mode == "time") fc.fourier_mode = sysid::FourierMode::Time;
    else fc.fourier_mode = sysid::FourierMode::None;
    fc.harmonics = harmonics;
    fc.base_period = train_years * year_days;
    fc.rcond = rcond;
    fc.ridge = ridge;
    if (fc.poly_degree < 1 || fc.poly_degree > 3) {
        throw ConfigError("config: poly_degree must be 1, 2 or 3");
    }
    if (fc.harmonics < 0) throw ConfigError("config: harmonics must be non-negative");
    return fc;
}

nudge::NudgeConfig PipelineConfig::nudge_config(bool nudged) const {
    nudge::NudgeConfig nc;
    nc.N = neighbors;
    nc.eta_h = nudged ? eta_h : 0.0;
    nc.eta0 = nudged ? eta0 : 0.0;
    nc.dt = dt_rom_days > 0.0 ? dt_rom_days : snapshot_interval_days;
    nc.substeps = substeps;
    nc.T = run_years * year_days;
    nc.stat = sigma_stat == "window" ? nudge::SigmaStat::Window : nudge::SigmaStat::Instant;
    nc.window = sigma_window;
    return nc;
}

std::string PipelineConfig::path(const std::string& name) const {
    return workdir + "/" + name;
}

std::string PipelineConfig::physics_hash(bool high) const {
    char buf[640];
    std::snprintf(buf, sizeof(buf),
                  "beta=%.17g;mu=%.17g;nu=%.17g;tau0=%.17g;L=%.17g;H=%.17g,%.17g,%.17g;"
                  "alpha=%.17g;f0=%.17g;rho0=%.17g;fscale=%.17g;ra=%.17g;n=%d;dt_days=%.17g",
                  beta, mu, nu, tau0, L, H1, H2, H3, alpha, f0, rho0,
                  effective_forcing_scale(), ra_filter, high ? high_n : low_n, dt_days(high));
    const std::uint64_t h = fnv1a(buf, std::string::traits_type::length(buf));
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

}  // namespace qgrom::pipeline
