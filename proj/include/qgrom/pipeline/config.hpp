#pragma once

#include <string>

#include "qgrom/nudge.hpp"
#include "qgrom/qg/params.hpp"
#include "qgrom/sysid.hpp"

namespace qgrom::pipeline {

// Whole-experiment settings. Built-in defaults are the desk protocol; a config
// file (INI-style sections) overrides them and CLI --set/--workdir overrides
// the file. Times in the reduction chain are measured in days.
struct PipelineConfig {
    // [grid]
    int high_n = 129;
    int low_n = 33;

    // [physics]
    double beta = 2.0e-11;
    double mu = 4.0e-8;
    double nu = 50.0;
    double tau0 = 0.03;
    double L = 3.84e6;
    double H1 = 250.0, H2 = 750.0, H3 = 3000.0;
    double alpha = 1.2e5;
    double f0 = 0.83e-4;
    double rho0 = 1000.0;
    double forcing_scale = 0.0;  // 0 = 1/(rho0 H1 L)
    double ra_filter = 0.01;

    // [protocol]
    double spinup_years = 10.0;
    double run_years = 4.0;
    double train_years = 2.0;
    double snapshot_interval_days = 1.0;
    double year_days = 365.0;
    double dt_days_high = 0.0;  // 0 = (1/40) * 128/(n-1)
    double dt_days_low = 0.0;

    // [eof]
    double variance_fraction = 0.98;
    bool mean_removed = false;
    int max_modes = 0;  // 0 = no cap

    // [sysid]
    int poly_degree = 2;
    std::string fourier_mode = "state";  // state | time | none
    int harmonics = 50;
    double rcond = 1e-10;
    double ridge = 0.0;

    // [nudge]
    int neighbors = 5;
    double eta_h = 1e-3;
    double eta0 = 0.0;
    double dt_rom_days = 0.0;  // 0 = snapshot interval
    int substeps = 256;        // Euler refinement between records; see NudgeConfig
    std::string sigma_stat = "instant";  // instant | window
    int sigma_window = 0;

    // [paths]
    std::string workdir = "work";

    void validate() const;

    double dt_days(bool high) const;
    qg::QgParams qg_params(bool high) const;
    double effective_forcing_scale() const;
    sysid::FeatureConfig feature_config() const;
    nudge::NudgeConfig nudge_config(bool nudged) const;  // sigma_max left 0

    // Artifact locations under workdir.
    std::string path(const std::string& name) const;

    // Canonical physics+protocol fingerprint recorded in manifests; any
    // parameter change invalidates downstream artifacts.
    std::string physics_hash(bool high) const;
};

// Parses one key; throws ConfigError on unknown section/key or a bad value.
void apply_kv(PipelineConfig& cfg, const std::string& section, const std::string& key,
              const std::string& value);

// Reads an INI-style file: [section] headers, key = value lines, # or ;
// comments. Empty path returns the defaults.
PipelineConfig load_config(const std::string& path);

}  // namespace qgrom::pipeline
