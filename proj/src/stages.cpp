#include "qgrom/pipeline/stages.hpp"

#include <filesystem>

#include "qgrom/fieldops.hpp"
#include "qgrom/io/csv.hpp"
#include "qgrom/io/manifest.hpp"
#include "qgrom/io/ppm.hpp"
#include "qgrom/io/serial.hpp"
#include "qgrom/io/snapshot.hpp"
#include "qgrom/qg/model.hpp"

namespace qgrom::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kSecondsPerDay = 86400.0;

void ensure_workdir(const PipelineConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.workdir, ec);
    if (ec) throw IoError("cannot create workdir " + cfg.workdir + ": " + ec.message());
}

std::string manifest_path(const PipelineConfig& cfg, const std::string& stage) {
    return cfg.path("manifest_" + stage + ".json");
}

// Upstream validation: the manifest must exist, the named fields must match
// the current config, and the recorded artifact checksums must match the
// files on disk.
json require_stage(const PipelineConfig& cfg, const std::string& stage,
                   const std::vector<std::pair<std::string, json>>& expectations) {
    const std::string mpath = manifest_path(cfg, stage);
    const json m = io::load_manifest(mpath);
    for (const auto& [key, expected] : expectations) {
        io::require_manifest_match(m, mpath, key, expected);
    }
    if (m.contains("outputs")) {
        for (const auto& [rel, checksum] : m.at("outputs").items()) {
            const std::string full = cfg.path(rel);
            if (!fs::exists(full)) {
                throw IoError("missing upstream artifact " + full + " (rerun stage '" + stage +
                              "')");
            }
            const std::string actual = io::hex64(io::checksum_file(full));
            if (actual != checksum.get<std::string>()) {
                throw IoError(full + ": checksum " + actual + " does not match manifest " +
                              mpath + " (stale or corrupted; rerun stage '" + stage + "')");
            }
        }
    }
    return m;
}

void write_stage_manifest(const PipelineConfig& cfg, const std::string& stage, json m,
                          const std::vector<std::string>& outputs) {
    m["stage"] = stage;
    json outs = json::object();
    for (const auto& rel : outputs) {
        outs[rel] = io::hex64(io::checksum_file(cfg.path(rel)));
    }
    m["outputs"] = outs;
    io::save_manifest(manifest_path(cfg, stage), m);
}

json protocol_json(const PipelineConfig& cfg, bool high) {
    return json{{"grid_n", high ? cfg.high_n : cfg.low_n},
                {"dt_days", cfg.dt_days(high)},
                {"spinup_years", cfg.spinup_years},
                {"run_years", cfg.run_years},
                {"snapshot_interval_days", cfg.snapshot_interval_days},
                {"year_days", cfg.year_days},
                {"physics_hash", cfg.physics_hash(high)}};
}

// Training-window record count: records within train_years of the first.
int training_count(const std::vector<double>& times_days, const PipelineConfig& cfg) {
    const double end = times_days.front() + cfg.train_years * cfg.year_days + 1e-6;
    int k = 0;
    while (k < static_cast<int>(times_days.size()) && times_days[k] <= end) ++k;
    return k;
}

}  // namespace

void stage_simulate(const PipelineConfig& cfg, bool high, bool force) {
    cfg.validate();
    ensure_workdir(cfg);
    const std::string rel = high ? artifact::high_snapshots : artifact::low_snapshots;
    const std::string out = cfg.path(rel);
    if (fs::exists(out) && !force) {
        throw ConfigError(out + " already exists; pass --force to overwrite");
    }

    const qg::QgParams p = cfg.qg_params(high);
    qg::QgModel model(p);
    qg::ModelState state = model.initial_rest_state();

    const double spin_end = cfg.spinup_years * cfg.year_days * kSecondsPerDay;
    model.run(state, spin_end, p.dt, nullptr);

    io::SnapshotWriter writer(out, p.grid_n, p.grid_n, 3);
    const double prod_end = spin_end + cfg.run_years * cfg.year_days * kSecondsPerDay;
    model.run(state, prod_end, cfg.snapshot_interval_days * kSecondsPerDay,
              [&](const qg::ModelState& s) {
                  writer.append(s.time(p.dt) / kSecondsPerDay,
                                {&s.curr.q[0], &s.curr.q[1], &s.curr.q[2]});
              });
    writer.close();

    json m = protocol_json(cfg, high);
    m["resolution"] = high ? "high" : "low";
    m["records"] = writer.record_count();
    m["full_scale"] = cfg.high_n >= 513;
    write_stage_manifest(cfg, high ? "simulate_high" : "simulate_low", std::move(m), {rel});
}

void stage_project(const PipelineConfig& cfg) {
    cfg.validate();
    ensure_workdir(cfg);
    const json up = require_stage(cfg, "simulate_high",
                                  {{"grid_n", cfg.high_n},
                                   {"snapshot_interval_days", cfg.snapshot_interval_days},
                                   {"run_years", cfg.run_years},
                                   {"physics_hash", cfg.physics_hash(true)}});

    io::SnapshotReader reader(cfg.path(artifact::high_snapshots));
    const auto& info = reader.info();
    io::SnapshotWriter writer(cfg.path(artifact::ref_series), cfg.low_n, cfg.low_n, 1);
    Field fine(info.nx, info.ny);
    const double inv_f0 = 1.0 / cfg.f0;
    for (std::uint64_t k = 0; k < info.record_count; ++k) {
        double t = 0.0;
        reader.read_record(k, t, {&fine});
        Field coarse = fieldops::subsample(fine, cfg.low_n);
        for (std::size_t i = 0; i < coarse.size(); ++i) coarse.data()[i] *= inv_f0;
        writer.append(t, {&coarse});
    }
    writer.close();

    json m;
    m["source_records"] = up.at("records");
    m["grid_n"] = cfg.low_n;
    m["source_grid_n"] = cfg.high_n;
    m["f0"] = cfg.f0;
    m["records"] = writer.record_count();
    m["physics_hash"] = cfg.physics_hash(true);
    write_stage_manifest(cfg, "project", std::move(m), {artifact::ref_series});
}

void stage_eof(const PipelineConfig& cfg) {
    cfg.validate();
    ensure_workdir(cfg);
    require_stage(cfg, "project",
                  {{"grid_n", cfg.low_n}, {"physics_hash", cfg.physics_hash(true)}});

    const fieldops::FieldSeries ref =
        fieldops::series_from_snapshots(cfg.path(artifact::ref_series), 0, 1.0);
    const int K = training_count(ref.times, cfg);
    if (K < 2) throw DomainError("stage eof: training window holds fewer than 2 records");

    const int n = ref.nx * ref.ny;
    Eigen::MatrixXd X(n, K);
    for (int k = 0; k < K; ++k) {
        X.col(k) = Eigen::Map<const Eigen::VectorXd>(ref.fields[k].data(), n);
    }
    const eof::EofBasis full = eof::compute_eof(X, cfg.mean_removed, ref.nx, ref.ny);
    int m = eof::select_mode_count(full.eigenvalues, cfg.variance_fraction);
    if (cfg.max_modes > 0) m = std::min(m, cfg.max_modes);
    const eof::EofBasis basis = eof::truncate(full, m);
    io::save_basis(cfg.path(artifact::basis), basis);

    eof::PcSeries pcs;
    pcs.times.assign(ref.times.begin(), ref.times.begin() + K);
    pcs.y = eof::project_series(basis, X);
    io::save_pcs(cfg.path(artifact::train_pcs), pcs);

    json man;
    man["grid_n"] = cfg.low_n;
    man["training_records"] = K;
    man["modes"] = m;
    man["variance_fraction"] = cfg.variance_fraction;
    man["captured_fraction"] = basis.eigenvalues.sum() / full.total_variance;
    man["mean_removed"] = cfg.mean_removed;
    man["physics_hash"] = cfg.physics_hash(true);
    write_stage_manifest(cfg, "eof", std::move(man), {artifact::basis, artifact::train_pcs});
}

void stage_fit(const PipelineConfig& cfg) {
    cfg.validate();
    ensure_workdir(cfg);
    const json up = require_stage(cfg, "eof", {{"grid_n", cfg.low_n}});

    const eof::PcSeries pcs = io::load_pcs(cfg.path(artifact::train_pcs));
    if (pcs.m() != up.at("modes").get<int>()) {
        throw ConfigError("stage fit: PC series does not match the basis mode count");
    }
    const Eigen::MatrixXd derivs = sysid::estimate_derivatives(pcs);
    const sysid::RhsModel model = sysid::fit(pcs, derivs, cfg.feature_config());
    io::save_model(cfg.path(artifact::model), model);

    std::vector<std::pair<std::string, double>> rows;
    for (int c = 0; c < model.config.m; ++c) {
        rows.emplace_back("residual_norm_z" + std::to_string(c + 1), model.residual_norms(c));
    }
    io::save_report(cfg.path(artifact::fit_residuals), rows, {});

    json man;
    man["modes"] = pcs.m();
    man["n_features"] = model.config.n_features();
    man["fourier_mode"] = cfg.fourier_mode;
    man["harmonics"] = cfg.harmonics;
    man["poly_degree"] = cfg.poly_degree;
    man["residual_norm_total"] = model.residual_norms.norm();
    write_stage_manifest(cfg, "fit", std::move(man), {artifact::model, artifact::fit_residuals});
}

void stage_rom(const PipelineConfig& cfg, bool nudged) {
    cfg.validate();
    ensure_workdir(cfg);
    const json up_fit = require_stage(cfg, "fit", {});
    require_stage(cfg, "eof", {{"grid_n", cfg.low_n}});

    const sysid::RhsModel model = io::load_model(cfg.path(artifact::model));
    const eof::PcSeries training = io::load_pcs(cfg.path(artifact::train_pcs));
    if (model.config.m != training.m()) {
        throw ConfigError("stage rom: model and PC series disagree on dimension");
    }
    (void)up_fit;

    nudge::NudgeConfig nc = cfg.nudge_config(nudged);
    nc.sigma_max = nudge::sigma_max_from_training(training.y, nc.stat, nc.window);
    const Eigen::VectorXd z0 = training.y.col(0);
    const nudge::RomTrajectory traj =
        nudge::integrate(model, training, nc, z0, nudge::DivergencePolicy::Truncate);

    const std::string rel = nudged ? artifact::traj : artifact::traj_unnudged;
    io::save_trajectory(cfg.path(rel), traj);

    json man;
    man["nudged"] = nudged;
    man["modes"] = training.m();
    man["neighbors"] = nc.N;
    man["eta_h"] = nc.eta_h;
    man["sigma_max"] = nc.sigma_max;
    man["dt_rom_days"] = nc.dt;
    man["horizon_days"] = nc.T;
    man["states"] = traj.times.size();
    man["aborted_at"] = traj.aborted_at ? json(*traj.aborted_at) : json(nullptr);
    write_stage_manifest(cfg, nudged ? "rom" : "rom_unnudged", std::move(man), {rel});
}

void stage_reconstruct(const PipelineConfig& cfg, const std::string& trajectory_name) {
    cfg.validate();
    ensure_workdir(cfg);
    require_stage(cfg, "eof", {{"grid_n", cfg.low_n}});
    require_stage(cfg, trajectory_name == artifact::traj ? "rom" : "rom_unnudged", {});

    const eof::EofBasis basis = io::load_basis(cfg.path(artifact::basis));
    const nudge::RomTrajectory traj = io::load_trajectory(cfg.path(trajectory_name));
    if (static_cast<int>(traj.z.rows()) != basis.m) {
        throw ConfigError("stage reconstruct: trajectory dimension does not match the basis");
    }

    io::SnapshotWriter writer(cfg.path(artifact::recon_series), basis.nx, basis.ny, 1);
    Field f(basis.nx, basis.ny);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const Eigen::VectorXd x = eof::reconstruct(basis, traj.z.col(k));
        Eigen::Map<Eigen::VectorXd>(f.data(), x.size()) = x;
        writer.append(traj.times[k], {&f});
    }
    writer.close();

    json man;
    man["grid_n"] = cfg.low_n;
    man["modes"] = basis.m;
    man["records"] = writer.record_count();
    man["trajectory"] = trajectory_name;
    write_stage_manifest(cfg, "reconstruct", std::move(man), {artifact::recon_series});
}

void stage_diagnose(const PipelineConfig& cfg) {
    cfg.validate();
    ensure_workdir(cfg);
    require_stage(cfg, "project", {{"grid_n", cfg.low_n}});
    require_stage(cfg, "simulate_low", {{"grid_n", cfg.low_n},
                                        {"physics_hash", cfg.physics_hash(false)}});
    require_stage(cfg, "reconstruct", {{"grid_n", cfg.low_n}});

    const double inv_f0 = 1.0 / cfg.f0;
    const auto ref = fieldops::series_from_snapshots(cfg.path(artifact::ref_series), 0, 1.0);
    const auto low =
        fieldops::series_from_snapshots(cfg.path(artifact::low_snapshots), 0, inv_f0);
    const auto rom = fieldops::series_from_snapshots(cfg.path(artifact::recon_series), 0, 1.0);

    const Field mean_ref = fieldops::time_mean(ref);
    const Field mean_low = fieldops::time_mean(low);
    const Field mean_rom = fieldops::time_mean(rom);

    const std::vector<std::pair<std::string, double>> rows = {
        {"mean_phase_ref", fieldops::mean_phase_distance(ref)},
        {"mean_phase_lowres", fieldops::mean_phase_distance(low)},
        {"mean_phase_rom", fieldops::mean_phase_distance(rom)},
        {"dist_mean_ref_lowres", fieldops::l2_distance(mean_ref, mean_low)},
        {"dist_mean_ref_rom", fieldops::l2_distance(mean_ref, mean_rom)},
    };

    std::error_code ec;
    fs::create_directories(cfg.path(artifact::report_dir), ec);
    if (ec) throw IoError("cannot create report directory: " + ec.message());
    io::save_report(cfg.path(artifact::distances), rows,
                    {"full-scale reference values: mean_phase_ref=11.9, "
                     "mean_phase_lowres=7.2, mean_phase_rom=12.6, "
                     "dist_mean_ref_lowres=12.92, dist_mean_ref_rom=2.65"});

    std::vector<std::string> outputs = {artifact::distances};
    const std::vector<std::pair<std::string, const fieldops::FieldSeries*>> sets = {
        {"ref", &ref}, {"lowres", &low}, {"rom", &rom}};
    for (const auto& [name, series] : sets) {
        const std::string mean_rel = std::string(artifact::report_dir) + "/" + name + "_mean.ppm";
        const std::string std_rel = std::string(artifact::report_dir) + "/" + name + "_std.ppm";
        io::save_ppm(cfg.path(mean_rel), fieldops::time_mean(*series), std::nullopt);
        io::save_ppm(cfg.path(std_rel), fieldops::std_field(*series), std::nullopt);
        outputs.push_back(mean_rel);
        outputs.push_back(std_rel);
    }

    json man;
    man["grid_n"] = cfg.low_n;
    for (const auto& [name, value] : rows) man[name] = value;
    write_stage_manifest(cfg, "diagnose", std::move(man), outputs);
}

void stage_render(const std::string& input, const std::string& output, int record, int layer,
                  std::optional<double> range) {
    io::SnapshotReader reader(input);
    if (record < 0) record = static_cast<int>(reader.info().record_count) - 1;
    Field f;
    std::vector<Field> skip(layer);
    std::vector<Field*> want;
    for (auto& s : skip) want.push_back(&s);
    want.push_back(&f);
    double t = 0.0;
    reader.read_record(record, t, want);
    io::save_ppm(output, f, range);
}

void stage_all(const PipelineConfig& cfg, bool force) {
    stage_simulate(cfg, true, force);
    stage_simulate(cfg, false, force);
    stage_project(cfg);
    stage_eof(cfg);
    stage_fit(cfg);
    stage_rom(cfg, true);
    stage_rom(cfg, false);
    stage_reconstruct(cfg, artifact::traj);
    stage_diagnose(cfg);
}

}  // namespace qgrom::pipeline
