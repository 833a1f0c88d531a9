#pragma once

#include <optional>
#include <string>

#include "qgrom/pipeline/config.hpp"

namespace qgrom::pipeline {

// Each stage reads its upstream artifacts, verifies the upstream manifest
// against the current config (grid, window, parameter hash) and the recorded
// checksums, writes its outputs plus its own manifest, and returns. All
// writes land under cfg.workdir.

void stage_simulate(const PipelineConfig& cfg, bool high, bool force);
void stage_project(const PipelineConfig& cfg);
void stage_eof(const PipelineConfig& cfg);
void stage_fit(const PipelineConfig& cfg);
void stage_rom(const PipelineConfig& cfg, bool nudged);
void stage_reconstruct(const PipelineConfig& cfg, const std::string& trajectory_name);
void stage_diagnose(const PipelineConfig& cfg);
void stage_render(const std::string& input, const std::string& output, int record, int layer,
                  std::optional<double> range);
void stage_all(const PipelineConfig& cfg, bool force);

// Artifact file names under the workdir.
namespace artifact {
inline constexpr const char* high_snapshots = "high_snapshots.qgs";
inline constexpr const char* low_snapshots = "low_snapshots.qgs";
inline constexpr const char* ref_series = "ref_series.qgs";
inline constexpr const char* basis = "basis.qgb";
inline constexpr const char* train_pcs = "train_pcs.csv";
inline constexpr const char* model = "model.qgm";
inline constexpr const char* fit_residuals = "fit_residuals.csv";
inline constexpr const char* traj = "traj.csv";
inline constexpr const char* traj_unnudged = "traj_unnudged.csv";
inline constexpr const char* recon_series = "recon_series.qgs";
inline constexpr const char* report_dir = "report";
inline constexpr const char* distances = "report/distances.csv";
}  // namespace artifact

}  // namespace qgrom::pipeline
