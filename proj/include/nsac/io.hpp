#pragma once

#include <string>
#include <vector>

#include "nsac/solver.hpp"

namespace nsac::io {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SnapshotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses and validates a JSON configuration document. Unknown keys are
/// rejected; defaults: cfl_safety=0.4, h=eps/8 (when grid.nx is omitted),
/// snapshot_interval, output_dir.
solver::SimConfig parse_config(const std::string& text);

std::string config_to_json(const solver::SimConfig& cfg);

/// NSACF1 binary snapshot: magic "NSACF1\n", u64 dim nx ny, f64 hx hy t,
/// then rho, u components (dim of them), phi, theta as row-major f64.
void write_snapshot(const solver::State& state, const std::string& path);
solver::State read_snapshot(const std::string& path);

void write_manifest(const solver::RunManifest& m, const std::string& path);
solver::RunManifest read_manifest(const std::string& path);

void write_diagnostics_csv(const std::vector<double>& times,
                           const std::vector<solver::Diagnostics>& rows,
                           const std::string& path);

}  // namespace nsac::io
