#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "nsac/io.hpp"
#include "nsac/solver.hpp"

using namespace nsac;
using namespace nsac::io;
namespace fs = std::filesystem;

namespace {

const std::string kMinimalConfig = R"({
  "grid": {"dim": 1, "nx": 64, "lx": 1.0},
  "eps": 0.05,
  "mobility": "C1",
  "ic": {"preset": "uniform"},
  "t_end": 0.01
})";

fs::path temp_dir() {
  fs::path p = fs::temp_directory_path() / "nsac_io_test";
  fs::create_directories(p);
  return p;
}

solver::State sample_state() {
  grid::GridSpec g;
  g.dim = 2;
  g.nx = 16;
  g.ny = 12;
  g.lx = 1.0;
  g.ly = 0.75;
  solver::State s(g);
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    s.rho.v[i] = 1.0 + 0.001 * static_cast<double>(i);
    s.u.x[i] = 0.1 * static_cast<double>(i % 7);
    s.u.y[i] = -0.2 * static_cast<double>(i % 5);
    s.phi.v[i] = (i % 2 == 0) ? 0.5 : -0.5;
    s.theta.v[i] = 2.0 + 1e-12 * static_cast<double>(i);
  }
  s.t = 0.375;
  return s;
}

}  // namespace

TEST_CASE("snapshot round trip is bit identical") {
  const std::string path = (temp_dir() / "snap.bin").string();
  solver::State s = sample_state();
  write_snapshot(s, path);
  solver::State r = read_snapshot(path);
  CHECK(r.t == s.t);
  CHECK(r.rho.grid == s.rho.grid);
  CHECK(r.rho.v == s.rho.v);
  CHECK(r.u.x == s.u.x);
  CHECK(r.u.y == s.u.y);
  CHECK(r.phi.v == s.phi.v);
  CHECK(r.theta.v == s.theta.v);
}

TEST_CASE("corrupted magic bytes are rejected") {
  const std::string path = (temp_dir() / "bad_magic.bin").string();
  write_snapshot(sample_state(), path);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  CHECK_THROWS_AS(read_snapshot(path), SnapshotError);
}

TEST_CASE("truncated snapshot names the missing field") {
  const std::string path = (temp_dir() / "trunc.bin").string();
  solver::State s = sample_state();
  write_snapshot(s, path);
  const auto full = fs::file_size(path);
  // cut into the last field (theta)
  fs::resize_file(path, full - 8 * s.theta.size() / 2);
  try {
    read_snapshot(path);
    FAIL("expected a truncation error");
  } catch (const SnapshotError& e) {
    CHECK(std::string(e.what()).find("theta") != std::string::npos);
  }
}

TEST_CASE("minimal config gets the documented defaults") {
  solver::SimConfig cfg = parse_config(kMinimalConfig);
  CHECK(cfg.grid.nx == 64);
  CHECK(cfg.phase.eps == 0.05);
  CHECK(cfg.cfl_safety == 0.4);
  CHECK(cfg.eos.kind == thermo::EosKind::IdealGas);
  CHECK(cfg.eos.R == 1.0);
  CHECK(cfg.visc.nu > 0.0);
  CHECK(cfg.t_end == 0.01);
}

TEST_CASE("config round trip through serialization") {
  solver::SimConfig cfg = parse_config(kMinimalConfig);
  cfg.ic.preset = "planar1d";
  cfg.ic.contact_w = 0.3;
  solver::SimConfig back = parse_config(config_to_json(cfg));
  CHECK(back.grid.nx == cfg.grid.nx);
  CHECK(back.phase.eps == cfg.phase.eps);
  CHECK(back.ic.preset == cfg.ic.preset);
  CHECK(back.ic.contact_w == cfg.ic.contact_w);
}

TEST_CASE("negative eps is rejected with a named constraint") {
  std::string text = kMinimalConfig;
  text.replace(text.find("0.05"), 4, "-0.1");
  try {
    parse_config(text);
    FAIL("expected a config error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("eps must be > 0") != std::string::npos);
  }
}

TEST_CASE("unknown keys are rejected by name") {
  std::string text = kMinimalConfig;
  text.replace(text.find("\"eps\""), 5, "\"epsilonn\"");
  try {
    parse_config(text);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("epsilonn") != std::string::npos);
  }
}

TEST_CASE("malformed JSON is a config error") {
  CHECK_THROWS_AS(parse_config("{\"grid\": "), ConfigError);
}

TEST_CASE("manifest round trip") {
  solver::RunManifest m;
  m.snapshot_paths = {"a.bin", "b.bin"};
  m.snapshot_times = {0.0, 0.5};
  m.diagnostics_csv = "diag.csv";
  m.config_json = kMinimalConfig;
  m.wall_seconds = 1.25;
  const std::string path = (temp_dir() / "manifest.json").string();
  write_manifest(m, path);
  solver::RunManifest r = read_manifest(path);
  CHECK(r.snapshot_paths == m.snapshot_paths);
  CHECK(r.snapshot_times == m.snapshot_times);
  CHECK(r.diagnostics_csv == m.diagnostics_csv);
  CHECK(r.schema_version == m.schema_version);
  solver::SimConfig cfg = parse_config(r.config_json);
  CHECK(cfg.grid.nx == 64);
}

TEST_CASE("zero-length run emits exactly one snapshot") {
  solver::SimConfig cfg = parse_config(kMinimalConfig);
  cfg.t_end = 0.0;
  cfg.output_dir = (temp_dir() / "run0").string();
  solver::RunManifest m = solver::run(cfg);
  CHECK(m.snapshot_paths.size() == 1);
  CHECK(m.snapshot_times.size() == 1);
  CHECK(m.snapshot_times[0] == 0.0);
  CHECK(fs::exists(m.snapshot_paths[0]));
  CHECK(fs::exists(m.diagnostics_csv));
  // diagnostics header contract
  std::ifstream f(m.diagnostics_csv);
  std::string header;
  std::getline(f, header);
  CHECK(header == "t,mass,momentum_x,momentum_y,phase_mass,total_energy,mu_integral");
}

TEST_CASE("short run emits strictly increasing times and valid paths") {
  solver::SimConfig cfg = parse_config(kMinimalConfig);
  cfg.ic.preset = "planar1d";
  cfg.ic.theta0 = 20.0;
  cfg.t_end = 0.004;
  cfg.snapshot_interval = 0.001;
  cfg.output_dir = (temp_dir() / "run1").string();
  solver::RunManifest m = solver::run(cfg);
  REQUIRE(m.snapshot_paths.size() >= 2);
  for (std::size_t i = 0; i < m.snapshot_paths.size(); ++i) {
    CHECK(fs::exists(m.snapshot_paths[i]));
    if (i > 0) CHECK(m.snapshot_times[i] > m.snapshot_times[i - 1]);
  }
}
