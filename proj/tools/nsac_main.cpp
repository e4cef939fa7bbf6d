// Command-line front end: run / sweep / verify / oracle.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nsac/geom.hpp"
#include "nsac/io.hpp"
#include "nsac/oracle.hpp"
#include "nsac/solver.hpp"
#include "nsac/verifier.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nsac;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io::ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string out_root(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("NSAC_OUT")) return env;
  return "";
}

phasefield::MobilityMode parse_mode(const std::string& s) {
  if (s == "C1") return phasefield::MobilityMode::C1;
  if (s == "C2") return phasefield::MobilityMode::C2;
  throw io::ConfigError("mode must be C1 or C2, got \"" + s + "\"");
}

int cmd_run(const std::string& config_path, const std::string& out) {
  solver::SimConfig cfg = io::parse_config(slurp(config_path));
  const std::string root = out_root(out);
  if (!root.empty()) cfg.output_dir = root;
  solver::RunManifest m = solver::run(cfg);
  std::cout << "wrote " << m.snapshot_paths.size() << " snapshots under "
            << cfg.output_dir << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& eps,
              const std::string& out, int jobs) {
  // Sweep config: {"scenario": ..., "mode": "C1"|"C2", "output_dir": ...}
  json doc = json::parse(slurp(config_path));
  const std::string scenario = doc.value("scenario", "planar");
  const auto mode = parse_mode(doc.value("mode", "C1"));
  std::string dir = out_root(out);
  if (dir.empty()) dir = doc.value("output_dir", "sweep_out");

  verifier::SweepReport rep = verifier::eps_sweep(scenario, eps, mode, dir, jobs);
  verifier::write_report(rep, dir);
  for (const auto& [name, m] : rep.metrics) {
    std::cout << name << ": slope=" << m.slope
              << (m.exact ? " (exact)" : "")
              << (m.mandatory ? " [mandatory]" : "") << "\n";
  }
  const bool ok = rep.all_mandatory_convergent();
  std::cout << (ok ? "sweep PASS" : "sweep FAIL") << "\n";
  return ok ? 0 : 1;
}

int cmd_verify(const std::string& manifest_path, const std::string& mode_s,
               double sigma, const std::string& out) {
  json doc = json::parse(slurp(manifest_path));
  std::string dir = out_root(out);
  if (doc.contains("runs")) {
    // Sweep manifest: re-run the convergence analysis.
    verifier::SweepReport rep = verifier::analyze_sweep(manifest_path);
    if (dir.empty()) dir = fs::path(manifest_path).parent_path().string();
    verifier::write_report(rep, dir);
    const bool ok = rep.all_mandatory_convergent();
    std::cout << (ok ? "verify PASS" : "verify FAIL") << "\n";
    return ok ? 0 : 1;
  }
  // Single-run manifest: jump-condition residuals on the final snapshot pair.
  solver::RunManifest m = io::read_manifest(manifest_path);
  if (m.snapshot_paths.size() < 2)
    throw io::ConfigError("manifest has fewer than two snapshots");
  solver::SimConfig cfg = io::parse_config(m.config_json);
  const std::size_t n = m.snapshot_paths.size();
  solver::State s1 = io::read_snapshot(m.snapshot_paths[n - 2]);
  solver::State s2 = io::read_snapshot(m.snapshot_paths[n - 1]);
  verifier::JumpCheckParams params{parse_mode(mode_s), sigma, cfg.phase.eps,
                                   0.0, 0.0};
  std::vector<verifier::JumpRecord> recs =
      verifier::check_jumps(s1, s2.phi, s2.t - s1.t, cfg.eos, cfg.visc, params);
  if (dir.empty()) dir = fs::path(manifest_path).parent_path().string();
  fs::create_directories(dir);
  std::ofstream f(fs::path(dir) / "jump_records.csv");
  f << "jump_u,jump_theta,jump_rho,stress_residual,kinematic,vn_minus_un,kappa,region\n";
  f.precision(12);
  double worst = 0.0;
  for (const auto& r : recs) {
    f << r.jump_u << ',' << r.jump_theta << ',' << r.jump_rho << ','
      << r.stress_residual << ',' << r.kinematic << ',' << r.vn_minus_un << ','
      << r.kappa << ','
      << (r.region == verifier::Region::S ? "S" : "Gamma-S") << "\n";
    worst = std::max({worst, r.jump_u, r.jump_theta, std::abs(r.kinematic)});
  }
  std::cout << "checked " << recs.size() << " interface samples; worst residual "
            << worst << "\n";
  return 0;
}

int cmd_oracle(double L, int n, const std::string& out) {
  oracle::InnerProfile p = oracle::solve_phi_profile(L, n);
  oracle::LayerQuadratures q = oracle::layer_quadratures(p);
  json doc = {{"sigma", q.sigma}, {"weighted", q.weighted}, {"L", L}, {"n", n}};
  std::cout << doc.dump(2) << "\n";
  const std::string dir = out_root(out);
  if (!dir.empty()) {
    fs::create_directories(dir);
    std::ofstream f(fs::path(dir) / "inner_profile.csv");
    f << "xi,phi0,dphi0,rho0,un0,theta0,mu0\n";
    f.precision(17);
    for (std::size_t i = 0; i < p.size(); ++i) {
      f << p.xi[i] << ',' << p.phi0[i] << ',' << p.dphi0[i] << ',' << p.rho0[i]
        << ',' << p.un0[i] << ',' << p.theta0[i] << ',' << p.mu0[i] << "\n";
    }
    std::ofstream jf(fs::path(dir) / "inner_quadratures.json");
    jf << doc.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsac: diffuse-interface flow simulator and sharp-limit checker"};
  app.require_subcommand(1);

  std::string config_path, manifest_path, out, mode_s = "C1";
  std::vector<double> eps_list;
  int jobs = 0, n = 4001;
  double L = 10.0, sigma = solver::kSigma0;

  auto* run = app.add_subcommand("run", "integrate a configured case");
  run->add_option("--config", config_path, "JSON configuration")->required();
  run->add_option("--out", out, "output directory override");

  auto* sweep = app.add_subcommand("sweep", "eps-convergence sweep");
  sweep->add_option("--config", config_path, "sweep configuration JSON")->required();
  sweep->add_option("--eps", eps_list, "decreasing eps values")
      ->required()->delimiter(',');
  sweep->add_option("--jobs", jobs, "parallel runs (default: all)");
  sweep->add_option("--out", out, "output directory override");

  auto* verify = app.add_subcommand("verify", "analyze a finished run or sweep");
  verify->add_option("--manifest", manifest_path, "manifest JSON")->required();
  verify->add_option("--mode", mode_s, "mobility regime C1|C2");
  verify->add_option("--sigma", sigma, "surface tension in the stress target");
  verify->add_option("--out", out, "report directory");

  auto* orc = app.add_subcommand("oracle", "inner-layer profile and quadratures");
  orc->add_option("--L", L, "half-width of the xi interval");
  orc->add_option("--n", n, "grid points (odd)");
  orc->add_option("--out", out, "also write CSV/JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return cmd_run(config_path, out);
    if (*sweep) return cmd_sweep(config_path, eps_list, out, jobs);
    if (*verify) return cmd_verify(manifest_path, mode_s, sigma, out);
    if (*orc) return cmd_oracle(L, n, out);
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
