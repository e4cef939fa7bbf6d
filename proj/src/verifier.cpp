#include "nsac/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>

#include "json.hpp"
#include "nsac/io.hpp"

namespace nsac::verifier {

namespace fs = std::filesystem;
using grid::ScalarField;
using nlohmann::json;

double profile_error(const solver::State& state,
                     const geom::SignedDistanceField& sdf, double eps) {
  const double sq2e = std::sqrt(2.0) * eps;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < state.phi.size(); ++c) {
    if (!sdf.valid[c]) continue;
    const double diff = state.phi.v[c] - std::tanh(sdf.d.v[c] / sq2e);
    sum += diff * diff;
    ++count;
  }
  if (count == 0) throw std::runtime_error("profile_error: empty band");
  return std::sqrt(sum / count);
}

std::vector<JumpRecord> check_jumps(const solver::State& state,
                                    const ScalarField& phi_next, double dt_pair,
                                    const thermo::EosModel& eos,
                                    const thermo::ViscosityHeat& visc,
                                    const JumpCheckParams& params) {
  const double delta = params.delta > 0.0 ? params.delta : 4.0 * params.eps;
  std::vector<geom::InterfaceSample> samples = geom::extract_interface(state.phi);
  geom::geometry(state.phi, samples);
  geom::normal_velocity(samples, state.phi, phi_next, dt_pair);
  geom::one_sided_traces(state, eos, visc, samples, delta, params.eps);

  std::vector<JumpRecord> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    const geom::SideTraces& t = s.traces;
    JumpRecord r{};
    r.jump_u = std::hypot(t.ux_plus - t.ux_minus, t.uy_plus - t.uy_minus);
    r.jump_theta = std::abs(t.theta_plus - t.theta_minus);
    r.jump_rho = std::abs(t.rho_plus - t.rho_minus);
    r.kappa = s.kappa;

    const double sjx = (t.sxx_plus - t.sxx_minus) * s.nx +
                       (t.sxy_plus - t.sxy_minus) * s.ny;
    const double sjy = (t.sxy_plus - t.sxy_minus) * s.nx +
                       (t.syy_plus - t.syy_minus) * s.ny;
    r.stress_residual = std::hypot(sjx - params.sigma * s.kappa * s.nx,
                                   sjy - params.sigma * s.kappa * s.ny);

    const double rho_bar = 0.5 * (t.rho_plus + t.rho_minus);
    const double un_bar = 0.5 * ((t.ux_plus + t.ux_minus) * s.nx +
                                 (t.uy_plus + t.uy_minus) * s.ny);
    r.vn_minus_un = s.vn - un_bar;

    const double tau_rho =
        std::max(0.05 * std::abs(rho_bar), 3.0 * params.tau_rho_noise);
    r.region = r.jump_rho <= tau_rho ? Region::S : Region::GammaMinusS;

    if (params.mode == phasefield::MobilityMode::C1) {
      r.kinematic = r.vn_minus_un;
    } else if (r.region == Region::S) {
      r.kinematic = rho_bar * rho_bar * r.vn_minus_un + s.kappa;
    } else {
      r.kinematic = r.vn_minus_un;  // kappa reported separately
    }
    out.push_back(r);
  }
  return out;
}

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + m, v.end());
  return v[m];
}

}  // namespace

BulkResiduals bulk_residual(const solver::State& s1, const solver::State& s2,
                            const solver::SimConfig& cfg,
                            const geom::SignedDistanceField& sdf) {
  const grid::GridSpec& g = s1.rho.grid;
  const double dt = s2.t - s1.t;
  if (!(dt > 0.0)) throw std::invalid_argument("bulk_residual: snapshots not ordered");
  const double band = 6.0 * cfg.phase.eps;

  // Midpoint fields.
  solver::State mid(g);
  for (std::size_t c = 0; c < g.cells(); ++c) {
    mid.rho.v[c] = 0.5 * (s1.rho.v[c] + s2.rho.v[c]);
    mid.u.x[c] = 0.5 * (s1.u.x[c] + s2.u.x[c]);
    mid.u.y[c] = 0.5 * (s1.u.y[c] + s2.u.y[c]);
    mid.phi.v[c] = 0.5 * (s1.phi.v[c] + s2.phi.v[c]);
    mid.theta.v[c] = 0.5 * (s1.theta.v[c] + s2.theta.v[c]);
  }

  ScalarField p(g), e_theta(g), p_theta(g);
  for (std::size_t c = 0; c < g.cells(); ++c) {
    const auto v = thermo::eos_eval(cfg.eos, mid.rho.v[c], mid.theta.v[c]);
    p.v[c] = v.p;
    e_theta.v[c] = v.e_theta;
    p_theta.v[c] = v.p_theta;
  }

  grid::VectorField mflux(g);
  for (std::size_t c = 0; c < g.cells(); ++c) {
    mflux.x[c] = mid.rho.v[c] * mid.u.x[c];
    mflux.y[c] = mid.rho.v[c] * mid.u.y[c];
  }
  ScalarField div_m = grid::divergence(mflux);
  ScalarField divu = grid::divergence(mid.u);
  grid::VectorField grad_divu = grid::gradient(divu);
  grid::VectorField grad_p = grid::gradient(p);
  ScalarField ux(g), uy(g);
  ux.v = mid.u.x;
  uy.v = mid.u.y;
  ScalarField lap_ux = grid::laplacian(ux);
  ScalarField lap_uy = grid::laplacian(uy);
  grid::VectorField gux = grid::gradient(ux);
  grid::VectorField guy = grid::gradient(uy);
  ScalarField lap_theta = grid::laplacian(mid.theta);
  grid::VectorField grad_theta = grid::gradient(mid.theta);
  grid::SymTensorField D = grid::deformation_tensor(mid.u);

  std::vector<double> rm, rmom, rtemp;
  double phi_dev = 0.0;
  const double nu = cfg.visc.nu, lam = cfg.visc.lambda;
  for (std::size_t c = 0; c < g.cells(); ++c) {
    const bool in_band = sdf.valid[c] && std::abs(sdf.d.v[c]) <= band;
    if (in_band) continue;
    const double drho_dt = (s2.rho.v[c] - s1.rho.v[c]) / dt;
    rm.push_back(std::abs(drho_dt + div_m.v[c]));

    const double dux_dt = (s2.u.x[c] - s1.u.x[c]) / dt;
    const double duy_dt = (s2.u.y[c] - s1.u.y[c]) / dt;
    const double adv_x = mid.u.x[c] * gux.x[c] + mid.u.y[c] * gux.y[c];
    const double adv_y = mid.u.x[c] * guy.x[c] + mid.u.y[c] * guy.y[c];
    const double mx = mid.rho.v[c] * (dux_dt + adv_x) + grad_p.x[c] -
                      nu * lap_ux.v[c] - (nu + lam) * grad_divu.x[c];
    const double my = mid.rho.v[c] * (duy_dt + adv_y) + grad_p.y[c] -
                      nu * lap_uy.v[c] - (nu + lam) * grad_divu.y[c];
    rmom.push_back(std::hypot(mx, my));

    const double dtheta_dt = (s2.theta.v[c] - s1.theta.v[c]) / dt;
    const double adv_t =
        mid.u.x[c] * grad_theta.x[c] + mid.u.y[c] * grad_theta.y[c];
    const double d2 =
        D.xx[c] * D.xx[c] + 2.0 * D.xy[c] * D.xy[c] + D.yy[c] * D.yy[c];
    const double rt = e_theta.v[c] * mid.rho.v[c] * (dtheta_dt + adv_t) +
                      mid.theta.v[c] * p_theta.v[c] * divu.v[c] -
                      cfg.visc.k * lap_theta.v[c] - 2.0 * nu * d2 -
                      lam * divu.v[c] * divu.v[c];
    rtemp.push_back(std::abs(rt));

    phi_dev = std::max(phi_dev, std::abs(std::abs(mid.phi.v[c]) - 1.0));
  }
  if (rm.empty()) throw std::runtime_error("bulk_residual: empty mask");

  BulkResiduals out{};
  out.cells = rm.size();
  out.mass_max = *std::max_element(rm.begin(), rm.end());
  out.momentum_max = *std::max_element(rmom.begin(), rmom.end());
  out.temperature_max = *std::max_element(rtemp.begin(), rtemp.end());
  out.mass_median = median_of(std::move(rm));
  out.momentum_median = median_of(std::move(rmom));
  out.temperature_median = median_of(std::move(rtemp));
  out.phi_deviation_max = phi_dev;
  return out;
}

bool SweepReport::all_mandatory_convergent() const {
  for (const auto& [name, m] : metrics) {
    if (m.mandatory && !m.convergent()) return false;
  }
  return true;
}

solver::SimConfig make_scenario(const std::string& scenario, double eps,
                                phasefield::MobilityMode mode,
                                const std::string& out_dir) {
  solver::SimConfig cfg;
  cfg.phase.eps = eps;
  cfg.phase.mode = mode;
  cfg.eos = thermo::EosModel::ideal(1.0, 1.0);
  cfg.visc = {0.1, 0.1, 0.1};
  cfg.output_dir = out_dir;

  if (scenario == "planar" || scenario == "planar_relax") {
    cfg.grid.dim = 1;
    cfg.grid.ny = 1;
    cfg.grid.lx = 2.0;
    // Contrast sweep: h = eps/8. Relaxation sweep: h shrinking faster than
    // eps, so the discrete-profile error (a function of h/eps) decreases
    // along the sweep instead of staying constant.
    double h = eps / 8.0;
    if (scenario == "planar_relax") h *= std::sqrt(eps / 0.08);
    cfg.grid.nx = static_cast<int>(std::lround(cfg.grid.lx / h));
    cfg.ic.preset = "planar1d";
    cfg.ic.x0 = 0.25;
    cfg.ic.x1 = 0.75;
    // Hot background: the in-layer pressure dip is eps*(dphi/dx)^2 ~ 1/(2 eps),
    // so p_far must dominate it to keep theta positive after balancing.
    cfg.ic.theta0 = 100.0;
    cfg.ic.balance = true;
    // Contrast width well above the largest trace offset (2*delta = 6*eps),
    // so every eps probes the smooth part of the same outer profile.
    cfg.ic.contact_w = 0.35;
    if (scenario == "planar") {
      cfg.ic.rho_minus = 1.0;
      cfg.ic.rho_plus = 2.0;
      cfg.ic.u0 = 0.2;
      cfg.t_end = 0.1;
    } else {
      cfg.ic.rho_minus = 1.0;
      cfg.ic.rho_plus = 1.0;
      cfg.ic.u0 = 0.0;
      cfg.t_end = 0.05;
    }
    // eps-independent cadence: every run is measured at the same absolute
    // time, so transient phase differences do not alias into the slopes.
    cfg.snapshot_interval = 0.002;
    return cfg;
  }
  throw std::invalid_argument("unknown sweep scenario \"" + scenario + "\"");
}

namespace {

struct EpsMetrics {
  std::map<std::string, std::pair<double, double>> entries;  // name -> (max, median)
};

EpsMetrics analyze_run(const solver::RunManifest& m) {
  if (m.snapshot_paths.size() < 2)
    throw std::runtime_error("sweep run has fewer than two snapshots");
  const solver::SimConfig cfg = io::parse_config(m.config_json);
  const double eps = cfg.phase.eps;
  const std::size_t n = m.snapshot_paths.size();
  // Adjacent pair for the bulk residual (small dt keeps the pair's
  // time-discretization error below the spatial one); a wider baseline
  // for the normal-velocity estimate, which divides by the pair dt.
  solver::State s1 = io::read_snapshot(m.snapshot_paths[n - 2]);
  solver::State s2 = io::read_snapshot(m.snapshot_paths[n - 1]);
  const std::size_t jbase = n >= 6 ? n - 6 : 0;
  solver::State sj = io::read_snapshot(m.snapshot_paths[jbase]);

  geom::SignedDistanceField sdf = geom::signed_distance(s1.phi, 8.0 * eps);

  // delta = 3 eps keeps 2*delta inside the allowed fraction of the domain
  // at the coarsest eps of the sweep.
  JumpCheckParams jp{cfg.phase.mode, solver::kSigma0, eps, 3.0 * eps, 0.0};
  std::vector<JumpRecord> jumps =
      check_jumps(sj, s2.phi, s2.t - sj.t, cfg.eos, cfg.visc, jp);

  auto agg = [&](auto getter) {
    std::vector<double> v;
    for (const auto& j : jumps) v.push_back(std::abs(getter(j)));
    const double mx = *std::max_element(v.begin(), v.end());
    return std::pair<double, double>{mx, median_of(std::move(v))};
  };

  EpsMetrics out;
  out.entries["jump_u"] = agg([](const JumpRecord& j) { return j.jump_u; });
  out.entries["jump_theta"] = agg([](const JumpRecord& j) { return j.jump_theta; });
  out.entries["kinematic"] = agg([](const JumpRecord& j) { return j.kinematic; });
  out.entries["stress_jump"] =
      agg([](const JumpRecord& j) { return j.stress_residual; });

  const double pe = profile_error(s1, sdf, eps);
  out.entries["profile_error"] = {pe, pe};

  BulkResiduals br = bulk_residual(s1, s2, cfg, sdf);
  out.entries["bulk_mass"] = {br.mass_max, br.mass_median};
  out.entries["bulk_momentum"] = {br.momentum_max, br.momentum_median};
  out.entries["bulk_temperature"] = {br.temperature_max, br.temperature_median};
  out.entries["phi_bulk_dev"] = {br.phi_deviation_max, br.phi_deviation_max};
  return out;
}

double fit_slope(const std::vector<double>& eps, const std::vector<double>& val,
                 std::size_t upto) {
  // least-squares slope of ln(val) vs ln(eps) over the first `upto` points
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < upto; ++i) {
    const double x = std::log(eps[i]);
    const double y = std::log(std::max(val[i], 1e-16));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(upto);
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

const std::vector<std::string> kMandatoryPlanar = {"jump_u", "jump_theta",
                                                   "kinematic", "stress_jump"};
const std::vector<std::string> kMandatoryRelax = {"profile_error"};

}  // namespace

SweepReport analyze_sweep(const std::string& sweep_manifest_path) {
  std::ifstream f(sweep_manifest_path);
  if (!f) throw std::runtime_error("cannot read sweep manifest: " + sweep_manifest_path);
  json doc = json::parse(f);

  SweepReport report;
  report.scenario = doc.value("scenario", "");
  report.mode = doc.value("mode", "");
  std::vector<EpsMetrics> per_eps;
  for (const auto& r : doc["runs"]) {
    report.eps.push_back(r["eps"].get<double>());
    per_eps.push_back(
        analyze_run(io::read_manifest(r["manifest"].get<std::string>())));
  }
  if (report.eps.size() < 3)
    throw std::invalid_argument("eps_sweep requires at least 3 eps values");
  for (std::size_t i = 1; i < report.eps.size(); ++i)
    if (!(report.eps[i] < report.eps[i - 1]))
      throw std::invalid_argument("eps list must be strictly decreasing");

  const auto& mandatory = report.scenario == "planar_relax" ? kMandatoryRelax
                                                            : kMandatoryPlanar;
  for (const auto& [name, unused] : per_eps.front().entries) {
    (void)unused;
    MetricSeries s;
    for (const auto& em : per_eps) {
      s.values.push_back(em.entries.at(name).first);
      s.medians.push_back(em.entries.at(name).second);
    }
    s.exact = std::all_of(s.values.begin(), s.values.end(),
                          [](double v) { return v < 1e-14; });
    s.slope = s.exact ? 0.0 : fit_slope(report.eps, s.values, s.values.size());
    s.decreasing = s.values.back() < s.values.front();
    s.mandatory = std::find(mandatory.begin(), mandatory.end(), name) !=
                  mandatory.end();
    report.metrics[name] = std::move(s);
  }
  return report;
}

SweepReport eps_sweep(const std::string& scenario,
                      const std::vector<double>& eps_list,
                      phasefield::MobilityMode mode, const std::string& out_dir,
                      int jobs) {
  if (eps_list.size() < 3)
    throw std::invalid_argument("eps_sweep requires at least 3 eps values");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("eps list must be strictly decreasing");

  fs::create_directories(out_dir);
  if (jobs <= 0) jobs = static_cast<int>(eps_list.size());

  std::vector<std::string> run_dirs;
  for (double eps : eps_list) {
    char sub[48];
    std::snprintf(sub, sizeof(sub), "eps_%g", eps);
    run_dirs.push_back((fs::path(out_dir) / sub).string());
  }

  std::vector<std::future<void>> tasks;
  std::size_t next = 0;
  while (next < eps_list.size()) {
    tasks.clear();
    for (int j = 0; j < jobs && next < eps_list.size(); ++j, ++next) {
      const double eps = eps_list[next];
      const std::string dir = run_dirs[next];
      tasks.push_back(std::async(std::launch::async, [=]() {
        solver::SimConfig cfg = make_scenario(scenario, eps, mode, dir);
        solver::run(cfg);
      }));
    }
    for (auto& t : tasks) t.get();
  }

  json doc;
  doc["scenario"] = scenario;
  doc["mode"] = mode == phasefield::MobilityMode::C1 ? "C1" : "C2";
  doc["runs"] = json::array();
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    doc["runs"].push_back(
        {{"eps", eps_list[i]},
         {"manifest", (fs::path(run_dirs[i]) / "manifest.json").string()}});
  }
  const std::string manifest_path =
      (fs::path(out_dir) / "sweep_manifest.json").string();
  {
    std::ofstream f(manifest_path);
    f << doc.dump(2) << "\n";
  }
  return analyze_sweep(manifest_path);
}

void write_report(const SweepReport& report, const std::string& out_dir) {
  fs::create_directories(out_dir);
  for (const auto& [name, m] : report.metrics) {
    std::ofstream f((fs::path(out_dir) / (name + ".csv")).string());
    f << "eps,max,median,slope_so_far\n";
    f.precision(12);
    for (std::size_t i = 0; i < report.eps.size(); ++i) {
      const double slope_so_far =
          i >= 1 ? fit_slope(report.eps, m.values, i + 1) : 0.0;
      f << report.eps[i] << ',' << m.values[i] << ',' << m.medians[i] << ','
        << slope_so_far << '\n';
    }
  }
  json doc;
  doc["scenario"] = report.scenario;
  doc["mode"] = report.mode;
  for (const auto& [name, m] : report.metrics) {
    doc["metrics"][name] = {
        {"values", m.values},
        {"medians", m.medians},
        {"slope", m.slope},
        {"verdict", m.exact ? "exact" : (m.convergent() ? "convergent" : "non-convergent")},
        {"mandatory", m.mandatory}};
  }
  doc["all_mandatory_convergent"] = report.all_mandatory_convergent();
  std::ofstream f((fs::path(out_dir) / "sweep_summary.json").string());
  f << doc.dump(2) << "\n";
}

CurvatureFlowReport curvature_flow_check(const solver::RunManifest& manifest,
                                         double rho, double eps, double t_start) {
  CurvatureFlowReport rep{};
  rep.rho = rho;
  for (std::size_t i = 0; i < manifest.snapshot_paths.size(); ++i) {
    const solver::State s = io::read_snapshot(manifest.snapshot_paths[i]);
    const double r = geom::bubble_radius(s.phi);
    if (r < 4.0 * eps)
      throw std::runtime_error("curvature_flow_check: bubble vanished (r < 4 eps)");
    rep.times.push_back(s.t);
    rep.radii.push_back(r);
  }
  std::size_t i0 = 0;
  while (i0 + 2 < rep.times.size() && rep.times[i0] < t_start) ++i0;
  rep.r0 = rep.radii[i0];
  const double t0 = rep.times[i0];

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double n = 0;
  rep.max_rel_dev = 0.0;
  for (std::size_t i = i0; i < rep.times.size(); ++i) {
    const double t = rep.times[i] - t0;
    const double r2 = rep.radii[i] * rep.radii[i];
    const double law = rep.r0 * rep.r0 - 2.0 * t / (rho * rho);
    rep.max_rel_dev =
        std::max(rep.max_rel_dev, std::abs(r2 - law) / (rep.r0 * rep.r0));
    sx += t;
    sy += r2;
    sxx += t * t;
    sxy += t * r2;
    n += 1.0;
  }
  const double denom = n * sxx - sx * sx;
  rep.fitted_drdt2 = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  return rep;
}

}  // namespace nsac::verifier
