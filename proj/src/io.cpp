#include "nsac/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>

#include "json.hpp"

static_assert(std::endian::native == std::endian::little,
              "NSACF1 snapshots are little-endian");

namespace nsac::io {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& scope) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key()))
      throw ConfigError("unknown config key \"" + scope + it.key() + "\"");
  }
}

double get_num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
  return obj[key].get<double>();
}

}  // namespace

solver::SimConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(doc,
                      {"grid", "eos", "visc", "eps", "mobility", "ic", "t_end",
                       "cfl_safety", "snapshot_interval", "output_dir"},
                      "");

  solver::SimConfig cfg;

  if (!doc.contains("eps")) throw ConfigError("missing required key \"eps\"");
  cfg.phase.eps = doc["eps"].get<double>();
  if (!(cfg.phase.eps > 0.0)) throw ConfigError("eps must be > 0");

  if (!doc.contains("mobility")) throw ConfigError("missing required key \"mobility\"");
  const std::string mob = doc["mobility"].get<std::string>();
  if (mob == "C1")
    cfg.phase.mode = phasefield::MobilityMode::C1;
  else if (mob == "C2")
    cfg.phase.mode = phasefield::MobilityMode::C2;
  else
    throw ConfigError("mobility must be \"C1\" or \"C2\"");

  if (!doc.contains("grid")) throw ConfigError("missing required key \"grid\"");
  {
    const json& g = doc["grid"];
    reject_unknown_keys(g, {"dim", "nx", "ny", "lx", "ly"}, "grid.");
    cfg.grid.dim = static_cast<int>(get_num(g, "dim", 1));
    cfg.grid.lx = get_num(g, "lx", 1.0);
    cfg.grid.ly = get_num(g, "ly", cfg.grid.lx);
    // default resolution ties h to the layer width: h = eps/8
    const double h_default = cfg.phase.eps / 8.0;
    cfg.grid.nx =
        static_cast<int>(get_num(g, "nx", std::lround(cfg.grid.lx / h_default)));
    cfg.grid.ny = cfg.grid.dim == 2
                      ? static_cast<int>(
                            get_num(g, "ny", std::lround(cfg.grid.ly / h_default)))
                      : 1;
  }

  if (doc.contains("eos")) {
    const json& e = doc["eos"];
    reject_unknown_keys(e, {"kind", "R", "cv", "a"}, "eos.");
    const std::string kind = e.value("kind", "ideal");
    if (kind == "ideal")
      cfg.eos.kind = thermo::EosKind::IdealGas;
    else if (kind == "stiffened")
      cfg.eos.kind = thermo::EosKind::StiffenedGas;
    else
      throw ConfigError("eos.kind must be \"ideal\" or \"stiffened\"");
    cfg.eos.R = get_num(e, "R", 1.0);
    cfg.eos.cv = get_num(e, "cv", 1.0);
    cfg.eos.a = get_num(e, "a", 0.0);
  }

  if (doc.contains("visc")) {
    const json& v = doc["visc"];
    reject_unknown_keys(v, {"nu", "lambda", "k"}, "visc.");
    cfg.visc.nu = get_num(v, "nu", 0.1);
    cfg.visc.lambda = get_num(v, "lambda", 0.1);
    cfg.visc.k = get_num(v, "k", 0.1);
  }

  if (!doc.contains("ic")) throw ConfigError("missing required key \"ic\"");
  {
    const json& ic = doc["ic"];
    reject_unknown_keys(ic,
                        {"preset", "rho_minus", "rho_plus", "theta0", "u0", "r0",
                         "x0", "x1", "amp", "balance", "contact_w"},
                        "ic.");
    if (!ic.contains("preset")) throw ConfigError("missing required key ic.preset");
    cfg.ic.preset = ic["preset"].get<std::string>();
    cfg.ic.rho_minus = get_num(ic, "rho_minus", 1.0);
    cfg.ic.rho_plus = get_num(ic, "rho_plus", 1.0);
    cfg.ic.theta0 = get_num(ic, "theta0", 1.0);
    cfg.ic.u0 = get_num(ic, "u0", 0.0);
    cfg.ic.r0 = get_num(ic, "r0", 0.25);
    cfg.ic.x0 = get_num(ic, "x0", 0.25);
    cfg.ic.x1 = get_num(ic, "x1", 0.75);
    cfg.ic.amp = get_num(ic, "amp", 1e-4);
    cfg.ic.contact_w = get_num(ic, "contact_w", 0.0);
    cfg.ic.balance = ic.value("balance", true);
  }

  if (!doc.contains("t_end")) throw ConfigError("missing required key \"t_end\"");
  cfg.t_end = doc["t_end"].get<double>();
  if (cfg.t_end < 0.0) throw ConfigError("t_end must be >= 0");

  cfg.cfl_safety = get_num(doc, "cfl_safety", 0.4);
  if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety < 1.0))
    throw ConfigError("cfl_safety must be in (0,1)");
  cfg.snapshot_interval = get_num(doc, "snapshot_interval", 0.05);
  if (!(cfg.snapshot_interval > 0.0))
    throw ConfigError("snapshot_interval must be > 0");
  cfg.output_dir = doc.value("output_dir", "out");

  cfg.validate();
  return cfg;
}

std::string config_to_json(const solver::SimConfig& cfg) {
  json doc;
  doc["grid"] = {{"dim", cfg.grid.dim},
                 {"nx", cfg.grid.nx},
                 {"ny", cfg.grid.ny},
                 {"lx", cfg.grid.lx},
                 {"ly", cfg.grid.ly}};
  doc["eos"] = {{"kind", cfg.eos.kind == thermo::EosKind::IdealGas ? "ideal"
                                                                   : "stiffened"},
                {"R", cfg.eos.R},
                {"cv", cfg.eos.cv},
                {"a", cfg.eos.a}};
  doc["visc"] = {{"nu", cfg.visc.nu}, {"lambda", cfg.visc.lambda}, {"k", cfg.visc.k}};
  doc["eps"] = cfg.phase.eps;
  doc["mobility"] = cfg.phase.mode == phasefield::MobilityMode::C1 ? "C1" : "C2";
  doc["ic"] = {{"preset", cfg.ic.preset},     {"rho_minus", cfg.ic.rho_minus},
               {"rho_plus", cfg.ic.rho_plus}, {"theta0", cfg.ic.theta0},
               {"u0", cfg.ic.u0},             {"r0", cfg.ic.r0},
               {"x0", cfg.ic.x0},             {"x1", cfg.ic.x1},
               {"amp", cfg.ic.amp},           {"balance", cfg.ic.balance},
               {"contact_w", cfg.ic.contact_w}};
  doc["t_end"] = cfg.t_end;
  doc["cfl_safety"] = cfg.cfl_safety;
  doc["snapshot_interval"] = cfg.snapshot_interval;
  doc["output_dir"] = cfg.output_dir;
  return doc.dump(2);
}

namespace {

constexpr char kMagic[7] = {'N', 'S', 'A', 'C', 'F', '1', '\n'};

void write_u64(std::ofstream& f, std::uint64_t v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_f64(std::ofstream& f, double v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::ifstream& f, const char* what) {
  std::uint64_t v;
  if (!f.read(reinterpret_cast<char*>(&v), sizeof(v)))
    throw SnapshotError(std::string("snapshot truncated reading ") + what);
  return v;
}
double read_f64(std::ifstream& f, const char* what) {
  double v;
  if (!f.read(reinterpret_cast<char*>(&v), sizeof(v)))
    throw SnapshotError(std::string("snapshot truncated reading ") + what);
  return v;
}

void read_field(std::ifstream& f, std::vector<double>& out, std::size_t n,
                const char* name) {
  out.resize(n);
  if (!f.read(reinterpret_cast<char*>(out.data()),
              static_cast<std::streamsize>(n * sizeof(double))))
    throw SnapshotError(std::string("snapshot truncated in field ") + name);
}

}  // namespace

void write_snapshot(const solver::State& state, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SnapshotError("cannot open snapshot for writing: " + path);
  f.write(kMagic, sizeof(kMagic));
  const grid::GridSpec& g = state.rho.grid;
  write_u64(f, static_cast<std::uint64_t>(g.dim));
  write_u64(f, static_cast<std::uint64_t>(g.nx));
  write_u64(f, static_cast<std::uint64_t>(g.ny));
  write_f64(f, g.hx());
  write_f64(f, g.hy());
  write_f64(f, state.t);
  auto dump = [&](const std::vector<double>& v) {
    f.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  dump(state.rho.v);
  dump(state.u.x);
  if (g.dim == 2) dump(state.u.y);
  dump(state.phi.v);
  dump(state.theta.v);
  if (!f) throw SnapshotError("snapshot write failed: " + path);
}

solver::State read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SnapshotError("cannot open snapshot: " + path);
  char magic[7];
  if (!f.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw SnapshotError("snapshot magic mismatch: " + path);
  grid::GridSpec g;
  g.dim = static_cast<int>(read_u64(f, "dim"));
  g.nx = static_cast<int>(read_u64(f, "nx"));
  g.ny = static_cast<int>(read_u64(f, "ny"));
  const double hx = read_f64(f, "hx");
  const double hy = read_f64(f, "hy");
  g.lx = hx * g.nx;
  g.ly = g.dim == 2 ? hy * g.ny : 1.0;
  const double t = read_f64(f, "t");
  g.validate();
  solver::State s(g);
  s.t = t;
  const std::size_t n = g.cells();
  read_field(f, s.rho.v, n, "rho");
  read_field(f, s.u.x, n, "u_x");
  if (g.dim == 2) read_field(f, s.u.y, n, "u_y");
  read_field(f, s.phi.v, n, "phi");
  read_field(f, s.theta.v, n, "theta");
  return s;
}

void write_manifest(const solver::RunManifest& m, const std::string& path) {
  json doc;
  doc["schema_version"] = m.schema_version;
  doc["snapshots"] = json::array();
  for (std::size_t i = 0; i < m.snapshot_paths.size(); ++i) {
    doc["snapshots"].push_back(
        {{"path", m.snapshot_paths[i]}, {"time", m.snapshot_times[i]}});
  }
  doc["diagnostics_csv"] = m.diagnostics_csv;
  doc["config"] = json::parse(m.config_json);
  doc["wall_seconds"] = m.wall_seconds;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write manifest: " + path);
  f << doc.dump(2) << "\n";
}

solver::RunManifest read_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read manifest: " + path);
  json doc = json::parse(f);
  solver::RunManifest m;
  m.schema_version = doc.value("schema_version", 1);
  for (const auto& s : doc["snapshots"]) {
    m.snapshot_paths.push_back(s["path"].get<std::string>());
    m.snapshot_times.push_back(s["time"].get<double>());
  }
  m.diagnostics_csv = doc.value("diagnostics_csv", "");
  if (doc.contains("config")) m.config_json = doc["config"].dump();
  m.wall_seconds = doc.value("wall_seconds", 0.0);
  return m;
}

void write_diagnostics_csv(const std::vector<double>& times,
                           const std::vector<solver::Diagnostics>& rows,
                           const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write diagnostics: " + path);
  f << "t,mass,momentum_x,momentum_y,phase_mass,total_energy,mu_integral\n";
  f.precision(17);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const solver::Diagnostics& d = rows[i];
    f << times[i] << ',' << d.mass << ',' << d.momentum_x << ',' << d.momentum_y
      << ',' << d.phase_mass << ',' << d.total_energy << ',' << d.mu_integral
      << '\n';
  }
}

}  // namespace nsac::io
