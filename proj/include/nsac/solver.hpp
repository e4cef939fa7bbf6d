#pragma once

#include <string>
#include <vector>

#include "nsac/grid.hpp"
#include "nsac/phasefield.hpp"
#include "nsac/thermo.hpp"

namespace nsac::solver {

/// Surface tension of the equilibrium layer, integral of
/// |d_xi tanh(xi/sqrt 2)|^2 over the line = 2 sqrt(2) / 3.
inline constexpr double kSigma0 = 0.9428090415820633658;

struct State {
  grid::ScalarField rho;
  grid::VectorField u;
  grid::ScalarField phi;
  grid::ScalarField theta;
  double t = 0.0;

  explicit State(const grid::GridSpec& g)
      : rho(g, 1.0), u(g), phi(g, 1.0), theta(g, 1.0) {}
  State() = default;
};

struct Tendencies {
  grid::ScalarField rho;
  grid::VectorField u;
  grid::ScalarField phi;
  grid::ScalarField theta;

  explicit Tendencies(const grid::GridSpec& g) : rho(g), u(g), phi(g), theta(g) {}
};

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Initial-condition presets; unused parameters are ignored per preset.
struct IcSpec {
  std::string preset = "planar1d";  // planar1d | bubble2d | shear2d | uniform | acoustic1d
  double rho_minus = 1.0;           // bulk density in the phi<0 phase
  double rho_plus = 1.0;            // bulk density in the phi>0 phase
  double theta0 = 1.0;
  double u0 = 0.0;     // uniform x-velocity (planar1d) / shear amplitude (shear2d)
  double r0 = 0.25;    // bubble radius
  double x0 = 0.25;    // first planar interface position (fraction of lx)
  double x1 = 0.75;    // second planar interface position (fraction of lx)
  double amp = 1e-4;   // acoustic1d perturbation amplitude
  double contact_w = 0.0;  // planar1d contrast width; 0 means the phi-layer width
  bool balance = true; // adjust theta (planar) or rho (bubble) toward
                       // mechanical equilibrium at t=0
};

struct SimConfig {
  grid::GridSpec grid;
  thermo::EosModel eos;
  thermo::ViscosityHeat visc;
  phasefield::PhaseParams phase;
  IcSpec ic;
  double t_end = 0.1;
  double cfl_safety = 0.4;
  double snapshot_interval = 0.05;
  std::string output_dir = "out";

  void validate() const;
};

/// Right-hand sides of the five-field system, arranged for d/dt of
/// (rho, u, phi, theta). The phi tendency is the conservative form
/// recast so that rho*dphi + phi*drho telescopes to a pure divergence
/// plus the -M mu sink.
Tendencies rhs(const State& state, const SimConfig& cfg);

/// CFL bound combining acoustic advection, viscous, thermal and phase
/// diffusion constraints, scaled by cfg.cfl_safety.
double stable_dt(const State& state, const SimConfig& cfg);

/// One SSP-RK3 step; requires dt <= stable_dt. Validates the result.
State step(const State& state, const SimConfig& cfg, double dt);

void validate_state(const State& state);

struct Diagnostics {
  double mass;
  double momentum_x;
  double momentum_y;
  double phase_mass;    // integral of rho phi
  double total_energy;  // integral of rho E
  double mu_integral;   // integral of M_eps mu
};

Diagnostics diagnostics(const State& state, const SimConfig& cfg);

State make_initial_state(const SimConfig& cfg);

struct RunManifest {
  std::vector<std::string> snapshot_paths;
  std::vector<double> snapshot_times;
  std::string diagnostics_csv;
  std::string config_json;  // echo of the configuration
  double wall_seconds = 0.0;
  int schema_version = 1;
};

/// Integrates from the IC preset to t_end, writing snapshots and
/// diagnostics under cfg.output_dir; returns the manifest (also written
/// as manifest.json).
RunManifest run(const SimConfig& cfg);

}  // namespace nsac::solver
