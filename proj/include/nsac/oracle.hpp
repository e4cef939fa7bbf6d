#pragma once

#include <functional>
#include <vector>

#include "nsac/phasefield.hpp"
#include "nsac/thermo.hpp"

namespace nsac::oracle {

/// Leading-order layer functions on a truncated xi-grid [-L, L].
struct InnerProfile {
  std::vector<double> xi;
  std::vector<double> phi0;
  std::vector<double> dphi0;  // d phi0 / d xi, from the ODE right-hand side
  std::vector<double> rho0;
  std::vector<double> un0;    // u0 . n
  std::vector<double> theta0;
  std::vector<double> mu0;

  double step() const { return xi[1] - xi[0]; }
  std::size_t size() const { return xi.size(); }
};

/// Integrates d phi/d xi = (1 - phi^2)/sqrt(2), phi(0) = 0, both directions
/// with classical RK4. Requires L >= 8 and odd n >= 801.
InnerProfile solve_phi_profile(double L, int n);

/// Fills the remaining layer fields with a member of the solution family:
/// un0 and theta0 constant in xi, rho0 from the given profile function,
/// mu0 = chi * rho0 * dphi0 * (vn - un0).
InnerProfile make_family(double L, int n, std::function<double(double)> rho_of_xi,
                         double un, double theta, double vn,
                         phasefield::MobilityMode mode);

struct LayerQuadratures {
  double sigma;     // integral of |d phi0|^2
  double weighted;  // integral of rho0 |d phi0|^2
};

LayerQuadratures layer_quadratures(const InnerProfile& profile);

/// Max-norm residuals of the zeroth-order layer system, evaluated by
/// fourth-order finite differences on the xi-grid.
struct ZerothResiduals {
  double mass;          // -rho' Vn + (rho un)' . n
  double momentum;      // (lambda+2nu) un'' + (1/4)((phi^2-1)^2)' - (1/2)(|phi'|^2)'
  double phase;         // chi rho phi' (Vn - un) - mu0
  double potential;     // rho mu0 + phi'' - (phi^3 - phi)
  double temperature;   // k theta'' + (2nu+lambda)(un')^2 + chi mu0^2
  double mech_balance;  // (lambda+2nu) un' + (1/4)(phi^2-1)^2 - (1/2)|phi'|^2
  double mass_flux;     // max_xi | rho (un - Vn) - value at xi=0 |
};

ZerothResiduals zeroth_residuals(const InnerProfile& profile, double vn,
                                 phasefield::MobilityMode mode,
                                 const thermo::ViscosityHeat& visc);

/// rho0 (vn - un) * (rho0 sigma) + sigma kappa; zero iff the C2 kinematic
/// law rho^2 (Vn - u.n) = -kappa holds (constant layer density).
double lemma25_check(double rho0, double vn, double un, double kappa);

}  // namespace nsac::oracle
