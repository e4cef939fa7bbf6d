#pragma once

#include <array>
#include <stdexcept>

#include "nsac/grid.hpp"

namespace nsac::phasefield {

/// Vacuum guard shared by chemical potential evaluation and the solver.
inline constexpr double kRhoFloor = 1e-6;

/// Mobility regimes: C1 has M = 1, C2 has M = 1/eps.
enum class MobilityMode { C1, C2 };

inline double mobility(MobilityMode mode, double eps) {
  return mode == MobilityMode::C1 ? 1.0 : 1.0 / eps;
}

/// Indicator chi: 1 in C1, 0 in C2.
inline int chi(MobilityMode mode) { return mode == MobilityMode::C1 ? 1 : 0; }

struct PhaseParams {
  double eps = 0.04;
  MobilityMode mode = MobilityMode::C1;

  void validate() const {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  }
};

/// W(phi) = (1/4)(1 - phi^2)^2.
double double_well(double phi);

/// f(rho, phi, grad phi) = (1/(4 eps rho))(1 - phi^2)^2 + (eps/(2 rho))|grad phi|^2.
double free_energy_density(double rho, double phi, std::array<double, 2> grad_phi,
                           double eps);

/// mu = [(1/eps)(phi^3 - phi) - eps Lap phi] / rho.
grid::ScalarField chemical_potential_field(const grid::ScalarField& rho,
                                           const grid::ScalarField& phi, double eps);

/// -eps div(grad phi (x) grad phi), the momentum-equation contribution.
grid::VectorField capillary_stress_div(const grid::ScalarField& phi, double eps);

/// tanh(xi / sqrt(2)).
double equilibrium_profile(double xi);

/// Composite-Simpson quadrature of |d_xi tanh(xi/sqrt 2)|^2 over [-L, L].
/// Requires L >= 8 and odd n >= 201. Converges to (2/3) sqrt(2).
double surface_tension(double L, int n);

}  // namespace nsac::phasefield
