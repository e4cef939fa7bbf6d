#include "nsac/phasefield.hpp"

#include <cmath>

namespace nsac::phasefield {

double double_well(double phi) {
  const double w = 1.0 - phi * phi;
  return 0.25 * w * w;
}

double free_energy_density(double rho, double phi, std::array<double, 2> grad_phi,
                           double eps) {
  if (!(rho > 0.0)) throw std::domain_error("free_energy_density: rho must be > 0");
  if (!(eps > 0.0)) throw std::domain_error("free_energy_density: eps must be > 0");
  const double g2 = grad_phi[0] * grad_phi[0] + grad_phi[1] * grad_phi[1];
  return double_well(phi) / (eps * rho) + 0.5 * eps * g2 / rho;
}

grid::ScalarField chemical_potential_field(const grid::ScalarField& rho,
                                           const grid::ScalarField& phi, double eps) {
  grid::require_same_grid(rho.grid, phi.grid, "chemical_potential_field");
  if (grid::field_min(rho) <= kRhoFloor)
    throw std::domain_error("chemical_potential_field: rho at or below vacuum floor");
  grid::ScalarField lap = grid::laplacian(phi);
  grid::ScalarField mu(phi.grid);
  const double ieps = 1.0 / eps;
  for (std::size_t c = 0; c < mu.size(); ++c) {
    const double p = phi.v[c];
    mu.v[c] = (ieps * (p * p * p - p) - eps * lap.v[c]) / rho.v[c];
  }
  return mu;
}

grid::VectorField capillary_stress_div(const grid::ScalarField& phi, double eps) {
  grid::VectorField g = grid::gradient(phi);
  grid::SymTensorField t(phi.grid);
  for (std::size_t c = 0; c < phi.size(); ++c) {
    t.xx[c] = g.x[c] * g.x[c];
    t.xy[c] = g.x[c] * g.y[c];
    t.yy[c] = g.y[c] * g.y[c];
  }
  grid::VectorField out = grid::divergence(t);
  for (std::size_t c = 0; c < phi.size(); ++c) {
    out.x[c] *= -eps;
    out.y[c] *= -eps;
  }
  return out;
}

double equilibrium_profile(double xi) { return std::tanh(xi / std::sqrt(2.0)); }

double surface_tension(double L, int n) {
  if (L < 8.0) throw std::invalid_argument("surface_tension: L must be >= 8");
  if (n < 201 || n % 2 == 0)
    throw std::invalid_argument("surface_tension: n must be odd and >= 201");
  const double h = 2.0 * L / (n - 1);
  auto integrand = [](double xi) {
    const double t = std::tanh(xi / std::sqrt(2.0));
    const double d = (1.0 - t * t) / std::sqrt(2.0);  // d/dxi tanh(xi/sqrt 2)
    return d * d;
  };
  double s = integrand(-L) + integrand(L);
  for (int i = 1; i < n - 1; ++i) {
    s += (i % 2 == 1 ? 4.0 : 2.0) * integrand(-L + i * h);
  }
  return s * h / 3.0;
}

}  // namespace nsac::phasefield
