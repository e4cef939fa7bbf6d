#include "nsac/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace nsac::oracle {

namespace {

double phi_rhs(double phi) { return (1.0 - phi * phi) / std::sqrt(2.0); }

void check_params(double L, int n) {
  if (L < 8.0) throw std::invalid_argument("oracle: L must be >= 8");
  if (n < 801 || n % 2 == 0)
    throw std::invalid_argument("oracle: n must be odd and >= 801");
}

double rk4_step(double phi, double h) {
  const double k1 = phi_rhs(phi);
  const double k2 = phi_rhs(phi + 0.5 * h * k1);
  const double k3 = phi_rhs(phi + 0.5 * h * k2);
  const double k4 = phi_rhs(phi + h * k3);
  return phi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Fourth-order centered first and second derivatives; one-sided order drop
// at the two cells next to each boundary is avoided by clamping to the
// interior; residual norms below skip the outermost cells anyway.
double d1(const std::vector<double>& f, std::size_t i, double h) {
  return (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
}

double d2(const std::vector<double>& f, std::size_t i, double h) {
  return (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) /
         (12.0 * h * h);
}

double simpson(const std::vector<double>& f, double h) {
  double s = f.front() + f.back();
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return s * h / 3.0;
}

}  // namespace

InnerProfile solve_phi_profile(double L, int n) {
  check_params(L, n);
  InnerProfile p;
  p.xi.resize(n);
  p.phi0.resize(n);
  const double h = 2.0 * L / (n - 1);
  const int mid = (n - 1) / 2;
  for (int i = 0; i < n; ++i) p.xi[i] = -L + i * h;
  p.phi0[mid] = 0.0;
  for (int i = mid; i + 1 < n; ++i) p.phi0[i + 1] = rk4_step(p.phi0[i], h);
  for (int i = mid; i > 0; --i) p.phi0[i - 1] = rk4_step(p.phi0[i], -h);
  p.dphi0.resize(n);
  for (int i = 0; i < n; ++i) p.dphi0[i] = phi_rhs(p.phi0[i]);
  p.rho0.assign(n, 1.0);
  p.un0.assign(n, 0.0);
  p.theta0.assign(n, 1.0);
  p.mu0.assign(n, 0.0);
  return p;
}

InnerProfile make_family(double L, int n, std::function<double(double)> rho_of_xi,
                         double un, double theta, double vn,
                         phasefield::MobilityMode mode) {
  InnerProfile p = solve_phi_profile(L, n);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p.rho0[i] = rho_of_xi(p.xi[i]);
    if (!(p.rho0[i] > 0.0))
      throw std::domain_error("make_family: rho0 must be > 0 on the layer");
    p.un0[i] = un;
    p.theta0[i] = theta;
    p.mu0[i] = phasefield::chi(mode) * p.rho0[i] * p.dphi0[i] * (vn - un);
  }
  return p;
}

LayerQuadratures layer_quadratures(const InnerProfile& profile) {
  const std::size_t n = profile.size();
  std::vector<double> f(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = profile.dphi0[i] * profile.dphi0[i];
    g[i] = profile.rho0[i] * f[i];
  }
  const double h = profile.step();
  return {simpson(f, h), simpson(g, h)};
}

ZerothResiduals zeroth_residuals(const InnerProfile& profile, double vn,
                                 phasefield::MobilityMode mode,
                                 const thermo::ViscosityHeat& visc) {
  const std::size_t n = profile.size();
  const double h = profile.step();
  const double chi = phasefield::chi(mode);
  ZerothResiduals r{};

  std::vector<double> rho_un(n), well(n), dphi2(n), flux(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho_un[i] = profile.rho0[i] * profile.un0[i];
    const double w = profile.phi0[i] * profile.phi0[i] - 1.0;
    well[i] = w * w;
    dphi2[i] = profile.dphi0[i] * profile.dphi0[i];
    flux[i] = profile.rho0[i] * (profile.un0[i] - vn);
  }
  const double flux0 = flux[(n - 1) / 2];

  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double drho = d1(profile.rho0, i, h);
    const double drho_un = d1(rho_un, i, h);
    r.mass = std::max(r.mass, std::abs(-drho * vn + drho_un));

    const double dun = d1(profile.un0, i, h);
    const double ddun = d2(profile.un0, i, h);
    const double dwell = d1(well, i, h);
    const double ddphi2 = d1(dphi2, i, h);
    r.momentum = std::max(
        r.momentum, std::abs((visc.lambda + 2.0 * visc.nu) * ddun + 0.25 * dwell -
                             0.5 * ddphi2));
    r.mech_balance = std::max(
        r.mech_balance, std::abs((visc.lambda + 2.0 * visc.nu) * dun +
                                 0.25 * well[i] - 0.5 * dphi2[i]));

    const double dphi = d1(profile.phi0, i, h);
    r.phase = std::max(r.phase, std::abs(chi * profile.rho0[i] * dphi *
                                             (vn - profile.un0[i]) -
                                         profile.mu0[i]));

    const double ddphi = d2(profile.phi0, i, h);
    const double phi = profile.phi0[i];
    r.potential = std::max(r.potential, std::abs(profile.rho0[i] * profile.mu0[i] +
                                                 ddphi - (phi * phi * phi - phi)));

    const double ddtheta = d2(profile.theta0, i, h);
    r.temperature = std::max(
        r.temperature,
        std::abs(visc.k * ddtheta + (2.0 * visc.nu + visc.lambda) * dun * dun +
                 chi * profile.mu0[i] * profile.mu0[i]));

    r.mass_flux = std::max(r.mass_flux, std::abs(flux[i] - flux0));
  }
  return r;
}

double lemma25_check(double rho0, double vn, double un, double kappa) {
  if (!(rho0 > 0.0)) throw std::domain_error("lemma25_check: rho0 must be > 0");
  const InnerProfile p = solve_phi_profile(10.0, 4001);
  const LayerQuadratures q = layer_quadratures(p);
  const double weighted = rho0 * q.sigma;  // constant layer density
  return rho0 * (vn - un) * weighted + q.sigma * kappa;
}

}  // namespace nsac::oracle
