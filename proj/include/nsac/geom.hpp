#pragma once

#include <cstdint>
#include <vector>

#include "nsac/solver.hpp"

namespace nsac::geom {

struct GeomError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One-sided limits extrapolated to the interface (Richardson from
/// offsets delta and 2*delta along +/- n). Stress is the sharp-interface
/// stress 2 nu D(u) + lambda (div u) I - p I.
struct SideTraces {
  double rho_plus = 0, rho_minus = 0;
  double ux_plus = 0, uy_plus = 0, ux_minus = 0, uy_minus = 0;
  double theta_plus = 0, theta_minus = 0;
  double p_plus = 0, p_minus = 0;
  // stress components per side
  double sxx_plus = 0, sxy_plus = 0, syy_plus = 0;
  double sxx_minus = 0, sxy_minus = 0, syy_minus = 0;
};

/// A point on the phi = 0 contour. n points toward phi > 0 (Omega+);
/// kappa > 0 where the phi < 0 region is locally convex.
struct InterfaceSample {
  double x = 0, y = 0;
  double nx = 0, ny = 0;
  double kappa = 0;
  double vn = 0;
  double arc = 0;
  SideTraces traces;
};

/// Zero crossings of phi: linear interpolation along the axis in 1D,
/// marching squares with contour-ordered vertices in 2D.
std::vector<InterfaceSample> extract_interface(const grid::ScalarField& phi);

/// Fills n and kappa: n = grad phi/|grad phi|, kappa = div(n), both
/// evaluated on the grid and interpolated to the samples.
void geometry(const grid::ScalarField& phi, std::vector<InterfaceSample>& samples);

/// V_n from a snapshot pair: the normal displacement of each sample to
/// the nearest point of the later contour, divided by dt_pair.
void normal_velocity(std::vector<InterfaceSample>& samples,
                     const grid::ScalarField& phi1, const grid::ScalarField& phi2,
                     double dt_pair);

/// One-sided traces at x +/- delta n and x +/- 2 delta n, linearly
/// extrapolated to the interface. Requires delta >= 3 eps.
void one_sided_traces(const solver::State& state, const thermo::EosModel& eos,
                      const thermo::ViscosityHeat& visc,
                      std::vector<InterfaceSample>& samples, double delta,
                      double eps);

/// Geometric signed distance to the extracted contour, negative where
/// phi < 0, valid on the band |d| <= band.
struct SignedDistanceField {
  grid::ScalarField d;
  std::vector<std::uint8_t> valid;
  double band = 0;
};

SignedDistanceField signed_distance(const grid::ScalarField& phi, double band);

/// Bubble radius from the phase fraction: r = sqrt(area(phi<0)/pi) with
/// the sharp area estimated by the cell sum of (1 - phi)/2.
double bubble_radius(const grid::ScalarField& phi);

/// CSV export of samples (arc,x,y,nx,ny,kappa,Vn,traces...).
void write_samples_csv(const std::vector<InterfaceSample>& samples,
                       const std::string& path);

}  // namespace nsac::geom
