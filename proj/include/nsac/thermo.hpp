#pragma once

#include <stdexcept>

namespace nsac::thermo {

enum class EosKind { IdealGas, StiffenedGas };

/// Equation of state. IdealGas: p = R rho theta, e = cv theta.
/// StiffenedGas: p = R rho theta + a rho^2, e = cv theta + a rho.
/// Both satisfy p = rho^2 e_rho + theta p_theta identically.
struct EosModel {
  EosKind kind = EosKind::IdealGas;
  double R = 1.0;
  double cv = 1.0;
  double a = 0.0;

  static EosModel ideal(double R = 1.0, double cv = 1.0) {
    return EosModel{EosKind::IdealGas, R, cv, 0.0};
  }
  static EosModel stiffened(double R, double cv, double a) {
    return EosModel{EosKind::StiffenedGas, R, cv, a};
  }
  void validate() const {
    if (R <= 0.0) throw std::invalid_argument("eos.R must be > 0");
    if (cv <= 0.0) throw std::invalid_argument("eos.cv must be > 0");
    if (a < 0.0) throw std::invalid_argument("eos.a must be >= 0");
  }
};

struct EosEval {
  double p;
  double e;
  double e_theta;
  double p_theta;
  double e_rho;
};

struct UnsupportedEosError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

EosEval eos_eval(const EosModel& eos, double rho, double theta);

/// p - rho^2 e_rho - theta p_theta; zero to round-off for the built-in kinds.
double check_compatibility(const EosModel& eos, double rho, double theta);

/// Entropy s(rho, theta); IdealGas only: s = cv ln theta - R ln rho.
double entropy(const EosModel& eos, double rho, double theta);

/// |ds/dtheta - e_theta/theta| + |ds/drho - (e_rho - p/rho^2)/theta|
/// with the s-partials taken by central differences of step h.
double check_maxwell(const EosModel& eos, double rho, double theta, double h);

double p_rho(const EosModel& eos, double rho, double theta);

/// c = sqrt(p_rho + p_theta^2 theta / (rho^2 e_theta)).
double sound_speed(const EosModel& eos, double rho, double theta);

struct ViscosityHeat {
  double nu = 0.1;
  double lambda = 0.1;
  double k = 0.1;

  void validate(int dim) const {
    if (nu <= 0.0) throw std::invalid_argument("visc.nu must be > 0");
    if (lambda <= 0.0) throw std::invalid_argument("visc.lambda must be > 0");
    if (k <= 0.0) throw std::invalid_argument("visc.k must be > 0");
    if (lambda + 2.0 / dim * nu < 0.0)
      throw std::invalid_argument("visc: lambda + (2/N) nu must be >= 0");
  }
};

}  // namespace nsac::thermo
