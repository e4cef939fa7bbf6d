#include "nsac/thermo.hpp"

#include <cmath>

namespace nsac::thermo {

namespace {
void require_positive(double rho, double theta) {
  if (!(rho > 0.0)) throw std::domain_error("eos: rho must be > 0");
  if (!(theta > 0.0)) throw std::domain_error("eos: theta must be > 0");
}
}  // namespace

EosEval eos_eval(const EosModel& eos, double rho, double theta) {
  require_positive(rho, theta);
  switch (eos.kind) {
    case EosKind::IdealGas:
      return {eos.R * rho * theta, eos.cv * theta, eos.cv, eos.R * rho, 0.0};
    case EosKind::StiffenedGas:
      return {eos.R * rho * theta + eos.a * rho * rho, eos.cv * theta + eos.a * rho,
              eos.cv, eos.R * rho, eos.a};
  }
  throw std::logic_error("unreachable eos kind");
}

double check_compatibility(const EosModel& eos, double rho, double theta) {
  const EosEval v = eos_eval(eos, rho, theta);
  return v.p - rho * rho * v.e_rho - theta * v.p_theta;
}

double entropy(const EosModel& eos, double rho, double theta) {
  require_positive(rho, theta);
  if (eos.kind != EosKind::IdealGas)
    throw UnsupportedEosError("entropy is defined only for the ideal gas");
  return eos.cv * std::log(theta) - eos.R * std::log(rho);
}

double check_maxwell(const EosModel& eos, double rho, double theta, double h) {
  require_positive(rho, theta);
  if (!(h > 0.0)) throw std::domain_error("check_maxwell: h must be > 0");
  const EosEval v = eos_eval(eos, rho, theta);
  const double ds_dtheta =
      (entropy(eos, rho, theta + h) - entropy(eos, rho, theta - h)) / (2.0 * h);
  const double ds_drho =
      (entropy(eos, rho + h, theta) - entropy(eos, rho - h, theta)) / (2.0 * h);
  return std::abs(ds_dtheta - v.e_theta / theta) +
         std::abs(ds_drho - (v.e_rho - v.p / (rho * rho)) / theta);
}

double p_rho(const EosModel& eos, double rho, double theta) {
  require_positive(rho, theta);
  switch (eos.kind) {
    case EosKind::IdealGas:
      return eos.R * theta;
    case EosKind::StiffenedGas:
      return eos.R * theta + 2.0 * eos.a * rho;
  }
  throw std::logic_error("unreachable eos kind");
}

double sound_speed(const EosModel& eos, double rho, double theta) {
  const EosEval v = eos_eval(eos, rho, theta);
  const double c2 =
      p_rho(eos, rho, theta) + v.p_theta * v.p_theta * theta / (rho * rho * v.e_theta);
  return std::sqrt(c2);
}

}  // namespace nsac::thermo
