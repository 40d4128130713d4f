#include "ewbem/material.hpp"

#include <cmath>
#include <string>

namespace ewbem {

Material::Material(double lambda, double mu, double rho) : lambda_(lambda), mu_(mu), rho_(rho) {
  if (!(mu_ > 0.0)) throw ConfigError("material: mu must be positive");
  if (!(rho_ > 0.0)) throw ConfigError("material: rho must be positive");
  if (!(lambda_ + 2.0 * mu_ > 0.0)) throw ConfigError("material: lambda + 2 mu must be positive");
  const double nu = poisson();
  if (!(nu > -1.0 && nu < 0.5)) {
    throw ConfigError("material: Poisson ratio " + std::to_string(nu) + " outside (-1, 0.5)");
  }
}

Material Material::from_lame(double lambda, double mu, double rho) { return Material(lambda, mu, rho); }

Material Material::from_young(double young, double poisson, double rho) {
  if (!(young > 0.0)) throw ConfigError("material: E must be positive");
  if (!(poisson > -1.0 && poisson < 0.5)) throw ConfigError("material: nu must lie in (-1, 0.5)");
  const double mu = young / (2.0 * (1.0 + poisson));
  const double lambda = young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  return Material(lambda, mu, rho);
}

WaveSpeeds wave_speeds(const Material& m) {
  return {std::sqrt(m.mu() / m.rho()), std::sqrt((m.lambda() + 2.0 * m.mu()) / m.rho())};
}

Wavenumbers wavenumbers(const Material& m, ComplexFrequency w) {
  const WaveSpeeds c = wave_speeds(m);
  return {w.omega / c.shear, w.omega / c.pressure};
}

}  // namespace ewbem
