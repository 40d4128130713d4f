#pragma once

#include "ewbem/types.hpp"

namespace ewbem {

/// Isotropic linear elastic solid.
class Material {
 public:
  /// Lamé constants and density. Throws ConfigError unless mu > 0, rho > 0
  /// and -1 < nu < 0.5.
  static Material from_lame(double lambda, double mu, double rho);
  /// Young's modulus and Poisson ratio. nu = 0 gives lambda = 0 exactly.
  static Material from_young(double young, double poisson, double rho);

  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  double rho() const { return rho_; }
  double young() const { return mu_ * (3.0 * lambda_ + 2.0 * mu_) / (lambda_ + mu_); }
  double poisson() const { return lambda_ / (2.0 * (lambda_ + mu_)); }

 private:
  Material(double lambda, double mu, double rho);

  double lambda_;
  double mu_;
  double rho_;
};

struct WaveSpeeds {
  double shear;     // c_s
  double pressure;  // c_p
};

struct Wavenumbers {
  Complex shear;     // k_s
  Complex pressure;  // k_p
};

/// Complex circular frequency w = k*dw - i*eta of one sweep sample.
struct ComplexFrequency {
  Complex omega;

  static ComplexFrequency sample(int k, double d_omega, double eta) {
    return {Complex(k * d_omega, -eta)};
  }
  double damping() const { return -omega.imag(); }
};

WaveSpeeds wave_speeds(const Material& m);

/// k = w / c for both wave types.
Wavenumbers wavenumbers(const Material& m, ComplexFrequency w);

}  // namespace ewbem
