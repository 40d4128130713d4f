#pragma once

#include "ewbem/material.hpp"
#include "ewbem/types.hpp"

namespace ewbem {

/// Scalar radial functions of the elastodynamic fundamental solution and
/// their exact radial derivatives.
struct RadialFunctions {
  Complex phi;
  Complex psi;
  Complex dphi;
  Complex dpsi;
};

struct KernelValue {
  Mat3c U;  // displacement kernel, row = load direction i, column = component j
  Mat3c T;  // traction kernel for the field normal n(y)
};

struct StaticKernelValue {
  Mat3 U;
  Mat3 T;
};

/// phi, psi and derivatives for wavenumbers (k_s, k_p). The P-wave terms carry
/// the factor (k_p/k_s)^2 = c_s^2/c_p^2, which keeps the w -> 0 limit finite.
/// Harmonic time dependence is exp(+i w t) (the synthesis side of the DFT pair
/// in transform.hpp), so outgoing waves are exp(-i k r) and a frequency with
/// negative imaginary part yields kernels that decay with r.
///
/// Throws KernelError for r <= 0 or k_s == 0 (use the Material overload of
/// ElastodynamicKernel for the static point).
RadialFunctions phi_psi(double r, Complex k_s, Complex k_p);

/// Fundamental solution at one complex frequency. Construction precomputes the
/// wavenumbers; evaluation is allocation-free and thread-safe.
class ElastodynamicKernel {
 public:
  ElastodynamicKernel(const Material& material, ComplexFrequency w);

  RadialFunctions radial(double r) const;

  /// U_ij(x, y) = (phi delta_ij - psi e_i e_j) / (4 pi mu), e = (y - x)/r.
  Mat3c displacement(const Vec3& x, const Vec3& y) const;
  /// T_ij(x, y) = G_ikj n_k(y).
  Mat3c traction(const Vec3& x, const Vec3& y, const Vec3& n) const;
  /// Both kernels from a single evaluation of the radial functions.
  KernelValue evaluate(const Vec3& x, const Vec3& y, const Vec3& n) const;

  const Material& material() const { return material_; }
  ComplexFrequency frequency() const { return w_; }
  Wavenumbers wavenumbers() const { return k_; }

 private:
  Material material_;
  ComplexFrequency w_;
  Wavenumbers k_;
  double speed_ratio_sq_;  // c_s^2 / c_p^2
  double lame_ratio_;      // lambda / mu = c_p^2/c_s^2 - 2
};

Mat3c displacement_kernel(const Vec3& x, const Vec3& y, const Material& m, ComplexFrequency w);
Mat3c traction_kernel(const Vec3& x, const Vec3& y, const Vec3& n, const Material& m, ComplexFrequency w);

/// Kelvin (elastostatic) fundamental solution.
StaticKernelValue static_kernels(const Vec3& x, const Vec3& y, const Vec3& n, const Material& m);

}  // namespace ewbem
