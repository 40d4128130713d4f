#include "ewbem/kernels.hpp"

#include <array>
#include <cmath>

namespace ewbem {
namespace {

constexpr Complex kI(0.0, 1.0);

// Below this |k_s r| the closed forms lose digits to the cancelling 1/(kr)^2
// terms, so the power series is summed instead.
constexpr double kSeriesThreshold = 0.5;
constexpr int kSeriesTerms = 26;

// With z = -i k r, r*phi = sum_m [A_m z_s^m + a B_m z_p^m] and
// r*psi = sum_m C_m [z_s^m - a z_p^m], where a = (k_p/k_s)^2.
struct SeriesTable {
  std::array<double, kSeriesTerms> A{}, B{}, C{};
  SeriesTable() {
    double fact_m = 1.0;  // m!
    for (int m = 0; m < kSeriesTerms; ++m) {
      if (m > 0) fact_m *= m;
      const double fact_m2 = fact_m * (m + 1) * (m + 2);  // (m+2)!
      A[m] = 1.0 / fact_m - (m + 1) / fact_m2;
      B[m] = (m + 1) / fact_m2;
      C[m] = 1.0 / fact_m - 3.0 * (m + 1) / fact_m2;
    }
  }
};

const SeriesTable& series_table() {
  static const SeriesTable table;
  return table;
}

RadialFunctions radial_series(double r, Complex k_s, Complex k_p, double a) {
  const SeriesTable& t = series_table();
  const Complex zs = -kI * k_s * r;
  const Complex zp = -kI * k_p * r;
  Complex ps = 1.0, pp = 1.0;
  Complex phi = 0.0, psi = 0.0, dphi = 0.0, dpsi = 0.0;
  for (int m = 0; m < kSeriesTerms; ++m) {
    const Complex fphi = t.A[m] * ps + a * t.B[m] * pp;
    const Complex fpsi = t.C[m] * (ps - a * pp);
    phi += fphi;
    psi += fpsi;
    dphi += double(m - 1) * fphi;
    dpsi += double(m - 1) * fpsi;
    ps *= zs;
    pp *= zp;
  }
  const double inv_r = 1.0 / r;
  return {phi * inv_r, psi * inv_r, dphi * inv_r * inv_r, dpsi * inv_r * inv_r};
}

// F(r) = exp(-i k r) (c0/r + c1/(k r^2) + c2/(k^2 r^3)) and dF/dr.
struct Term {
  Complex value;
  Complex derivative;
};

Term wave_term(double r, Complex k, Complex e, Complex c0, Complex c1, Complex c2) {
  const Complex ik = 1.0 / k;
  const double ir = 1.0 / r;
  const Complex poly = ir * (c0 + ir * ik * (c1 + c2 * ik * ir));
  const Complex dpoly = -ir * ir * (c0 + ir * ik * (2.0 * c1 + 3.0 * c2 * ik * ir));
  return {e * poly, e * (dpoly - kI * k * poly)};
}

RadialFunctions radial_closed(double r, Complex k_s, Complex k_p, double a) {
  const Complex es = std::exp(-kI * k_s * r);
  const Complex ep = std::exp(-kI * k_p * r);
  const Term phi_s = wave_term(r, k_s, es, 1.0, -kI, -1.0);
  const Term phi_p = wave_term(r, k_p, ep, 0.0, -kI, -1.0);
  const Term psi_s = wave_term(r, k_s, es, 1.0, -3.0 * kI, -3.0);
  const Term psi_p = wave_term(r, k_p, ep, 1.0, -3.0 * kI, -3.0);
  return {phi_s.value - a * phi_p.value, psi_s.value - a * psi_p.value,
          phi_s.derivative - a * phi_p.derivative, psi_s.derivative - a * psi_p.derivative};
}

RadialFunctions radial_impl(double r, Complex k_s, Complex k_p, double a) {
  if (!(r > 0.0)) throw KernelError("kernel evaluated at coincident points (r <= 0)");
  if (std::abs(k_s) * r < kSeriesThreshold) return radial_series(r, k_s, k_p, a);
  return radial_closed(r, k_s, k_p, a);
}

}  // namespace

RadialFunctions phi_psi(double r, Complex k_s, Complex k_p) {
  if (k_s == Complex(0.0)) throw KernelError("phi_psi needs a nonzero wavenumber");
  const Complex ratio = k_p / k_s;
  return radial_impl(r, k_s, k_p, std::real(ratio * ratio));
}

ElastodynamicKernel::ElastodynamicKernel(const Material& material, ComplexFrequency w)
    : material_(material), w_(w), k_(ewbem::wavenumbers(material, w)) {
  const WaveSpeeds c = wave_speeds(material);
  speed_ratio_sq_ = (c.shear * c.shear) / (c.pressure * c.pressure);
  lame_ratio_ = material.lambda() / material.mu();
}

RadialFunctions ElastodynamicKernel::radial(double r) const {
  return radial_impl(r, k_.shear, k_.pressure, speed_ratio_sq_);
}

Mat3c ElastodynamicKernel::displacement(const Vec3& x, const Vec3& y) const {
  const Vec3 d = y - x;
  const double r = d.norm();
  const RadialFunctions f = radial(r);
  const Vec3 e = d / r;
  const double scale = 1.0 / (4.0 * kPi * material_.mu());
  Mat3c U = (-f.psi * scale) * (e * e.transpose()).cast<Complex>();
  U.diagonal().array() += f.phi * scale;
  return U;
}

Mat3c ElastodynamicKernel::traction(const Vec3& x, const Vec3& y, const Vec3& n) const {
  return evaluate(x, y, n).T;
}

KernelValue ElastodynamicKernel::evaluate(const Vec3& x, const Vec3& y, const Vec3& n) const {
  const Vec3 d = y - x;
  const double r = d.norm();
  const RadialFunctions f = radial(r);
  const Vec3 e = d / r;
  const double drdn = e.dot(n);
  const double inv_r = 1.0 / r;

  KernelValue out;
  const double u_scale = 1.0 / (4.0 * kPi * material_.mu());
  const Complex psi_u = -f.psi * u_scale;
  const Complex phi_u = f.phi * u_scale;

  constexpr double t_scale = 1.0 / (4.0 * kPi);
  const Complex c1 = t_scale * (f.dphi - f.psi * inv_r);                       // (dr/dn d_ij + n_i e_j)
  const Complex c2 = t_scale * 2.0 * (2.0 * f.psi * inv_r - f.dpsi) * drdn;    // e_i e_j
  const Complex c3 = t_scale * (-2.0 * f.psi * inv_r +
                                lame_ratio_ * (f.dphi - f.dpsi - 2.0 * f.psi * inv_r));  // e_i n_j

  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double ee = e[i] * e[j];
      out.U(i, j) = psi_u * ee;
      out.T(i, j) = c1 * (n[i] * e[j]) + c2 * ee + c3 * (e[i] * n[j]);
    }
    out.U(i, i) += phi_u;
    out.T(i, i) += c1 * drdn;
  }
  return out;
}

Mat3c displacement_kernel(const Vec3& x, const Vec3& y, const Material& m, ComplexFrequency w) {
  return ElastodynamicKernel(m, w).displacement(x, y);
}

Mat3c traction_kernel(const Vec3& x, const Vec3& y, const Vec3& n, const Material& m, ComplexFrequency w) {
  return ElastodynamicKernel(m, w).traction(x, y, n);
}

StaticKernelValue static_kernels(const Vec3& x, const Vec3& y, const Vec3& n, const Material& m) {
  const Vec3 d = y - x;
  const double r = d.norm();
  if (!(r > 0.0)) throw KernelError("static kernel evaluated at coincident points");
  const Vec3 e = d / r;
  const double nu = m.poisson();
  const double drdn = e.dot(n);
  const Mat3 I = Mat3::Identity();
  const Mat3 ee = e * e.transpose();

  StaticKernelValue out;
  out.U = ((3.0 - 4.0 * nu) * I + ee) / (16.0 * kPi * m.mu() * (1.0 - nu) * r);
  const Mat3 skew = e * n.transpose() - n * e.transpose();  // e_i n_j - e_j n_i
  out.T = -(drdn * ((1.0 - 2.0 * nu) * I + 3.0 * ee) - (1.0 - 2.0 * nu) * skew) /
          (8.0 * kPi * (1.0 - nu) * r * r);
  return out;
}

}  // namespace ewbem
