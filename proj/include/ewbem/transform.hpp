#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ewbem/types.hpp"

namespace ewbem {

/// Sampling grid of one sweep: period T, N samples, dt = T/N, dw = 2 pi / T.
struct SweepGrid {
  double period = 0.0;
  int samples = 0;

  double dt() const { return period / samples; }
  double d_omega() const { return 2.0 * kPi / period; }
  /// Nyquist frequency N dw / (4 pi) in Hz.
  double nyquist_hz() const { return samples * d_omega() / (4.0 * kPi); }
  double time(int n) const { return n * dt(); }
};

/// eta = kappa ln(10) / T.
double eta_from_kappa(double kappa, double period);

/// Boundary-condition time history on [0, T).
class TimeSignal {
 public:
  enum class Kind { Zero, Heaviside, Tabulated };

  static TimeSignal zero();
  /// amplitude * H(t). The sample at t = 0 takes the midpoint value
  /// amplitude / 2, as the periodic extension jumps there.
  static TimeSignal heaviside(double amplitude);
  /// Piecewise-linear through (t, value) pairs with strictly increasing t;
  /// held constant outside the tabulated range.
  static TimeSignal tabulated(std::vector<double> times, std::vector<double> values);
  /// Two-column CSV `t,value`; a non-numeric first line is skipped as header.
  static TimeSignal from_csv(const std::filesystem::path& path);

  Kind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }

  double value(double t) const;
  /// Samples P(n dt), n = 0 .. N-1.
  std::vector<double> sample(const SweepGrid& grid) const;

 private:
  Kind kind_ = Kind::Zero;
  double amplitude_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Complex values at w_k = k dw - i eta, k = 0 .. N-1.
struct Spectrum {
  std::vector<Complex> values;
  SweepGrid grid;
  double eta = 0.0;
};

enum class WindowKind { Rectangular, Hanning, Blackman };

WindowKind parse_window(const std::string& name);
std::string to_string(WindowKind kind);

/// P(w_k) = (1/N) sum_n exp(-eta n dt) P(n dt) exp(-2 pi i n k / N).
Spectrum forward_mft(const std::vector<double>& samples, const SweepGrid& grid, double eta);
Spectrum forward_mft(const TimeSignal& signal, const SweepGrid& grid, double eta);

/// Completes k = N/2+1 .. N-1 from R(k) = conj(R(N-k)). `half` holds
/// k = 0 .. N/2 (N even).
Spectrum conjugate_fill(const std::vector<Complex>& half, const SweepGrid& grid, double eta);

/// Hanning 0.5(1 + cos(2 pi k/N)); Blackman 0.42 + 0.5 cos(2 pi k/N) +
/// 0.08 cos(4 pi k/N); rectangular 1.
std::vector<double> window_weights(WindowKind kind, int n);

/// R(n dt) = exp(eta n dt) sum_k W_k R(w_k) exp(2 pi i n k / N), complex.
std::vector<Complex> inverse_mft_complex(const Spectrum& spectrum, WindowKind window);

/// Real part of inverse_mft_complex. Throws TransformError if the imaginary
/// residue of the damped signal exceeds 1e-8 of its magnitude, which means the
/// spectrum was not conjugate symmetric.
std::vector<double> inverse_mft(const Spectrum& spectrum, WindowKind window);

/// Largest |Im| over largest |value| of the damped (pre-rescaling) signal.
double imaginary_residue(const Spectrum& spectrum, WindowKind window);

/// Truncated Fourier series of a unit square wave (+1 on [0, T/2), -1 on
/// [T/2, T)) built from its analytic coefficients for |k| < N/2, evaluated on a
/// grid `oversample` times finer than dt, with and without a window.
struct GibbsDemo {
  std::vector<double> times;
  std::vector<double> rectangular;
  std::vector<double> windowed;
  double rectangular_overshoot = 0.0;  // max |value| - 1
  double windowed_overshoot = 0.0;
};

GibbsDemo gibbs_square_wave_demo(int n_omega, int oversample, WindowKind window = WindowKind::Hanning);

}  // namespace ewbem
