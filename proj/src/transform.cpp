#include "ewbem/transform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include <fftw3.h>

namespace ewbem {
namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place unnormalized DFT with exponent sign -1 (forward) or +1 (backward).
void dft_inplace(std::vector<Complex>& data, int sign) {
  const int n = static_cast<int>(data.size());
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw TransformError("FFTW could not create a plan");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

void check_grid(const SweepGrid& grid) {
  if (!(grid.period > 0.0)) throw TransformError("period T must be positive");
  if (grid.samples < 2) throw TransformError("need at least two samples");
}

}  // namespace

double eta_from_kappa(double kappa, double period) {
  if (!(kappa >= 0.0)) throw TransformError("kappa must be non-negative");
  if (!(period > 0.0)) throw TransformError("period must be positive");
  return kappa * std::log(10.0) / period;
}

TimeSignal TimeSignal::zero() { return TimeSignal{}; }

TimeSignal TimeSignal::heaviside(double amplitude) {
  TimeSignal s;
  s.kind_ = Kind::Heaviside;
  s.amplitude_ = amplitude;
  return s;
}

TimeSignal TimeSignal::tabulated(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size() || times.empty()) {
    throw TransformError("tabulated signal needs matching, non-empty time and value columns");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw TransformError("tabulated signal times must be strictly increasing");
  }
  TimeSignal s;
  s.kind_ = Kind::Tabulated;
  s.times_ = std::move(times);
  s.values_ = std::move(values);
  return s;
}

TimeSignal TimeSignal::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TransformError("cannot open signal file " + path.string());
  std::vector<double> t, v;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a = 0.0, b = 0.0;
    if (!(ls >> a >> b)) {
      if (first) {
        first = false;
        continue;
      }
      throw TransformError("bad line in signal file " + path.string() + ": `" + line + "`");
    }
    first = false;
    t.push_back(a);
    v.push_back(b);
  }
  return tabulated(std::move(t), std::move(v));
}

double TimeSignal::value(double t) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Heaviside: return t > 0.0 ? amplitude_ : (t == 0.0 ? 0.5 * amplitude_ : 0.0);
    case Kind::Tabulated: {
      if (t <= times_.front()) return values_.front();
      if (t >= times_.back()) return values_.back();
      const auto it = std::upper_bound(times_.begin(), times_.end(), t);
      const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
      const std::size_t lo = hi - 1;
      const double f = (t - times_[lo]) / (times_[hi] - times_[lo]);
      return values_[lo] + f * (values_[hi] - values_[lo]);
    }
  }
  return 0.0;
}

std::vector<double> TimeSignal::sample(const SweepGrid& grid) const {
  check_grid(grid);
  std::vector<double> out(static_cast<std::size_t>(grid.samples));
  for (int n = 0; n < grid.samples; ++n) out[n] = value(grid.time(n));
  return out;
}

WindowKind parse_window(const std::string& name) {
  if (name == "rectangular" || name == "none") return WindowKind::Rectangular;
  if (name == "hanning" || name == "hann") return WindowKind::Hanning;
  if (name == "blackman") return WindowKind::Blackman;
  throw ConfigError("unknown window `" + name + "` (expected rectangular, hanning or blackman)");
}

std::string to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::Rectangular: return "rectangular";
    case WindowKind::Hanning: return "hanning";
    case WindowKind::Blackman: return "blackman";
  }
  return "?";
}

Spectrum forward_mft(const std::vector<double>& samples, const SweepGrid& grid, double eta) {
  check_grid(grid);
  if (static_cast<int>(samples.size()) != grid.samples) {
    throw TransformError("sample count does not match the sweep grid");
  }
  if (!(eta >= 0.0)) throw TransformError("eta must be non-negative");
  const int n = grid.samples;
  std::vector<Complex> data(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) data[i] = std::exp(-eta * grid.time(i)) * samples[i];
  dft_inplace(data, -1);
  const double inv_n = 1.0 / n;
  for (auto& v : data) v *= inv_n;
  return Spectrum{std::move(data), grid, eta};
}

Spectrum forward_mft(const TimeSignal& signal, const SweepGrid& grid, double eta) {
  return forward_mft(signal.sample(grid), grid, eta);
}

Spectrum conjugate_fill(const std::vector<Complex>& half, const SweepGrid& grid, double eta) {
  check_grid(grid);
  const int n = grid.samples;
  if (n % 2 != 0) throw TransformError("conjugate fill needs an even sample count");
  if (static_cast<int>(half.size()) != n / 2 + 1) throw TransformError("half spectrum must hold N/2 + 1 values");
  std::vector<Complex> full(static_cast<std::size_t>(n));
  std::copy(half.begin(), half.end(), full.begin());
  for (int k = n / 2 + 1; k < n; ++k) full[k] = std::conj(full[n - k]);
  return Spectrum{std::move(full), grid, eta};
}

std::vector<double> window_weights(WindowKind kind, int n) {
  if (n < 2) throw TransformError("window needs N >= 2");
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * kPi * k / n;
    switch (kind) {
      case WindowKind::Rectangular: break;
      case WindowKind::Hanning: w[k] = 0.5 * (1.0 + std::cos(a)); break;
      case WindowKind::Blackman: w[k] = 0.42 + 0.5 * std::cos(a) + 0.08 * std::cos(2.0 * a); break;
    }
  }
  // Rounding in the cosines leaves O(1e-17) excursions outside [0, 1], e.g. at
  // k = N/2 where both windows vanish exactly.
  for (double& v : w) v = std::clamp(v, 0.0, 1.0);
  if (kind != WindowKind::Rectangular && n % 2 == 0) w[n / 2] = 0.0;
  return w;
}

namespace {

// Damped (pre-rescaling) windowed synthesis sum_k W_k R_k exp(2 pi i n k/N).
std::vector<Complex> damped_synthesis(const Spectrum& spectrum, WindowKind window) {
  check_grid(spectrum.grid);
  const int n = spectrum.grid.samples;
  if (static_cast<int>(spectrum.values.size()) != n) throw TransformError("spectrum length does not match grid");
  const std::vector<double> w = window_weights(window, n);
  std::vector<Complex> data(spectrum.values);
  for (int k = 0; k < n; ++k) data[k] *= w[k];
  dft_inplace(data, +1);
  return data;
}

double residue_of(const std::vector<Complex>& damped) {
  double im = 0.0, mag = 0.0;
  for (const Complex& v : damped) {
    im = std::max(im, std::abs(v.imag()));
    mag = std::max(mag, std::abs(v));
  }
  return mag > 0.0 ? im / mag : 0.0;
}

}  // namespace

std::vector<Complex> inverse_mft_complex(const Spectrum& spectrum, WindowKind window) {
  std::vector<Complex> data = damped_synthesis(spectrum, window);
  for (int i = 0; i < spectrum.grid.samples; ++i) data[i] *= std::exp(spectrum.eta * spectrum.grid.time(i));
  return data;
}

double imaginary_residue(const Spectrum& spectrum, WindowKind window) {
  return residue_of(damped_synthesis(spectrum, window));
}

std::vector<double> inverse_mft(const Spectrum& spectrum, WindowKind window) {
  const std::vector<Complex> damped = damped_synthesis(spectrum, window);
  const double residue = residue_of(damped);
  if (residue > 1e-8) {
    std::ostringstream msg;
    msg << "inverse transform has imaginary residue " << residue
        << " (spectrum is not conjugate symmetric)";
    throw TransformError(msg.str());
  }
  std::vector<double> out(damped.size());
  for (std::size_t i = 0; i < damped.size(); ++i) {
    out[i] = std::exp(spectrum.eta * spectrum.grid.time(static_cast<int>(i))) * damped[i].real();
  }
  return out;
}

GibbsDemo gibbs_square_wave_demo(int n_omega, int oversample, WindowKind window) {
  if (n_omega < 4 || n_omega % 2 != 0) throw TransformError("gibbs demo needs an even N >= 4");
  if (oversample < 1) throw TransformError("oversample must be >= 1");
  const std::vector<double> w = window_weights(window, n_omega);
  const int points = n_omega * oversample;
  GibbsDemo demo;
  demo.times.resize(static_cast<std::size_t>(points));
  demo.rectangular.assign(static_cast<std::size_t>(points), 0.0);
  demo.windowed.assign(static_cast<std::size_t>(points), 0.0);
  for (int p = 0; p < points; ++p) {
    const double t = static_cast<double>(p) / points;  // in units of T
    demo.times[p] = t;
    double plain = 0.0, smooth = 0.0;
    // Odd harmonics only: 2 Re[c_k e^{2 pi i k t}] with c_k = 2/(i pi k).
    for (int k = 1; k < n_omega / 2; k += 2) {
      const double term = 4.0 / (kPi * k) * std::sin(2.0 * kPi * k * t);
      plain += term;
      smooth += w[k] * term;
    }
    demo.rectangular[p] = plain;
    demo.windowed[p] = smooth;
    demo.rectangular_overshoot = std::max(demo.rectangular_overshoot, std::abs(plain) - 1.0);
    demo.windowed_overshoot = std::max(demo.windowed_overshoot, std::abs(smooth) - 1.0);
  }
  return demo;
}

}  // namespace ewbem
