#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ewbem/assembly.hpp"
#include "ewbem/linsolve.hpp"
#include "ewbem/material.hpp"
#include "ewbem/mesh.hpp"
#include "ewbem/quadrature.hpp"
#include "ewbem/transform.hpp"

namespace ewbem {

struct CavitySpec {
  Vec3 center;
  double radius = 0.0;
  int subdivisions = 1;
};

struct MeshSource {
  enum class Kind { Box, File, CavityBox };
  Kind kind = Kind::Box;
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  std::array<int, 3> divisions{1, 1, 1};
  std::filesystem::path file;
  std::vector<CavitySpec> cavities;  // CavityBox only; tagged 6, 7, ...
};

enum class ProbeQuantity { Displacement, Traction };

/// A sampled response: one component of displacement or traction, either at
/// one element or area-averaged over every element of a region.
struct Probe {
  std::string name;
  std::optional<std::size_t> element;
  int region = 0;
  int component = 0;
  ProbeQuantity quantity = ProbeQuantity::Displacement;
};

struct SweepConfig {
  MeshSource mesh;
  Material material = Material::from_lame(1.0, 1.0, 1.0);
  std::map<std::string, TimeSignal> signals;
  std::vector<BcRule> bcs;
  bool allow_floating = false;

  double period = 0.0;  // T
  int n_omega = 0;      // N
  double kappa = 0.0;
  WindowKind window = WindowKind::Hanning;

  bool sem = true;
  int sem_depth = 4;  // K
  bool precondition = true;
  GmresOptions gmres;
  bool refined_quadrature = false;

  std::vector<Probe> probes;
  std::filesystem::path output_dir = "ewbem_out";
  unsigned workers = 1;

  SweepGrid grid() const { return {period, n_omega}; }
  double eta() const { return eta_from_kappa(kappa, period); }
  QuadraturePolicy quadrature() const {
    return refined_quadrature ? QuadraturePolicy::refined() : QuadraturePolicy{};
  }

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// Flat `key = value` format; `#` starts a comment. Repeatable keys: signal,
/// bc, probe, cavity. Relative file paths resolve against `base_dir`.
SweepConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");
SweepConfig load_config(const std::filesystem::path& path);

/// Worker count from EWBEM_WORKERS when set, else `fallback`.
unsigned workers_from_env(unsigned fallback);

TriangleMesh build_mesh(const MeshSource& source);

struct TimeHistory {
  std::string probe;
  SweepGrid grid;
  WindowKind window = WindowKind::Hanning;
  double kappa = 0.0;
  std::size_t mesh_elements = 0;
  std::vector<double> values;  // t_n = n dt

  double time(int n) const { return grid.time(n); }
};

struct SweepResult {
  SweepGrid grid;
  double eta = 0.0;
  std::size_t mesh_elements = 0;
  std::vector<SolveStats> stats;                // k = 0 .. N/2
  std::vector<Spectrum> probe_spectra;          // conjugate-filled, one per probe
  std::vector<TimeHistory> histories;           // with cfg.window
  bool converged = true;
  std::vector<int> failed_frequencies;

  int total_iterations() const;
  /// Inverts the stored probe spectra with another window.
  std::vector<TimeHistory> histories_with(WindowKind window, double kappa) const;
};

/// Per-frequency callback for progress reporting.
using SweepObserver = std::function<void(const SolveStats&)>;

/// Solves the N/2 + 1 complex-frequency systems and inverts the probe
/// responses. Non-converged frequencies mark the result as failed and fill the
/// histories with NaN.
SweepResult run_sweep(const SweepConfig& cfg, const SweepObserver& observer = {});
/// Same, reusing an existing mesh.
SweepResult run_sweep(const SweepConfig& cfg, const TriangleMesh& mesh, const SweepObserver& observer = {});

/// Exact fixed-free rod response to an end step traction P0 H(t) (nu = 0).
struct RodResponse {
  std::vector<double> free_end_displacement;
  std::vector<double> fixed_end_stress;  // axial stress sigma_xx at x = 0
};

struct RodOracle {
  double length;
  double young;
  double rho;
  double load;  // P0

  double wave_speed() const;
  double period() const { return 4.0 * length / wave_speed(); }
  double peak_displacement() const { return 2.0 * load * length / young; }

  double free_end_displacement(double t) const;
  /// 2 P0 on (L/c, 3L/c) modulo 4L/c, zero elsewhere, P0 exactly at a jump.
  double fixed_end_stress(double t) const;
  /// Distance from t to the nearest stress discontinuity.
  double distance_to_jump(double t) const;
};

RodResponse analytic_rod_oracle(double length, double young, double rho, double load,
                                const std::vector<double>& times);
/// Checks nu = 0 first (ConfigError otherwise).
RodOracle rod_oracle_for(const Material& material, double length, double load);

/// Writes <dir>/<probe>.csv (t,value), <dir>/stats.csv and <dir>/manifest.txt.
void emit_outputs(const SweepResult& result, const SweepConfig& cfg);
void write_history_csv(const std::filesystem::path& path, const std::vector<double>& times,
                       const std::vector<double>& values, const std::string& status = "");
std::vector<std::pair<double, double>> read_history_csv(const std::filesystem::path& path);
void write_stats_csv(const std::filesystem::path& path, const std::vector<SolveStats>& stats);
std::string manifest_text(const SweepConfig& cfg, std::size_t mesh_elements);

}  // namespace ewbem
