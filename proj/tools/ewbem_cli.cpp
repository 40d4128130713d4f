#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "ewbem/driver.hpp"

namespace {

using namespace ewbem;

int run_solve(const std::string& path, const std::string& window, bool quiet) {
  SweepConfig cfg = load_config(path);
  if (!window.empty()) cfg.window = parse_window(window);
  const TriangleMesh mesh = build_mesh(cfg.mesh);
  if (!quiet) {
    std::printf("mesh: %zu elements, %zu dofs; N = %d, T = %g s, eta = %g 1/s\n", mesh.num_elements(),
                mesh.num_dofs(), cfg.n_omega, cfg.period, cfg.eta());
  }
  const SweepResult result = run_sweep(cfg, mesh, [&](const SolveStats& s) {
    if (quiet) return;
    std::printf("k=%4d  omega=(%.6g, %.6g)  iters=%4d  r0=%.3e  r=%.3e  %.2fs%s\n", s.k, s.omega.real(),
                s.omega.imag(), s.iterations, s.initial_residual, s.final_residual, s.seconds,
                s.converged ? "" : "  NOT CONVERGED");
    std::fflush(stdout);
  });
  emit_outputs(result, cfg);
  if (!quiet) {
    std::printf("total GMRES iterations: %d\noutputs in %s\n", result.total_iterations(),
                cfg.output_dir.string().c_str());
  }
  if (!result.converged) {
    std::fprintf(stderr, "error: %zu frequencies did not converge; histories are marked FAILED\n",
                 result.failed_frequencies.size());
    return 2;
  }
  return 0;
}

int run_oracle_rod(const std::string& path) {
  const SweepConfig cfg = load_config(path);
  if (cfg.mesh.kind == MeshSource::Kind::File) throw ConfigError("oracle-rod needs a box mesh");
  std::optional<double> load;
  for (const BcRule& bc : cfg.bcs) {
    if (bc.kind != BcKind::Traction || bc.signal.empty()) continue;
    const TimeSignal& s = cfg.signals.at(bc.signal);
    if (s.kind() != TimeSignal::Kind::Heaviside) throw ConfigError("oracle-rod needs a heaviside end load");
    load = s.amplitude();
  }
  if (!load) throw ConfigError("oracle-rod found no heaviside traction load");
  const RodOracle rod = rod_oracle_for(cfg.material, cfg.mesh.lengths[0], *load);
  const SweepGrid grid = cfg.grid();
  std::vector<double> times;
  for (int n = 0; n < grid.samples; ++n) times.push_back(grid.time(n));
  const RodResponse r = analytic_rod_oracle(rod.length, rod.young, rod.rho, rod.load, times);
  write_history_csv(cfg.output_dir / "oracle_u_free.csv", times, r.free_end_displacement);
  write_history_csv(cfg.output_dir / "oracle_sigma_fixed.csv", times, r.fixed_end_stress);
  std::printf("c = %.6g m/s, 4L/c = %.6g s, peak u = %.6g m; written to %s\n", rod.wave_speed(), rod.period(),
              rod.peak_displacement(), cfg.output_dir.string().c_str());
  return 0;
}

int run_gibbs(int n, int oversample, const std::string& window, const std::string& out) {
  const GibbsDemo demo = gibbs_square_wave_demo(n, oversample, parse_window(window));
  std::printf("overshoot: rectangular %.4f, %s %.4f\n", demo.rectangular_overshoot, window.c_str(),
              demo.windowed_overshoot);
  if (!out.empty()) {
    std::FILE* f = std::fopen(out.c_str(), "w");
    if (f == nullptr) throw Error("cannot write " + out);
    std::fprintf(f, "t,rectangular,windowed\n");
    for (std::size_t i = 0; i < demo.times.size(); ++i) {
      std::fprintf(f, "%.17g,%.17g,%.17g\n", demo.times[i], demo.rectangular[i], demo.windowed[i]);
    }
    std::fclose(f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient elastodynamic boundary element solver (complex-frequency sweep)"};
  app.require_subcommand(1);

  std::string config, window;
  bool quiet = false;
  auto* solve = app.add_subcommand("solve", "Run a frequency sweep and write time histories");
  solve->add_option("config", config, "Sweep configuration file")->required()->check(CLI::ExistingFile);
  solve->add_option("--window", window, "Override the window (rectangular, hanning, blackman)");
  solve->add_flag("-q,--quiet", quiet, "Suppress per-frequency progress");

  std::string rod_config;
  auto* rod = app.add_subcommand("oracle-rod", "Write the exact fixed-free rod response for a config");
  rod->add_option("config", rod_config, "Sweep configuration file")->required()->check(CLI::ExistingFile);

  int n = 128, oversample = 8;
  std::string gibbs_window = "hanning", gibbs_out;
  auto* gibbs = app.add_subcommand("gibbs-demo", "Square-wave reconstruction with and without a window");
  gibbs->add_option("-n", n, "Number of frequency samples N");
  gibbs->add_option("--oversample", oversample, "Evaluation points per time step");
  gibbs->add_option("--window", gibbs_window, "Window to compare against rectangular");
  gibbs->add_option("-o,--out", gibbs_out, "CSV output path");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve) return run_solve(config, window, quiet);
    if (*rod) return run_oracle_rod(rod_config);
    if (*gibbs) return run_gibbs(n, oversample, gibbs_window, gibbs_out);
  } catch (const ewbem::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
