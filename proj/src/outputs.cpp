#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ewbem/driver.hpp"

namespace ewbem {
namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_history_csv(const std::filesystem::path& path, const std::vector<double>& times,
                       const std::vector<double>& values, const std::string& status) {
  if (times.size() != values.size()) throw Error("time and value columns differ in length");
  std::ofstream out = open_out(path);
  if (!status.empty()) out << "# " << status << '\n';
  out << "t,value\n";
  for (std::size_t i = 0; i < times.size(); ++i) out << g17(times[i]) << ',' << g17(values[i]) << '\n';
}

std::vector<std::pair<double, double>> read_history_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error("bad history line `" + line + "`");
    rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  return rows;
}

void write_stats_csv(const std::filesystem::path& path, const std::vector<SolveStats>& stats) {
  std::ofstream out = open_out(path);
  out << "k,omega_re,omega_im,iterations,init_residual,final_residual,seconds\n";
  for (const auto& s : stats) {
    out << s.k << ',' << g17(s.omega.real()) << ',' << g17(s.omega.imag()) << ',' << s.iterations << ','
        << g17(s.initial_residual) << ',' << g17(s.final_residual) << ',' << g17(s.seconds) << '\n';
  }
}

std::string manifest_text(const SweepConfig& cfg, std::size_t mesh_elements) {
  const SweepGrid grid = cfg.grid();
  std::ostringstream m;
  m << "elements = " << mesh_elements << '\n'
    << "dofs = " << 3 * mesh_elements << '\n'
    << "period = " << g17(cfg.period) << '\n'
    << "n_omega = " << cfg.n_omega << '\n'
    << "dt = " << g17(grid.dt()) << '\n'
    << "d_omega = " << g17(grid.d_omega()) << '\n'
    << "nyquist_hz = " << g17(grid.nyquist_hz()) << '\n'
    << "kappa = " << g17(cfg.kappa) << '\n'
    << "eta = " << g17(cfg.eta()) << '\n'
    << "window = " << to_string(cfg.window) << '\n'
    << "sem = " << (cfg.sem ? "on" : "off") << '\n'
    << "sem.depth = " << cfg.sem_depth << '\n'
    << "precondition = " << (cfg.precondition ? "block" : "none") << '\n'
    << "gmres.tol = " << g17(cfg.gmres.tol) << '\n'
    << "gmres.restart = " << cfg.gmres.restart << '\n'
    << "gmres.maxiter = " << cfg.gmres.maxiter << '\n'
    << "quadrature = " << (cfg.refined_quadrature ? "refined" : "default") << '\n'
    << "material.lambda = " << g17(cfg.material.lambda()) << '\n'
    << "material.mu = " << g17(cfg.material.mu()) << '\n'
    << "material.rho = " << g17(cfg.material.rho()) << '\n'
    << "workers = " << cfg.workers << '\n';
  return m.str();
}

void emit_outputs(const SweepResult& result, const SweepConfig& cfg) {
  std::string status;
  if (!result.converged) {
    status = "FAILED: GMRES did not converge at k =";
    for (int k : result.failed_frequencies) status += " " + std::to_string(k);
  }
  std::vector<double> times;
  for (int n = 0; n < result.grid.samples; ++n) times.push_back(result.grid.time(n));
  for (const TimeHistory& h : result.histories) {
    write_history_csv(cfg.output_dir / (h.probe + ".csv"), times, h.values, status);
  }
  write_stats_csv(cfg.output_dir / "stats.csv", result.stats);
  std::ofstream manifest = open_out(cfg.output_dir / "manifest.txt");
  manifest << manifest_text(cfg, result.mesh_elements);
  manifest << "total_iterations = " << result.total_iterations() << '\n';
  manifest << "status = " << (result.converged ? "ok" : status) << '\n';
}

}  // namespace ewbem
