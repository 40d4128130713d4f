#include <cmath>
#include <limits>

#include "ewbem/driver.hpp"

namespace ewbem {
namespace {

struct ProbeSelector {
  std::vector<std::size_t> elements;
  std::vector<double> weights;  // area fractions
};

ProbeSelector select(const TriangleMesh& mesh, const Probe& p) {
  ProbeSelector s;
  if (p.element) {
    if (*p.element >= mesh.num_elements()) {
      throw ConfigError("probe `" + p.name + "` names element " + std::to_string(*p.element) + " but the mesh has " +
                        std::to_string(mesh.num_elements()));
    }
    s.elements = {*p.element};
    s.weights = {1.0};
    return s;
  }
  s.elements = mesh.elements_with_tag(p.region);
  if (s.elements.empty()) throw ConfigError("probe `" + p.name + "` names an empty region");
  double total = 0.0;
  for (std::size_t e : s.elements) total += mesh.geometry(e).area;
  for (std::size_t e : s.elements) s.weights.push_back(mesh.geometry(e).area / total);
  return s;
}

Complex probe_value(const BoundaryFields& f, const Probe& p, const ProbeSelector& s) {
  const VectorXc& v = p.quantity == ProbeQuantity::Displacement ? f.displacement : f.traction;
  Complex out = 0.0;
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    out += s.weights[i] * v[static_cast<Eigen::Index>(3 * s.elements[i] + p.component)];
  }
  return out;
}

}  // namespace

int SweepResult::total_iterations() const {
  int n = 0;
  for (const auto& s : stats) n += s.iterations;
  return n;
}

std::vector<TimeHistory> SweepResult::histories_with(WindowKind window, double kappa) const {
  std::vector<TimeHistory> out;
  for (std::size_t p = 0; p < probe_spectra.size(); ++p) {
    TimeHistory h;
    h.probe = p < histories.size() ? histories[p].probe : "probe" + std::to_string(p);
    h.grid = grid;
    h.window = window;
    h.kappa = kappa;
    h.mesh_elements = mesh_elements;
    if (converged) {
      h.values = inverse_mft(probe_spectra[p], window);
    } else {
      h.values.assign(static_cast<std::size_t>(grid.samples), std::numeric_limits<double>::quiet_NaN());
    }
    out.push_back(std::move(h));
  }
  return out;
}

SweepResult run_sweep(const SweepConfig& cfg, const SweepObserver& observer) {
  const TriangleMesh mesh = build_mesh(cfg.mesh);
  return run_sweep(cfg, mesh, observer);
}

SweepResult run_sweep(const SweepConfig& cfg, const TriangleMesh& mesh, const SweepObserver& observer) {
  cfg.validate();
  const SweepGrid grid = cfg.grid();
  const double eta = cfg.eta();
  const int half = grid.samples / 2;

  const BoundaryConditionSet bcs(mesh, cfg.bcs, cfg.allow_floating);
  std::vector<Spectrum> load_spectra;
  for (const std::string& name : bcs.signal_names()) {
    load_spectra.push_back(forward_mft(cfg.signals.at(name), grid, eta));
  }
  std::vector<ProbeSelector> selectors;
  for (const Probe& p : cfg.probes) selectors.push_back(select(mesh, p));

  const Assembler assembler(mesh, cfg.material, cfg.quadrature(), cfg.workers);
  SolutionHistory history(static_cast<std::size_t>(cfg.sem_depth));

  SweepResult result;
  result.grid = grid;
  result.eta = eta;
  result.mesh_elements = mesh.num_elements();
  std::vector<std::vector<Complex>> probe_half(cfg.probes.size(), std::vector<Complex>(half + 1));

  for (int k = 0; k <= half; ++k) {
    const ComplexFrequency w = ComplexFrequency::sample(k, grid.d_omega(), eta);
    std::vector<Complex> signal_values;
    for (const Spectrum& s : load_spectra) signal_values.push_back(s.values[k]);
    const VectorXc prescribed = bcs.resolve(signal_values);
    const DenseSystem sys = assembler.assemble_system(w, bcs, prescribed);
    const LinearOperator A = dense_operator(sys.A);

    VectorXc x0 = VectorXc::Zero(sys.b.size());
    if (cfg.sem && !history.empty()) x0 = sem_initial_guess(history, A, sys.b).x0;

    std::optional<BlockDiagonalPreconditioner> precond;
    if (cfg.precondition) precond.emplace(sys.A);
    GmresResult solved = gmres(A, sys.b, x0, cfg.gmres, precond ? precond->as_operator() : LinearOperator{});
    solved.stats.k = k;
    solved.stats.omega = w.omega;
    if (!solved.stats.converged) {
      result.converged = false;
      result.failed_frequencies.push_back(k);
    }

    const BoundaryFields fields = scatter_solution(bcs, solved.x, prescribed);
    for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
      probe_half[p][k] = probe_value(fields, cfg.probes[p], selectors[p]);
    }
    history.push(solved.x);

    result.stats.push_back(solved.stats);
    if (observer) observer(solved.stats);
  }

  for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
    // Bin N/2 stands for both +N/2 and -N/2 dw; their conjugate-pair average is
    // the real part. Bin 0 is real up to rounding.
    probe_half[p][0] = probe_half[p][0].real();
    probe_half[p][half] = probe_half[p][half].real();
    result.probe_spectra.push_back(conjugate_fill(probe_half[p], grid, eta));
  }
  result.histories = result.histories_with(cfg.window, cfg.kappa);
  for (std::size_t p = 0; p < cfg.probes.size(); ++p) result.histories[p].probe = cfg.probes[p].name;
  return result;
}

}  // namespace ewbem
