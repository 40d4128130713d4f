#include "ewbem/assembly.hpp"

#include <algorithm>

#include "ewbem/parallel.hpp"

namespace ewbem {

BoundaryConditionSet::BoundaryConditionSet(const TriangleMesh& mesh, const std::vector<BcRule>& rules,
                                           bool allow_floating)
    : kind_(mesh.num_dofs(), BcKind::Traction), signal_(mesh.num_dofs(), -1) {
  for (const BcRule& rule : rules) {
    if (rule.component < -1 || rule.component > 2) throw ConfigError("bc component must be x, y, z or all");
    const auto elements = mesh.elements_with_tag(rule.region_tag);
    if (elements.empty()) throw ConfigError("bc references region " + std::to_string(rule.region_tag) + " with no elements");
    int sig = -1;
    if (!rule.signal.empty()) {
      auto it = std::find(names_.begin(), names_.end(), rule.signal);
      sig = static_cast<int>(it - names_.begin());
      if (it == names_.end()) names_.push_back(rule.signal);
    }
    for (std::size_t e : elements) {
      for (int c = 0; c < 3; ++c) {
        if (rule.component != -1 && rule.component != c) continue;
        kind_[3 * e + c] = rule.kind;
        signal_[3 * e + c] = sig;
      }
    }
  }
  const bool anchored = std::any_of(kind_.begin(), kind_.end(), [](BcKind k) { return k == BcKind::Displacement; });
  if (!anchored && !allow_floating) {
    throw ConfigError("no displacement-prescribed DOF: the solid is free floating");
  }
}

VectorXc BoundaryConditionSet::resolve(const std::vector<Complex>& signal_values) const {
  if (signal_values.size() != names_.size()) {
    throw AssemblyError("expected " + std::to_string(names_.size()) + " signal values, got " +
                        std::to_string(signal_values.size()));
  }
  VectorXc out(static_cast<Eigen::Index>(kind_.size()));
  for (std::size_t d = 0; d < kind_.size(); ++d) {
    out[static_cast<Eigen::Index>(d)] = signal_[d] < 0 ? Complex(0.0) : signal_values[signal_[d]];
  }
  return out;
}

Assembler::Assembler(const TriangleMesh& mesh, const Material& material, QuadraturePolicy policy, unsigned workers)
    : mesh_(mesh), material_(material), policy_(policy), workers_(std::max(1u, workers)) {
  if (!mesh.is_closed()) throw AssemblyError("assembly requires a closed mesh");
  rowsums_ = static_offdiag_rowsums(mesh, material, policy_, workers_);
}

template <class Sink>
void Assembler::assemble_row(const ElastodynamicKernel& kernel, std::size_t i, Sink&& sink) const {
  const Vec3& x = mesh_.geometry(i).centroid;
  for (std::size_t e = 0; e < mesh_.num_elements(); ++e) {
    if (e == i) {
      KernelValue self = integrate_weakly_singular(kernel, mesh_, e, policy_.self_order);
      self.T -= rowsums_[i].cast<Complex>();
      sink(e, self);
    } else {
      sink(e, integrate_regular(kernel, mesh_, e, x, policy_));
    }
  }
}

CollocationMatrices Assembler::assemble_TU(ComplexFrequency w) const {
  const ElastodynamicKernel kernel(material_, w);
  const auto n = static_cast<Eigen::Index>(mesh_.num_dofs());
  CollocationMatrices out{MatrixXc(n, n), MatrixXc(n, n)};
  parallel_for(mesh_.num_elements(), workers_, [&](std::size_t i) {
    const auto r = static_cast<Eigen::Index>(3 * i);
    assemble_row(kernel, i, [&](std::size_t e, const KernelValue& v) {
      const auto c = static_cast<Eigen::Index>(3 * e);
      out.T.block<3, 3>(r, c) = v.T;
      out.U.block<3, 3>(r, c) = v.U;
    });
  });
  return out;
}

DenseSystem Assembler::assemble_system(ComplexFrequency w, const BoundaryConditionSet& bcs,
                                       const VectorXc& prescribed) const {
  const auto n = static_cast<Eigen::Index>(mesh_.num_dofs());
  if (bcs.num_dofs() != mesh_.num_dofs() || prescribed.size() != n) {
    throw AssemblyError("boundary data does not match the mesh DOF count");
  }
  const ElastodynamicKernel kernel(material_, w);
  DenseSystem sys{MatrixXc(n, n), VectorXc::Zero(n), {}};
  sys.unknown.resize(mesh_.num_dofs());
  for (std::size_t d = 0; d < mesh_.num_dofs(); ++d) {
    sys.unknown[d] = bcs.kind(d) == BcKind::Displacement ? BcKind::Traction : BcKind::Displacement;
  }
  parallel_for(mesh_.num_elements(), workers_, [&](std::size_t i) {
    const auto r = static_cast<Eigen::Index>(3 * i);
    Eigen::Vector3cd rhs = Eigen::Vector3cd::Zero();
    assemble_row(kernel, i, [&](std::size_t e, const KernelValue& v) {
      for (int c = 0; c < 3; ++c) {
        const std::size_t dof = 3 * e + c;
        const auto col = static_cast<Eigen::Index>(dof);
        if (bcs.kind(dof) == BcKind::Displacement) {
          sys.A.block<3, 1>(r, col) = -v.U.col(c);
          rhs -= v.T.col(c) * prescribed[col];
        } else {
          sys.A.block<3, 1>(r, col) = v.T.col(c);
          rhs += v.U.col(c) * prescribed[col];
        }
      }
    });
    sys.b.segment<3>(r) = rhs;
  });
  return sys;
}

CollocationMatrices assemble_TU(const TriangleMesh& mesh, const Material& material, ComplexFrequency w,
                                const QuadraturePolicy& policy) {
  return Assembler(mesh, material, policy).assemble_TU(w);
}

DenseSystem apply_bcs(const CollocationMatrices& tu, const BoundaryConditionSet& bcs, const VectorXc& prescribed) {
  const Eigen::Index n = tu.T.rows();
  if (static_cast<Eigen::Index>(bcs.num_dofs()) != n || prescribed.size() != n) {
    throw AssemblyError("prescribed spectrum does not cover every DOF");
  }
  DenseSystem sys{MatrixXc(n, n), VectorXc::Zero(n), std::vector<BcKind>(static_cast<std::size_t>(n))};
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto d = static_cast<std::size_t>(j);
    if (bcs.kind(d) == BcKind::Displacement) {
      sys.A.col(j) = -tu.U.col(j);
      sys.b -= tu.T.col(j) * prescribed[j];
      sys.unknown[d] = BcKind::Traction;
    } else {
      sys.A.col(j) = tu.T.col(j);
      sys.b += tu.U.col(j) * prescribed[j];
      sys.unknown[d] = BcKind::Displacement;
    }
  }
  return sys;
}

BoundaryFields scatter_solution(const BoundaryConditionSet& bcs, const VectorXc& unknowns,
                                const VectorXc& prescribed) {
  const auto n = static_cast<Eigen::Index>(bcs.num_dofs());
  if (unknowns.size() != n || prescribed.size() != n) throw AssemblyError("vector length does not match DOF count");
  BoundaryFields f{VectorXc(n), VectorXc(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    if (bcs.kind(static_cast<std::size_t>(j)) == BcKind::Displacement) {
      f.displacement[j] = prescribed[j];
      f.traction[j] = unknowns[j];
    } else {
      f.displacement[j] = unknowns[j];
      f.traction[j] = prescribed[j];
    }
  }
  return f;
}

}  // namespace ewbem
