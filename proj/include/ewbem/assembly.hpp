#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ewbem/kernels.hpp"
#include "ewbem/mesh.hpp"
#include "ewbem/quadrature.hpp"

namespace ewbem {

enum class BcKind { Displacement, Traction };

/// One boundary-condition rule: all elements with `region_tag` get `kind`
/// prescribed on `component` (0, 1, 2, or -1 for all three), driven by the
/// named time signal.
struct BcRule {
  int region_tag = 0;
  int component = -1;
  BcKind kind = BcKind::Traction;
  std::string signal;
};

/// Per-DOF prescribed quantity and its driving signal. DOF d belongs to element
/// d / 3, Cartesian component d % 3. DOFs without a rule are traction-free.
class BoundaryConditionSet {
 public:
  /// Throws ConfigError when no DOF is displacement-prescribed (a floating
  /// solid) unless allow_floating is set.
  BoundaryConditionSet(const TriangleMesh& mesh, const std::vector<BcRule>& rules, bool allow_floating = false);

  std::size_t num_dofs() const { return kind_.size(); }
  BcKind kind(std::size_t dof) const { return kind_[dof]; }
  /// Index into signal_names(), or -1 for a homogeneous condition.
  int signal(std::size_t dof) const { return signal_[dof]; }
  const std::vector<std::string>& signal_names() const { return names_; }

  /// Prescribed complex values for one frequency given one spectral value per
  /// named signal (in signal_names() order).
  VectorXc resolve(const std::vector<Complex>& signal_values) const;

 private:
  std::vector<BcKind> kind_;
  std::vector<int> signal_;
  std::vector<std::string> names_;
};

/// A a = b. `unknown[d]` records what a[d] is: the displacement at a
/// traction-prescribed DOF or the traction at a displacement-prescribed DOF.
struct DenseSystem {
  MatrixXc A;
  VectorXc b;
  std::vector<BcKind> unknown;
};

struct CollocationMatrices {
  MatrixXc T;  // includes the free term
  MatrixXc U;
};

struct BoundaryFields {
  VectorXc displacement;
  VectorXc traction;
};

/// Collocation assembly at element centroids for one mesh and material. The
/// frequency-independent Kelvin row sums needed by the rigid-body self-term are
/// computed once on construction.
class Assembler {
 public:
  Assembler(const TriangleMesh& mesh, const Material& material, QuadraturePolicy policy = {}, unsigned workers = 1);

  CollocationMatrices assemble_TU(ComplexFrequency w) const;

  /// Builds A and b directly without keeping T and U. Equivalent to
  /// apply_bcs(assemble_TU(w), bcs, prescribed).
  DenseSystem assemble_system(ComplexFrequency w, const BoundaryConditionSet& bcs, const VectorXc& prescribed) const;

  const TriangleMesh& mesh() const { return mesh_; }
  const Material& material() const { return material_; }
  const std::vector<Mat3>& static_rowsums() const { return rowsums_; }

 private:
  // Writes the 3x3 T and U blocks of row element i into the callback.
  template <class Sink>
  void assemble_row(const ElastodynamicKernel& kernel, std::size_t i, Sink&& sink) const;

  const TriangleMesh& mesh_;
  Material material_;
  QuadraturePolicy policy_;
  unsigned workers_;
  std::vector<Mat3> rowsums_;
};

CollocationMatrices assemble_TU(const TriangleMesh& mesh, const Material& material, ComplexFrequency w,
                                const QuadraturePolicy& policy = {});

/// Moves unknown columns to A and known columns to b. Throws AssemblyError when
/// `prescribed` does not cover every DOF.
DenseSystem apply_bcs(const CollocationMatrices& tu, const BoundaryConditionSet& bcs, const VectorXc& prescribed);

/// Splits a solved unknown vector back into full displacement and traction.
BoundaryFields scatter_solution(const BoundaryConditionSet& bcs, const VectorXc& unknowns,
                                const VectorXc& prescribed);

}  // namespace ewbem
