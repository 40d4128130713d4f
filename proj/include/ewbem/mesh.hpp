#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "ewbem/types.hpp"

namespace ewbem {

/// Face tags produced by generate_box_mesh.
enum BoxFace : int { kXMinus = 0, kXPlus = 1, kYMinus = 2, kYPlus = 3, kZMinus = 4, kZPlus = 5 };

struct ElementGeometry {
  Vec3 centroid;
  Vec3 normal;
  double area = 0.0;
};

/// Flat-triangle surface mesh with piecewise-constant element data.
///
/// Triangles are wound counter-clockwise when seen from outside the solid, so
/// the right-hand normal points out of the domain. Derived geometry is computed
/// once on construction; the object is immutable afterwards.
class TriangleMesh {
 public:
  /// Validates and builds the mesh. Throws MeshError on out-of-range or
  /// repeated vertex indices, degenerate triangles (area below 1e-14 of the
  /// mean), or, when require_closed is set, any edge not shared by exactly two
  /// oppositely oriented triangles.
  TriangleMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles,
               std::vector<int> region_tags = {}, bool require_closed = false);

  std::size_t num_elements() const { return triangles_.size(); }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_dofs() const { return 3 * triangles_.size(); }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  std::span<const int> region_tags() const { return tags_; }
  int region_tag(std::size_t e) const { return tags_.at(e); }

  const ElementGeometry& geometry(std::size_t e) const { return geometry_.at(e); }
  std::array<Vec3, 3> corners(std::size_t e) const;
  /// Longest edge of element e.
  double diameter(std::size_t e) const { return diameters_.at(e); }

  double total_area() const;
  double mean_area() const { return total_area() / static_cast<double>(num_elements()); }

  /// True when every undirected edge is used by exactly two triangles with
  /// opposite orientation.
  bool is_closed() const { return closed_; }

  /// Elements carrying a given tag, in ascending index order.
  std::vector<std::size_t> elements_with_tag(int tag) const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<int> tags_;
  std::vector<ElementGeometry> geometry_;
  std::vector<double> diameters_;
  bool closed_ = false;
};

enum class MeshFormat { Ascii };

/// Reads the ASCII format: `nv nt`, nv lines `x y z`, nt lines `i j k [tag]`.
TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format = MeshFormat::Ascii,
                       bool require_closed = false);

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path);

/// Closed box [0,lx]x[0,ly]x[0,lz], each face split into d_a x d_b quads of two
/// triangles. Tags follow BoxFace.
TriangleMesh generate_box_mesh(const std::array<double, 3>& lengths,
                               const std::array<int, 3>& divisions);

/// Geodesic sphere obtained by `subdivisions` rounds of 4:1 refinement of an
/// icosahedron. With inward_normals the winding is reversed, which is what a
/// cavity inside a solid needs.
TriangleMesh generate_icosphere(const Vec3& center, double radius, int subdivisions,
                                bool inward_normals, int tag = 0);

/// Concatenates meshes (vertex indices are shifted, tags are kept).
TriangleMesh merge_meshes(std::span<const TriangleMesh> parts, bool require_closed = false);

ElementGeometry element_geometry(const TriangleMesh& mesh, std::size_t e);

/// Computes centroid, unit normal and area of the triangle (a, b, c).
ElementGeometry triangle_geometry(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace ewbem
