#include "ewbem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

namespace ewbem {

ElementGeometry triangle_geometry(const Vec3& a, const Vec3& b, const Vec3& c) {
  ElementGeometry g;
  g.centroid = (a + b + c) / 3.0;
  const Vec3 cross = (b - a).cross(c - a);
  const double norm = cross.norm();
  g.area = 0.5 * norm;
  g.normal = norm > 0.0 ? Vec3(cross / norm) : Vec3::Zero();
  return g;
}

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles,
                           std::vector<int> region_tags, bool require_closed)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), tags_(std::move(region_tags)) {
  if (triangles_.empty()) throw MeshError("mesh has no triangles");
  if (tags_.empty()) tags_.assign(triangles_.size(), 0);
  if (tags_.size() != triangles_.size()) throw MeshError("region tag count does not match triangle count");

  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t e = 0; e < triangles_.size(); ++e) {
    const auto& t = triangles_[e];
    for (int idx : t) {
      if (idx < 0 || idx >= nv) {
        throw MeshError("triangle " + std::to_string(e) + " references vertex " + std::to_string(idx) +
                        " out of range [0, " + std::to_string(nv) + ")");
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw MeshError("degenerate triangle " + std::to_string(e) + ": repeated vertex index");
    }
  }

  geometry_.reserve(triangles_.size());
  diameters_.reserve(triangles_.size());
  for (const auto& t : triangles_) {
    const Vec3& a = vertices_[t[0]];
    const Vec3& b = vertices_[t[1]];
    const Vec3& c = vertices_[t[2]];
    geometry_.push_back(triangle_geometry(a, b, c));
    diameters_.push_back(std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()}));
  }

  const double mean = mean_area();
  for (std::size_t e = 0; e < geometry_.size(); ++e) {
    if (!(geometry_[e].area > 1e-14 * mean)) {
      throw MeshError("degenerate triangle " + std::to_string(e) + ": area " +
                      std::to_string(geometry_[e].area) + " below 1e-14 of mean area");
    }
  }

  // Each directed edge may appear once; its reverse must appear exactly once.
  std::map<std::pair<int, int>, int> directed;
  bool manifold = true;
  for (const auto& t : triangles_) {
    for (int k = 0; k < 3; ++k) {
      auto key = std::make_pair(t[k], t[(k + 1) % 3]);
      if (++directed[key] > 1) manifold = false;
    }
  }
  if (manifold) {
    for (const auto& [edge, count] : directed) {
      auto it = directed.find({edge.second, edge.first});
      if (it == directed.end() || it->second != 1) {
        manifold = false;
        break;
      }
    }
  }
  closed_ = manifold;
  if (require_closed && !closed_) {
    throw MeshError("mesh is not a closed oriented manifold (some edge is not shared by exactly two "
                    "oppositely oriented triangles)");
  }
}

std::array<Vec3, 3> TriangleMesh::corners(std::size_t e) const {
  const auto& t = triangles_.at(e);
  return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

double TriangleMesh::total_area() const {
  double sum = 0.0;
  for (const auto& g : geometry_) sum += g.area;
  return sum;
}

std::vector<std::size_t> TriangleMesh::elements_with_tag(int tag) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < tags_.size(); ++e) {
    if (tags_[e] == tag) out.push_back(e);
  }
  return out;
}

ElementGeometry element_geometry(const TriangleMesh& mesh, std::size_t e) {
  if (e >= mesh.num_elements()) throw MeshError("element index out of range");
  return mesh.geometry(e);
}

TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format, bool require_closed) {
  if (format != MeshFormat::Ascii) throw MeshError("unsupported mesh format");
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path.string());

  auto fail = [&](const std::string& what) {
    throw MeshError("parse error in " + path.string() + ": " + what);
  };

  long nv = 0, nt = 0;
  if (!(in >> nv >> nt) || nv < 3 || nt < 1) fail("bad header, expected `nv nt`");
  std::string rest;
  std::getline(in, rest);

  std::vector<Vec3> vertices(static_cast<std::size_t>(nv));
  for (auto& v : vertices) {
    std::string line;
    if (!std::getline(in, line)) fail("unexpected end of file in vertex block");
    std::istringstream ls(line);
    if (!(ls >> v.x() >> v.y() >> v.z())) fail("bad vertex line `" + line + "`");
  }

  std::vector<std::array<int, 3>> triangles(static_cast<std::size_t>(nt));
  std::vector<int> tags(static_cast<std::size_t>(nt), 0);
  for (std::size_t e = 0; e < triangles.size(); ++e) {
    std::string line;
    if (!std::getline(in, line)) fail("unexpected end of file in triangle block");
    std::istringstream ls(line);
    auto& t = triangles[e];
    if (!(ls >> t[0] >> t[1] >> t[2])) fail("bad triangle line `" + line + "`");
    int tag = 0;
    if (ls >> tag) tags[e] = tag;
  }
  return TriangleMesh(std::move(vertices), std::move(triangles), std::move(tags), require_closed);
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file " + path.string());
  out << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n' << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& t = mesh.triangles()[e];
    out << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << mesh.region_tag(e) << '\n';
  }
  if (!out) throw MeshError("write failed for " + path.string());
}

TriangleMesh generate_box_mesh(const std::array<double, 3>& lengths, const std::array<int, 3>& divisions) {
  for (int a = 0; a < 3; ++a) {
    if (!(lengths[a] > 0.0)) throw MeshError("box lengths must be positive");
    if (divisions[a] < 1) throw MeshError("box divisions must be >= 1");
  }

  // Vertices live on an integer lattice; the map keeps one index per lattice
  // point so that shared face edges reference the same vertices.
  std::map<std::array<int, 3>, int> lattice;
  std::vector<Vec3> vertices;
  auto vertex = [&](const std::array<int, 3>& ijk) {
    auto [it, inserted] = lattice.try_emplace(ijk, static_cast<int>(vertices.size()));
    if (inserted) {
      Vec3 p;
      for (int a = 0; a < 3; ++a) p[a] = lengths[a] * ijk[a] / divisions[a];
      vertices.push_back(p);
    }
    return it->second;
  };

  struct Face {
    int normal_axis;
    bool upper;
    int u_axis;
    int v_axis;
    BoxFace tag;
  };
  // (u, v) ordered so that u x v is the outward normal.
  const std::array<Face, 6> faces{{
      {0, false, 2, 1, kXMinus},
      {0, true, 1, 2, kXPlus},
      {1, false, 0, 2, kYMinus},
      {1, true, 2, 0, kYPlus},
      {2, false, 1, 0, kZMinus},
      {2, true, 0, 1, kZPlus},
  }};

  std::vector<std::array<int, 3>> triangles;
  std::vector<int> tags;
  for (const Face& f : faces) {
    const int nu = divisions[f.u_axis];
    const int nv = divisions[f.v_axis];
    auto at = [&](int i, int j) {
      std::array<int, 3> ijk{};
      ijk[f.normal_axis] = f.upper ? divisions[f.normal_axis] : 0;
      ijk[f.u_axis] = i;
      ijk[f.v_axis] = j;
      return vertex(ijk);
    };
    for (int j = 0; j < nv; ++j) {
      for (int i = 0; i < nu; ++i) {
        const int p00 = at(i, j), p10 = at(i + 1, j), p11 = at(i + 1, j + 1), p01 = at(i, j + 1);
        triangles.push_back({p00, p10, p11});
        triangles.push_back({p00, p11, p01});
        tags.push_back(f.tag);
        tags.push_back(f.tag);
      }
    }
  }
  return TriangleMesh(std::move(vertices), std::move(triangles), std::move(tags), true);
}

TriangleMesh generate_icosphere(const Vec3& center, double radius, int subdivisions, bool inward_normals,
                                int tag) {
  if (!(radius > 0.0) || subdivisions < 0) throw MeshError("icosphere needs radius > 0 and subdivisions >= 0");
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts{{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                          {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                          {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> tris{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoints;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto [it, inserted] = midpoints.try_emplace({key.first, key.second}, static_cast<int>(verts.size()));
      if (inserted) verts.push_back((verts[a] + verts[b]).normalized());
      return it->second;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  for (auto& v : verts) v = center + radius * v;
  if (inward_normals) {
    for (auto& t : tris) std::swap(t[1], t[2]);
  }
  std::vector<int> tags(tris.size(), tag);
  return TriangleMesh(std::move(verts), std::move(tris), std::move(tags), true);
}

TriangleMesh merge_meshes(std::span<const TriangleMesh> parts, bool require_closed) {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> tags;
  for (const auto& part : parts) {
    const int offset = static_cast<int>(vertices.size());
    vertices.insert(vertices.end(), part.vertices().begin(), part.vertices().end());
    for (std::size_t e = 0; e < part.num_elements(); ++e) {
      const auto& t = part.triangles()[e];
      triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
      tags.push_back(part.region_tag(e));
    }
  }
  return TriangleMesh(std::move(vertices), std::move(triangles), std::move(tags), require_closed);
}

}  // namespace ewbem
