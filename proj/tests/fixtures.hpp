#pragma once

#include <cmath>

#include "ewbem/mesh.hpp"

namespace fixture {

// Closed bipyramid over a regular 15-gon: 30 triangles. The lower half is
// tagged 0, the upper half 1.
inline ewbem::TriangleMesh bipyramid() {
  const int m = 15;
  std::vector<ewbem::Vec3> v;
  for (int i = 0; i < m; ++i) {
    const double a = 2.0 * ewbem::kPi * i / m;
    v.emplace_back(std::cos(a), std::sin(a), 0.0);
  }
  v.emplace_back(0.0, 0.0, 1.2);
  v.emplace_back(0.0, 0.0, -1.2);
  std::vector<std::array<int, 3>> tris;
  std::vector<int> tags;
  for (int i = 0; i < m; ++i) {
    const int j = (i + 1) % m;
    tris.push_back({i, j, m});
    tags.push_back(1);
    tris.push_back({j, i, m + 1});
    tags.push_back(0);
  }
  return ewbem::TriangleMesh(v, tris, tags, true);
}

}  // namespace fixture
