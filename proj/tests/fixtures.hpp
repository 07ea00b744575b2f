#pragma once

#include "svstokes/mesh.hpp"

#include <cmath>
#include <numbers>

namespace fixtures {

using svstokes::BoundaryEdge;
using svstokes::Triangulation;
using svstokes::Vec2;

// Six equilateral triangles around the origin.
inline Triangulation hexagon_fan() {
  std::vector<Vec2> v{{0.0, 0.0}};
  for (int i = 0; i < 6; ++i) {
    const double a = i * std::numbers::pi / 3.0;
    v.push_back({std::cos(a), std::sin(a)});
  }
  std::vector<std::array<int, 3>> t;
  std::vector<BoundaryEdge> b;
  for (int i = 0; i < 6; ++i) {
    const int p = 1 + i, q = 1 + (i + 1) % 6;
    t.push_back({0, p, q});
    b.push_back({{p, q}, 1});
  }
  return Triangulation(v, t, b);
}

// Two right triangles meeting at the boundary midpoint (1, 0).
inline Triangulation split_triangle() {
  std::vector<Vec2> v{{0, 0}, {1, 0}, {2, 0}, {1, 1}};
  std::vector<std::array<int, 3>> t{{0, 1, 3}, {1, 2, 3}};
  std::vector<BoundaryEdge> b{{{0, 1}, 1}, {{1, 2}, 1}, {{2, 3}, 2}, {{3, 0}, 3}};
  return Triangulation(v, t, b);
}

inline Triangulation equilateral() {
  std::vector<Vec2> v{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}};
  return Triangulation(v, {{0, 1, 2}}, {{{0, 1}, 1}, {{1, 2}, 1}, {{2, 0}, 1}});
}

} // namespace fixtures
