#include "svstokes/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace svstokes {

namespace {

std::array<int, 2> sorted_pair(int a, int b) {
  return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

} // namespace

Triangulation::Triangulation(std::vector<Vec2> vertices,
                             std::vector<std::array<int, 3>> triangles,
                             std::vector<BoundaryEdge> boundary_edges)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)) {
  build_topology();
}

void Triangulation::build_topology() {
  const int nt = static_cast<int>(triangles_.size());
  const int nv = static_cast<int>(vertices_.size());

  edges_.clear();
  edges_.reserve(3 * triangles_.size());
  for (const auto &t : triangles_)
    for (int i = 0; i < 3; ++i)
      edges_.push_back(sorted_pair(t[(i + 1) % 3], t[(i + 2) % 3]));
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  triangle_edges_.assign(nt, {-1, -1, -1});
  edge_triangles_.assign(edges_.size(), {-1, -1});
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      const int e = find_edge(triangles_[t][(i + 1) % 3], triangles_[t][(i + 2) % 3]);
      triangle_edges_[t][i] = e;
      auto &et = edge_triangles_[e];
      if (et[0] < 0)
        et[0] = t;
      else if (et[1] < 0)
        et[1] = t;
      // a third incident triangle is nonconforming; validate() reports it
    }
  }

  on_boundary_.assign(nv, 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edge_triangles_[e][1] < 0) {
      on_boundary_[edges_[e][0]] = 1;
      on_boundary_[edges_[e][1]] = 1;
    }
  }

  std::vector<std::vector<int>> incident(nv);
  for (int t = 0; t < nt; ++t)
    for (int v : triangles_[t])
      if (v >= 0 && v < nv)
        incident[v].push_back(t);

  auto local_index = [&](int t, int v) {
    for (int i = 0; i < 3; ++i)
      if (triangles_[t][i] == v)
        return i;
    return -1;
  };
  auto across = [&](int e, int t) {
    const auto &et = edge_triangles_[e];
    return et[0] == t ? et[1] : et[0];
  };

  // Walk counterclockwise through edge adjacency: in triangle (v, a, b) the
  // next triangle shares edge (v, b), which is opposite local vertex j+1.
  vertex_to_triangles_.assign(nv, {});
  for (int v = 0; v < nv; ++v) {
    const auto &inc = incident[v];
    if (inc.empty())
      continue;
    int start = inc.front();
    for (int t : inc) {
      const int j = local_index(t, v);
      const int cw_edge = triangle_edges_[t][(j + 2) % 3];
      if (edge_triangles_[cw_edge][1] < 0) {
        start = t;
        break;
      }
    }
    auto &fan = vertex_to_triangles_[v];
    int cur = start;
    while (fan.size() < inc.size()) {
      fan.push_back(cur);
      const int j = local_index(cur, v);
      const int next = across(triangle_edges_[cur][(j + 1) % 3], cur);
      if (next < 0 || next == start ||
          std::find(fan.begin(), fan.end(), next) != fan.end())
        break;
      cur = next;
    }
    // Broken fans (invalid meshes) keep the remaining triangles in index order.
    for (int t : inc)
      if (std::find(fan.begin(), fan.end(), t) == fan.end())
        fan.push_back(t);
  }
}

int Triangulation::find_edge(int a, int b) const {
  const auto key = sorted_pair(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key)
    return -1;
  return static_cast<int>(it - edges_.begin());
}

double Triangulation::signed_area(int t) const {
  const auto &tr = triangles_[t];
  return 0.5 * cross(vertices_[tr[1]] - vertices_[tr[0]], vertices_[tr[2]] - vertices_[tr[0]]);
}

double Triangulation::diameter(int t) const {
  const auto &tr = triangles_[t];
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    d = std::max(d, norm(vertices_[tr[(i + 1) % 3]] - vertices_[tr[i]]));
  return d;
}

double Triangulation::inradius(int t) const {
  const auto &tr = triangles_[t];
  double perimeter = 0.0;
  for (int i = 0; i < 3; ++i)
    perimeter += norm(vertices_[tr[(i + 1) % 3]] - vertices_[tr[i]]);
  return 2.0 * std::abs(signed_area(t)) / perimeter;
}

double Triangulation::angle(int t, int local) const {
  const auto &tr = triangles_[t];
  const Vec2 p = vertices_[tr[local]];
  const Vec2 a = vertices_[tr[(local + 1) % 3]] - p;
  const Vec2 b = vertices_[tr[(local + 2) % 3]] - p;
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

double Triangulation::h_max() const {
  double h = 0.0;
  for (int t = 0; t < static_cast<int>(triangles_.size()); ++t)
    h = std::max(h, diameter(t));
  return h;
}

double Triangulation::total_area() const {
  double a = 0.0;
  for (int t = 0; t < static_cast<int>(triangles_.size()); ++t)
    a += signed_area(t);
  return a;
}

bool Triangulation::boundary_edges_same(const Triangulation &o) const {
  if (boundary_edges_.size() != o.boundary_edges_.size())
    return false;
  for (std::size_t i = 0; i < boundary_edges_.size(); ++i)
    if (boundary_edges_[i].v != o.boundary_edges_[i].v ||
        boundary_edges_[i].marker != o.boundary_edges_[i].marker)
      return false;
  return true;
}

Triangulation generate_rect_mesh(double x0, double x1, double y0, double y1, int n,
                                 MeshPattern pattern) {
  if (n < 1)
    throw MeshError("generate_rect_mesh: n must be positive");
  if (!(x0 < x1) || !(y0 < y1))
    throw MeshError("generate_rect_mesh: degenerate rectangle");

  const double w = x1 - x0, h = y1 - y0;
  int nx = n, ny = n;
  if (w > h)
    nx = std::max(1, static_cast<int>(std::lround(n * w / h)));
  else if (h > w)
    ny = std::max(1, static_cast<int>(std::lround(n * h / w)));

  std::vector<Vec2> verts;
  verts.reserve((nx + 1) * (ny + 1) + (pattern == MeshPattern::crisscross ? nx * ny : 0));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      verts.push_back({x0 + w * i / nx, y0 + h * j / ny});
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };

  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if (pattern == MeshPattern::diagonal) {
        tris.push_back({a, b, c});
        tris.push_back({a, c, d});
      } else {
        const int m = static_cast<int>(verts.size());
        verts.push_back({x0 + w * (i + 0.5) / nx, y0 + h * (j + 0.5) / ny});
        tris.push_back({a, b, m});
        tris.push_back({b, c, m});
        tris.push_back({c, d, m});
        tris.push_back({d, a, m});
      }
    }
  }

  std::vector<BoundaryEdge> bnd;
  for (int i = 0; i < nx; ++i)
    bnd.push_back({{id(i, 0), id(i + 1, 0)}, 1});
  for (int j = 0; j < ny; ++j)
    bnd.push_back({{id(nx, j), id(nx, j + 1)}, 2});
  for (int i = nx; i > 0; --i)
    bnd.push_back({{id(i, ny), id(i - 1, ny)}, 3});
  for (int j = ny; j > 0; --j)
    bnd.push_back({{id(0, j), id(0, j - 1)}, 4});

  return Triangulation(std::move(verts), std::move(tris), std::move(bnd));
}

std::optional<double> vertex_theta(const Triangulation &tri, int v) {
  const auto &fan = tri.vertex_to_triangles()[v];
  const bool boundary = tri.is_boundary_vertex(v);
  if (fan.empty() || (boundary && fan.size() < 2))
    return std::nullopt;

  std::vector<double> angles;
  angles.reserve(fan.size());
  for (int t : fan) {
    const auto &tr = tri.triangles()[t];
    const int local = static_cast<int>(std::find(tr.begin(), tr.end(), v) - tr.begin());
    angles.push_back(tri.angle(t, local));
  }
  const std::size_t n = angles.size();
  const std::size_t pairs = boundary ? n - 1 : n;
  double theta = 0.0;
  for (std::size_t i = 0; i < pairs; ++i)
    theta = std::max(theta, std::abs(std::sin(angles[i] + angles[(i + 1) % n])));
  return theta;
}

namespace {

bool count_rule(bool boundary, std::size_t n, bool convex) {
  if (!boundary)
    return n == 4;
  return convex ? n == 2 : (n == 2 || n == 3);
}

} // namespace

std::vector<VertexClassification> classify_vertices(const Triangulation &tri, bool convex_domain) {
  std::vector<VertexClassification> out(tri.n_vertices());
  for (int v = 0; v < static_cast<int>(tri.n_vertices()); ++v) {
    auto &c = out[v];
    c.vertex = v;
    const bool boundary = tri.is_boundary_vertex(v);
    c.location = boundary ? VertexLocation::boundary : VertexLocation::interior;
    c.n_adjacent = static_cast<int>(tri.vertex_to_triangles()[v].size());
    c.theta = vertex_theta(tri, v);
    c.singular = c.theta && *c.theta < kSingularThetaTolerance;
    c.possibly_singular = count_rule(boundary, c.n_adjacent, convex_domain);
  }
  return out;
}

std::set<int> possibly_singular_vertices(const Triangulation &tri, bool convex_domain) {
  std::set<int> out;
  for (int v = 0; v < static_cast<int>(tri.n_vertices()); ++v)
    if (count_rule(tri.is_boundary_vertex(v), tri.vertex_to_triangles()[v].size(), convex_domain))
      out.insert(v);
  return out;
}

ModifiedMesh swap_corner_edges(const Triangulation &tri) {
  ModifiedMesh result{tri, {}};
  result.report.mode = MeshModMode::corner;

  std::vector<int> corners;
  for (int v = 0; v < static_cast<int>(tri.n_vertices()); ++v)
    if (tri.is_boundary_vertex(v) && tri.vertex_to_triangles()[v].size() == 1)
      corners.push_back(v);

  auto tris = tri.triangles();
  for (int v : corners) {
    const Triangulation cur(tri.vertices(), tris, tri.boundary_edges());
    const auto &fan = cur.vertex_to_triangles()[v];
    if (fan.size() != 1)
      continue; // an earlier flip already gave this vertex a second triangle
    const int t = fan.front();
    const auto tr = tris[t];
    const int j = static_cast<int>(std::find(tr.begin(), tr.end(), v) - tr.begin());
    const int e = cur.triangle_edges()[t][j];
    const auto &et = cur.edge_triangles()[e];
    const int t2 = et[0] == t ? et[1] : et[0];
    if (t2 < 0)
      throw MeshError("swap_corner_edges: vertex " + std::to_string(v) +
                      " lies on a triangle without an interior edge");
    const int a = tr[(j + 1) % 3], b = tr[(j + 2) % 3];
    int c = -1;
    for (int w : tris[t2])
      if (w != a && w != b)
        c = w;

    const std::array<int, 3> n1{v, a, c}, n2{v, c, b};
    const auto &P = tri.vertices();
    auto area = [&](const std::array<int, 3> &q) {
      return cross(P[q[1]] - P[q[0]], P[q[2]] - P[q[0]]);
    };
    const double scale = cur.signed_area(t) + cur.signed_area(t2);
    if (!(area(n1) > 1e-12 * scale) || !(area(n2) > 1e-12 * scale))
      throw MeshError("swap_corner_edges: flipping the edge at boundary vertex " +
                      std::to_string(v) + " would create a non-positive triangle");
    tris[t] = n1;
    tris[t2] = n2;
    result.report.swaps.push_back({v, {t, t2}, sorted_pair(a, b), sorted_pair(v, c)});
  }

  result.mesh = Triangulation(tri.vertices(), std::move(tris), tri.boundary_edges());
  // one cell across: every flip strands another corner
  for (int v = 0; v < static_cast<int>(result.mesh.n_vertices()); ++v)
    if (result.mesh.is_boundary_vertex(v) && result.mesh.vertex_to_triangles()[v].size() == 1)
      throw MeshError("swap_corner_edges: boundary vertex " + std::to_string(v) +
                      " still lies on a single triangle after the flips");
  return result;
}

ModifiedMesh barycentric_split_at(const Triangulation &tri, const std::set<int> &targets) {
  ModifiedMesh result;
  result.report.mode = MeshModMode::full;
  result.report.split_targets.assign(targets.begin(), targets.end());

  std::set<int> to_split;
  for (int v : targets) {
    if (v < 0 || v >= static_cast<int>(tri.n_vertices()))
      throw MeshError("barycentric_split_at: vertex " + std::to_string(v) + " out of range");
    for (int t : tri.vertex_to_triangles()[v])
      to_split.insert(t);
  }

  auto verts = tri.vertices();
  auto tris = tri.triangles();
  for (int t : to_split) {
    const auto [a, b, c] = tris[t];
    const int m = static_cast<int>(verts.size());
    verts.push_back((1.0 / 3.0) * (verts[a] + verts[b] + verts[c]));
    tris[t] = {a, b, m};
    const int c1 = static_cast<int>(tris.size());
    tris.push_back({b, c, m});
    tris.push_back({c, a, m});
    result.report.splits.push_back({t, m, {c1, c1 + 1}});
  }
  result.mesh = Triangulation(std::move(verts), std::move(tris), tri.boundary_edges());
  return result;
}

ModifiedMesh apply_modification(const Triangulation &tri, MeshModMode mode, bool convex) {
  switch (mode) {
  case MeshModMode::none:
    return {tri, {}};
  case MeshModMode::corner:
    return swap_corner_edges(tri);
  case MeshModMode::full: {
    auto swapped = swap_corner_edges(tri);
    auto split = barycentric_split_at(swapped.mesh,
                                      possibly_singular_vertices(swapped.mesh, convex));
    split.report.swaps = std::move(swapped.report.swaps);
    split.report.mode = MeshModMode::full;
    return split;
  }
  }
  throw MeshError("apply_modification: unknown mode");
}

ValidationReport validate(const Triangulation &tri) {
  ValidationReport rep;
  const auto &P = tri.vertices();
  const auto &T = tri.triangles();
  const int nv = static_cast<int>(P.size());
  const int nt = static_cast<int>(T.size());

  std::vector<int> uses(nv, 0);
  rep.min_angle = std::numbers::pi;
  rep.min_shape_ratio = nt > 0 ? 1.0 : 0.0;
  bool indices_ok = true;
  for (int t = 0; t < nt; ++t) {
    bool ok = true;
    for (int v : T[t])
      if (v < 0 || v >= nv)
        ok = false;
    if (!ok) {
      rep.conformity_violations.push_back("triangle " + std::to_string(t) +
                                          " references a missing vertex");
      indices_ok = false;
      continue;
    }
    for (int v : T[t])
      ++uses[v];
    if (!(tri.signed_area(t) > 0.0))
      rep.orientation_violations.push_back(t);
    for (int i = 0; i < 3; ++i)
      rep.min_angle = std::min(rep.min_angle, tri.angle(t, i));
    const double d = tri.diameter(t);
    rep.min_shape_ratio = std::min(rep.min_shape_ratio, d > 0 ? tri.inradius(t) / d : 0.0);
  }
  if (!indices_ok)
    return rep;

  for (int v = 0; v < nv; ++v)
    if (uses[v] == 0)
      rep.isolated_vertices.push_back(v);

  // Directed edge use per triangle: each undirected edge must be used once
  // (boundary) or twice in opposite directions (interior).
  std::map<std::array<int, 2>, std::vector<std::pair<int, bool>>> edge_use;
  for (int t = 0; t < nt; ++t)
    for (int i = 0; i < 3; ++i) {
      const int a = T[t][(i + 1) % 3], b = T[t][(i + 2) % 3];
      edge_use[sorted_pair(a, b)].push_back({t, a < b});
    }
  std::set<std::array<int, 2>> topo_boundary;
  for (const auto &[e, use] : edge_use) {
    if (use.size() > 2) {
      rep.conformity_violations.push_back("edge (" + std::to_string(e[0]) + "," +
                                          std::to_string(e[1]) + ") shared by " +
                                          std::to_string(use.size()) + " triangles");
    } else if (use.size() == 2) {
      const bool both_positive = tri.signed_area(use[0].first) > 0 && tri.signed_area(use[1].first) > 0;
      if (both_positive && use[0].second == use[1].second)
        rep.conformity_violations.push_back("edge (" + std::to_string(e[0]) + "," +
                                            std::to_string(e[1]) +
                                            ") has inconsistent orientation");
    } else {
      topo_boundary.insert(e);
    }
  }

  std::set<std::array<int, 2>> declared;
  for (const auto &be : tri.boundary_edges()) {
    const auto key = sorted_pair(be.v[0], be.v[1]);
    if (!declared.insert(key).second)
      rep.conformity_violations.push_back("boundary edge (" + std::to_string(key[0]) + "," +
                                          std::to_string(key[1]) + ") listed twice");
    if (!topo_boundary.count(key))
      rep.conformity_violations.push_back("boundary edge (" + std::to_string(key[0]) + "," +
                                          std::to_string(key[1]) +
                                          ") does not belong to exactly one triangle");
  }
  for (const auto &e : topo_boundary)
    if (!declared.count(e))
      rep.conformity_violations.push_back("edge (" + std::to_string(e[0]) + "," +
                                          std::to_string(e[1]) +
                                          ") has one triangle but is not a boundary edge");

  // Hanging vertices sit in the interior of an edge that has only one triangle.
  for (const auto &e : topo_boundary) {
    const Vec2 a = P[e[0]], d = P[e[1]] - P[e[0]];
    const double len2 = dot(d, d);
    for (int v = 0; v < nv; ++v) {
      if (v == e[0] || v == e[1])
        continue;
      const Vec2 r = P[v] - a;
      const double s = dot(r, d) / len2;
      if (s > 1e-12 && s < 1 - 1e-12 && std::abs(cross(d, r)) <= 1e-12 * len2)
        rep.conformity_violations.push_back("hanging vertex " + std::to_string(v) + " on edge (" +
                                            std::to_string(e[0]) + "," + std::to_string(e[1]) + ")");
    }
  }
  return rep;
}

const char *to_string(MeshModMode mode) {
  switch (mode) {
  case MeshModMode::none:
    return "none";
  case MeshModMode::corner:
    return "corner";
  case MeshModMode::full:
    return "full";
  }
  return "?";
}

MeshModMode mesh_mod_from_string(const std::string &s) {
  if (s == "none" || s == "M1")
    return MeshModMode::none;
  if (s == "corner" || s == "M2")
    return MeshModMode::corner;
  if (s == "full" || s == "M3")
    return MeshModMode::full;
  throw Error("unknown mesh modification '" + s + "'");
}

} // namespace svstokes
