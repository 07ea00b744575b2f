#pragma once

#include "svstokes/common.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace svstokes {

struct BoundaryEdge {
  std::array<int, 2> v{};
  int marker = 0;
};

// Conforming 2D triangulation. Triangles are vertex triples in counterclockwise
// order. Topology (edges, edge-to-triangle, cyclic vertex fans) is derived on
// construction; construction itself never rejects a mesh, use validate() for
// that.
class Triangulation {
public:
  Triangulation() = default;
  Triangulation(std::vector<Vec2> vertices,
                std::vector<std::array<int, 3>> triangles,
                std::vector<BoundaryEdge> boundary_edges);

  const std::vector<Vec2> &vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>> &triangles() const { return triangles_; }
  const std::vector<BoundaryEdge> &boundary_edges() const { return boundary_edges_; }

  std::size_t n_vertices() const { return vertices_.size(); }
  std::size_t n_triangles() const { return triangles_.size(); }
  std::size_t n_edges() const { return edges_.size(); }

  // Unique edges sorted by (min vertex, max vertex).
  const std::vector<std::array<int, 2>> &edges() const { return edges_; }
  // triangle_edges()[t][i] is the edge opposite local vertex i.
  const std::vector<std::array<int, 3>> &triangle_edges() const { return triangle_edges_; }
  // Incident triangles of an edge; second entry is -1 on the boundary.
  const std::vector<std::array<int, 2>> &edge_triangles() const { return edge_triangles_; }
  // Incident triangles ordered counterclockwise around each vertex. For
  // boundary vertices the fan starts at a boundary edge.
  const std::vector<std::vector<int>> &vertex_to_triangles() const { return vertex_to_triangles_; }

  // Edge lies on the topological boundary (exactly one incident triangle).
  bool is_boundary_edge(int e) const { return edge_triangles_[e][1] < 0; }
  bool is_boundary_vertex(int v) const { return on_boundary_[v] != 0; }
  // Index into edges() of the edge {a, b}, or -1.
  int find_edge(int a, int b) const;

  double signed_area(int t) const;
  // Longest edge of the triangle.
  double diameter(int t) const;
  double inradius(int t) const;
  // Interior angle of triangle t at its local vertex i.
  double angle(int t, int local) const;
  // Maximum triangle diameter.
  double h_max() const;
  double total_area() const;

  friend bool operator==(const Triangulation &a, const Triangulation &b) {
    return a.vertices_ == b.vertices_ && a.triangles_ == b.triangles_ &&
           a.boundary_edges_same(b);
  }

private:
  bool boundary_edges_same(const Triangulation &o) const;
  void build_topology();

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;

  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<std::array<int, 2>> edge_triangles_;
  std::vector<std::vector<int>> vertex_to_triangles_;
  std::vector<char> on_boundary_;
};

enum class MeshPattern { diagonal, crisscross };

// Structured mesh of [x0,x1]x[y0,y1]. The shorter side receives n cells; the
// longer side receives round(n * long/short) cells so that cells stay near
// square. Diagonal cells are split along the (SW, NE) diagonal. Boundary
// markers: 1 bottom, 2 right, 3 top, 4 left.
Triangulation generate_rect_mesh(double x0, double x1, double y0, double y1,
                                 int n, MeshPattern pattern);

// max |sin(theta_i + theta_{i+1})| over consecutive fan angles at v; the
// wrap-around pair is included for interior vertices. Empty when a boundary
// vertex has a single incident triangle.
std::optional<double> vertex_theta(const Triangulation &tri, int v);

enum class VertexLocation { interior, boundary };

struct VertexClassification {
  int vertex = 0;
  VertexLocation location = VertexLocation::interior;
  int n_adjacent = 0;
  std::optional<double> theta;
  bool singular = false;
  bool possibly_singular = false;
};

inline constexpr double kSingularThetaTolerance = 1e-12;

std::vector<VertexClassification> classify_vertices(const Triangulation &tri,
                                                    bool convex_domain);

// Indices of vertices flagged by the adjacency-count rule.
std::set<int> possibly_singular_vertices(const Triangulation &tri, bool convex_domain);

enum class MeshModMode { none, corner, full };

struct EdgeSwapRecord {
  int corner_vertex = -1;
  std::array<int, 2> triangles{};
  std::array<int, 2> removed_edge{};
  std::array<int, 2> inserted_edge{};
};

struct BarycentricSplitRecord {
  int triangle = -1;        // index of the original triangle (kept for the first child)
  int new_vertex = -1;      // barycenter index in the output mesh
  std::array<int, 2> children{}; // appended triangles
};

struct MeshModification {
  MeshModMode mode = MeshModMode::none;
  std::vector<EdgeSwapRecord> swaps;
  std::vector<int> split_targets;
  std::vector<BarycentricSplitRecord> splits;

  bool empty() const { return swaps.empty() && splits.empty(); }
};

struct ModifiedMesh {
  Triangulation mesh;
  MeshModification report;
};

// Flips the interior edge of every triangle that is the only triangle at a
// boundary vertex. Throws MeshError naming the vertex when the flip would not
// produce two positively oriented triangles, or when a boundary vertex is still
// on a single triangle afterwards (meshes one cell thick).
ModifiedMesh swap_corner_edges(const Triangulation &tri);

// Replaces every triangle incident to a target vertex by three triangles that
// share its barycenter.
ModifiedMesh barycentric_split_at(const Triangulation &tri, const std::set<int> &targets);

ModifiedMesh apply_modification(const Triangulation &tri, MeshModMode mode, bool convex);

struct ValidationReport {
  std::vector<int> orientation_violations;     // triangles with signed area <= 0
  std::vector<std::string> conformity_violations;
  std::vector<int> isolated_vertices;
  double min_angle = 0.0;        // radians
  double min_shape_ratio = 0.0;  // min over triangles of inradius / diameter

  bool valid() const {
    return orientation_violations.empty() && conformity_violations.empty() &&
           isolated_vertices.empty();
  }
};

ValidationReport validate(const Triangulation &tri);

Triangulation read_mesh(std::istream &in);
Triangulation read_mesh(const std::string &text);
void write_mesh(std::ostream &out, const Triangulation &tri);
std::string write_mesh(const Triangulation &tri);

const char *to_string(MeshModMode mode);
MeshModMode mesh_mod_from_string(const std::string &s);

} // namespace svstokes
