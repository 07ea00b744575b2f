#include "random_points.hpp"

#include "svstokes/boundary.hpp"
#include "svstokes/manufactured.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace svstokes;

namespace {

std::shared_ptr<const Triangulation> domain_mesh(int n, MeshPattern p = MeshPattern::diagonal,
                                                 MeshModMode mode = MeshModMode::full) {
  return std::make_shared<const Triangulation>(
      apply_modification(generate_rect_mesh(6, 12, 0, 6, n, p), mode, true).mesh);
}

std::shared_ptr<const FeSpace> velocity_space(std::shared_ptr<const Triangulation> m, int k = 4) {
  return build_space(m, {Family::vector_continuous, k});
}

double volume_divergence(const FeFunction &u) {
  const auto &m = u.space->mesh();
  const auto rule = quadrature_rule(2 * u.space->degree());
  double s = 0.0;
  for (int t = 0; t < int(m.n_triangles()); ++t) {
    const double det = cell_geometry(m, t).abs_det();
    for (std::size_t q = 0; q < rule.size(); ++q)
      s += rule.weights[q] * det * evaluate_divergence(u, t, rule.points[q]);
  }
  return s;
}

double sup_abs(const BoundaryData &bc) {
  double m = 0.0;
  for (double v : bc.values)
    m = std::max(m, std::abs(v));
  return m;
}

constexpr double kPerimeter = 24.0;

const VectorField kSwirl = [](const Vec2 &x) {
  return Vec2{std::sin(x.y) * x.x + 0.3 * x.y * x.y, std::exp(-x.x / 6.0) + std::cos(x.x * x.y / 10)};
};

} // namespace

TEST(BoundaryFaces, OutwardUnitNormals) {
  const auto m = domain_mesh(3);
  const auto faces = boundary_faces(*m);
  EXPECT_EQ(faces.size(), 12u);
  double perimeter = 0.0;
  for (const auto &f : faces) {
    perimeter += f.length;
    EXPECT_NEAR(norm(f.normal), 1.0, 1e-15);
    const Vec2 mid = 0.5 * (m->vertices()[f.a] + m->vertices()[f.b]);
    const Vec2 out = mid + 1e-3 * f.normal;
    const bool outside = out.x < 6 || out.x > 12 || out.y < 0 || out.y > 6;
    EXPECT_TRUE(outside);
    const Barycentric b = f.at(0.25);
    const Vec2 x = fixtures::physical(*m, f.triangle, b);
    const Vec2 expect = m->vertices()[f.a] + 0.25 * (m->vertices()[f.b] - m->vertices()[f.a]);
    EXPECT_NEAR(x.x, expect.x, 1e-14);
    EXPECT_NEAR(x.y, expect.y, 1e-14);
  }
  EXPECT_NEAR(perimeter, kPerimeter, 1e-12);
}

TEST(BoundaryFaces, InteriorEdgeThrows) {
  const auto m = domain_mesh(2);
  int interior = -1;
  for (int e = 0; e < int(m->n_edges()); ++e)
    if (!m->is_boundary_edge(e))
      interior = e;
  ASSERT_GE(interior, 0);
  EXPECT_THROW(boundary_face(*m, interior), Error);
  EXPECT_THROW(edge_bubble(*m, interior, velocity_space(m)), Error);
}

TEST(Flux, ClosedFormFields) {
  const auto m = domain_mesh(4);
  EXPECT_NEAR(boundary_normal_flux(*m, [](const Vec2 &) { return Vec2{1, 0}; }, 3), 0.0, 1e-13);
  EXPECT_NEAR(boundary_normal_flux(*m, [](const Vec2 &x) { return Vec2{x.x, x.y}; }, 3), 72.0, 1e-12);
  const auto c = manufactured(1.0);
  EXPECT_NEAR(boundary_normal_flux(*m, c.velocity(), 10), 0.0, 1e-12);
}

// int_Omega div v_h = int_dOmega v_h . n for every discrete field.
TEST(Flux, DiscreteDivergenceTheorem) {
  for (auto p : {MeshPattern::diagonal, MeshPattern::crisscross})
    for (int k : {2, 3, 4}) {
      const auto v = velocity_space(domain_mesh(3, p), k);
      const auto u = interpolate(v, kSwirl);
      const double vol = volume_divergence(u);
      const double flux = boundary_normal_flux(u);
      EXPECT_LE(std::abs(vol - flux), 1e-11 * std::max(1.0, std::abs(flux))) << "k=" << k;
    }
}

TEST(LagrangeData, ConstantFieldHasNoFlux) {
  const auto bc = lagrange_boundary(velocity_space(domain_mesh(3)), [](const Vec2 &) { return Vec2{2, -5}; });
  EXPECT_NEAR(bc.flux, 0.0, 1e-12);
  EXPECT_FALSE(bc.correction.has_value());
  EXPECT_EQ(bc.dofs, bc.space->boundary_dofs());
}

TEST(LagrangeData, ManufacturedFluxIsSmallButNonzero) {
  const auto bc = lagrange_boundary(velocity_space(domain_mesh(4)), manufactured(1.0).velocity());
  EXPECT_GT(std::abs(bc.flux), 1e-10);
  EXPECT_LT(std::abs(bc.flux), 1e-5);
}

TEST(CompatibleData, ZeroesFlux) {
  for (auto p : {MeshPattern::diagonal, MeshPattern::crisscross})
    for (int n : {2, 4, 8}) {
      const auto v = velocity_space(domain_mesh(n, p));
      for (const VectorField &g : {manufactured(1.0).velocity(), kSwirl}) {
        const auto bc = compatible_interpolate(v, g);
        ASSERT_TRUE(bc.correction.has_value());
        EXPECT_LE(std::abs(bc.flux), 1e-12 * kPerimeter * sup_abs(bc)) << "n=" << n;
        EXPECT_LE(std::abs(boundary_normal_flux(bc.lift())), 1e-12 * kPerimeter * sup_abs(bc));
      }
    }
}

TEST(CompatibleData, OnlyNormalComponentOnFaceChanges) {
  const auto m = domain_mesh(4);
  const auto v = velocity_space(m);
  const auto plain = lagrange_boundary(v, kSwirl);
  const auto fixed = compatible_interpolate(v, kSwirl);
  const auto face = boundary_face(*m, fixed.correction->edge);
  const auto cell = v->cell_nodes(face.triangle);
  const auto l = lattice(v->degree());
  const int la = (face.local_edge + 1) % 3, lb = (face.local_edge + 2) % 3;
  std::set<int> face_nodes;
  for (std::size_t i = 0; i < l.size(); ++i)
    if (l[i][la] > 0 && l[i][lb] > 0 && l[i][face.local_edge] == 0)
      face_nodes.insert(cell[i]);
  EXPECT_EQ(face_nodes.size(), std::size_t(v->degree() - 1));

  for (std::size_t i = 0; i < plain.dofs.size(); i += 2) {
    const int node = plain.dofs[i] / 2;
    const Vec2 d{fixed.values[i] - plain.values[i], fixed.values[i + 1] - plain.values[i + 1]};
    if (!face_nodes.count(node)) {
      EXPECT_EQ(d.x, 0.0);
      EXPECT_EQ(d.y, 0.0);
    } else {
      EXPECT_NEAR(cross(face.normal, d), 0.0, 1e-15);
    }
  }
}

TEST(CompatibleData, PolynomialDataIsUntouched) {
  // stream function x^2 y^3 gives a divergence-free quartic
  const VectorField g = [](const Vec2 &x) { return Vec2{3 * x.x * x.x * x.y * x.y, -2 * x.x * x.y * x.y * x.y}; };
  const auto v = velocity_space(domain_mesh(3));
  const auto plain = lagrange_boundary(v, g);
  const auto fixed = compatible_interpolate(v, g);
  const double scale = sup_abs(plain);
  EXPECT_LE(std::abs(fixed.correction->coefficient), 1e-13 * scale);
  for (std::size_t i = 0; i < plain.values.size(); ++i)
    EXPECT_LE(std::abs(fixed.values[i] - plain.values[i]), 1e-13 * scale);
}

TEST(CompatibleData, ExplicitFace) {
  const auto m = domain_mesh(2);
  const auto v = velocity_space(m);
  for (const auto &f : boundary_faces(*m)) {
    const auto bc = compatible_interpolate(v, kSwirl, f.edge);
    EXPECT_EQ(bc.correction->edge, f.edge);
    EXPECT_LE(std::abs(bc.flux), 1e-12 * kPerimeter * sup_abs(bc));
  }
}

TEST(EdgeBubble, IntegralIsSixthOfLength) {
  const auto m = domain_mesh(3);
  const int e = default_correction_face(*m);
  for (int k : {2, 3, 4, 5}) {
    const auto b = edge_bubble(*m, e, velocity_space(m, k));
    const auto f = boundary_face(*m, e);
    EXPECT_NEAR(boundary_normal_flux(b), f.length / 6.0, 1e-14);
  }
  EXPECT_THROW(edge_bubble(*m, e, velocity_space(m, 1)), UnsupportedError);
}

TEST(EdgeBubble, CorrectionFaceIsLongestLowestIndex) {
  const auto m = domain_mesh(3);
  const int e = default_correction_face(*m);
  const auto faces = boundary_faces(*m);
  double longest = 0.0;
  for (const auto &f : faces)
    longest = std::max(longest, f.length);
  EXPECT_NEAR(boundary_face(*m, e).length, longest, 1e-14);
  for (const auto &f : faces)
    if (f.length > longest * (1 - 1e-12))
      EXPECT_GE(f.edge, e);
}

TEST(BcModeNames, RoundTrip) {
  EXPECT_EQ(bc_mode_from_string("lagrange"), BcMode::lagrange);
  EXPECT_EQ(bc_mode_from_string(to_string(BcMode::compatible)), BcMode::compatible);
  EXPECT_THROW(bc_mode_from_string("exact"), Error);
}
