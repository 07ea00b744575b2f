#include "svstokes/element.hpp"

namespace svstokes {

void check_element(const ElementKind &e) {
  if (e.continuous() && e.degree < 1)
    throw UnsupportedError("continuous Lagrange elements need degree >= 1");
  if (e.degree < 0)
    throw UnsupportedError("element degree must be nonnegative");
}

const char *to_string(Family f) {
  switch (f) {
  case Family::vector_continuous:
    return "vector-lagrange-continuous";
  case Family::scalar_continuous:
    return "scalar-lagrange-continuous";
  case Family::scalar_discontinuous:
    return "scalar-lagrange-discontinuous";
  }
  return "?";
}

Family family_from_string(const std::string &s) {
  if (s == "vector-lagrange-continuous")
    return Family::vector_continuous;
  if (s == "scalar-lagrange-continuous")
    return Family::scalar_continuous;
  if (s == "scalar-lagrange-discontinuous")
    return Family::scalar_discontinuous;
  throw Error("unknown element family '" + s + "'");
}

std::vector<LatticeIndex> lattice(int p) {
  if (p == 0)
    return {{0, 0, 0}};
  std::vector<LatticeIndex> nodes;
  nodes.reserve((p + 1) * (p + 2) / 2);
  nodes.push_back({p, 0, 0});
  nodes.push_back({0, p, 0});
  nodes.push_back({0, 0, p});
  for (int e = 0; e < 3; ++e) {
    const int from = (e + 1) % 3, to = (e + 2) % 3;
    for (int j = 1; j < p; ++j) {
      LatticeIndex a{0, 0, 0};
      a[from] = p - j;
      a[to] = j;
      nodes.push_back(a);
    }
  }
  for (int a1 = 1; a1 <= p - 2; ++a1)
    for (int a2 = 1; a1 + a2 <= p - 1; ++a2)
      nodes.push_back({p - a1 - a2, a1, a2});
  return nodes;
}

Barycentric lattice_point(const LatticeIndex &a, int p) {
  if (p == 0)
    return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return {double(a[0]) / p, double(a[1]) / p, double(a[2]) / p};
}

BasisTabulation reference_basis(int p, const Barycentric &lambda) {
  BasisTabulation tab;
  if (p == 0) {
    tab.values = {1.0};
    tab.gradients = {{0.0, 0.0}};
    return tab;
  }
  const auto nodes = lattice(p);
  tab.values.resize(nodes.size());
  tab.gradients.resize(nodes.size());

  // Silvester's product form: phi_a = prod_k prod_{m < a_k} (p lambda_k - m) / (m + 1)
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double f[3], df[3];
    for (int k = 0; k < 3; ++k) {
      f[k] = 1.0;
      df[k] = 0.0;
      for (int m = 0; m < nodes[i][k]; ++m) {
        const double g = (p * lambda[k] - m) / (m + 1);
        const double dg = double(p) / (m + 1);
        df[k] = df[k] * g + f[k] * dg;
        f[k] *= g;
      }
    }
    tab.values[i] = f[0] * f[1] * f[2];
    const double d0 = df[0] * f[1] * f[2];
    const double d1 = f[0] * df[1] * f[2];
    const double d2 = f[0] * f[1] * df[2];
    tab.gradients[i] = {d1 - d0, d2 - d0};
  }
  return tab;
}

} // namespace svstokes
