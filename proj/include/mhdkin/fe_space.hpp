// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "mhdkin/mesh.hpp"
#include "mhdkin/quadrature.hpp"
#include "mhdkin/types.hpp"

namespace mhdkin {

// The four conforming spaces of the discrete complex:
//   V0: P2 Lagrange (H1),          one DOF per vertex + one per edge
//   V1: linear edge element (Hcurl), two tangential moments per edge
//   V2: linear face element (Hdiv),  three normal moments per face
//   V3: P0 (L2),                     one DOF per cell
enum class SpaceKind { V0, V1, V2, V3 };

struct FeSpace {
  SpaceKind kind = SpaceKind::V0;
  const TetMesh* mesh = nullptr;
  index_t n_dofs = 0;
  index_t n_free = 0;
  std::vector<std::uint8_t> constrained;  // essential boundary DOFs
  std::vector<index_t> reduced_index;     // free-DOF numbering, -1 when constrained
};

inline FeSpace build_space(const TetMesh& mesh, SpaceKind kind) {
  FeSpace s;
  s.kind = kind;
  s.mesh = &mesh;
  const index_t nv = mesh.n_vertices(), ne = mesh.n_edges(), nf = mesh.n_faces(), nc = mesh.n_cells();
  switch (kind) {
    case SpaceKind::V0:
      s.n_dofs = nv + ne;
      s.constrained.assign(s.n_dofs, 0);
      for (index_t v = 0; v < nv; ++v) s.constrained[v] = mesh.vertex_on_boundary[v];
      for (index_t e = 0; e < ne; ++e) s.constrained[nv + e] = mesh.edge_on_boundary[e];
      break;
    case SpaceKind::V1:
      s.n_dofs = 2 * ne;
      s.constrained.assign(s.n_dofs, 0);
      for (index_t e = 0; e < ne; ++e)
        if (mesh.edge_on_boundary[e]) {
          s.constrained[2 * e] = 1;
          s.constrained[2 * e + 1] = 1;
        }
      break;
    case SpaceKind::V2:
      s.n_dofs = 3 * nf;
      s.constrained.assign(s.n_dofs, 0);
      break;
    case SpaceKind::V3:
      s.n_dofs = nc;
      s.constrained.assign(s.n_dofs, 0);
      break;
  }
  s.reduced_index.assign(s.n_dofs, -1);
  index_t next = 0;
  for (index_t i = 0; i < s.n_dofs; ++i)
    if (!s.constrained[i]) s.reduced_index[i] = next++;
  s.n_free = next;
  return s;
}

// Vector field affine in x: u(x) = a + B (x - x0). The local shape functions
// of V1 and V2 are stored in this form, making curl and div exact constants.
struct AffineField {
  Vec3 a{};
  std::array<std::array<double, 3>, 3> B{};  // B[i][j] = d u_i / d x_j
  Vec3 x0{};

  Vec3 value(const Vec3& x) const {
    const Vec3 d = x - x0;
    return {a.x + B[0][0] * d.x + B[0][1] * d.y + B[0][2] * d.z,
            a.y + B[1][0] * d.x + B[1][1] * d.y + B[1][2] * d.z,
            a.z + B[2][0] * d.x + B[2][1] * d.y + B[2][2] * d.z};
  }
  Vec3 curl() const { return {B[2][1] - B[1][2], B[0][2] - B[2][0], B[1][0] - B[0][1]}; }
  double div() const { return B[0][0] + B[1][1] + B[2][2]; }
};

namespace detail {

// DOF functionals. Both are defined purely by the global entity (vertex
// ordering low-to-high / sorted triple), so the cells sharing an entity see
// identical functionals and no extra sign bookkeeping is needed.

// Tangential edge moments against {1, 2s-1}, s in [0,1] running from the low
// to the high global vertex; normalized by edge length.
template <typename F>
double edge_moment(const Vec3& plo, const Vec3& phi, int m, const IntervalRule& rule, F&& field) {
  const Vec3 d = phi - plo;
  const Vec3 t = d * (1.0 / norm(d));
  double acc = 0.0;
  for (std::size_t g = 0; g < rule.size(); ++g) {
    const double sp = rule.points[g];
    const Vec3 x = plo + sp * d;
    const double q = (m == 0) ? 1.0 : (2.0 * sp - 1.0);
    acc += rule.weights[g] * dot(field(x), t) * q;
  }
  return acc;
}

// Normal face moments against {1, xi, eta} in the barycentric chart of the
// sorted vertex triple (pa, pb, pc); normalized by face area. The normal is
// the right-handed normal of the sorted triple.
template <typename F>
double face_moment(const Vec3& pa, const Vec3& pb, const Vec3& pc, int m, const SimplexRule& rule,
                   F&& field) {
  const Vec3 e1 = pb - pa, e2 = pc - pa;
  const Vec3 nvec = cross(e1, e2);
  const Vec3 n = nvec * (1.0 / norm(nvec));
  double acc = 0.0;
  for (std::size_t g = 0; g < rule.size(); ++g) {
    const double xi = rule.points[g][0], eta = rule.points[g][1];
    const Vec3 x = pa + xi * e1 + eta * e2;
    const double q = (m == 0) ? 1.0 : (m == 1 ? xi : eta);
    acc += 2.0 * rule.weights[g] * dot(field(x), n) * q;
  }
  return acc;
}

inline double cell_scale(const TetMesh& mesh, index_t c) {
  double s = 0.0;
  const auto& k = mesh.cells[c];
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) s = std::max(s, norm(mesh.vertices[k[i]] - mesh.vertices[k[j]]));
  return s;
}

struct FunctionalRules {
  IntervalRule edge = gauss_legendre_rule(2);       // exact for the P1 x P1 construction integrands
  SimplexRule face = grundmann_moller_rule(2, 1);   // degree 3
  IntervalRule edge_interp = gauss_legendre_rule(5);      // degree 9, for smooth-field moments
  SimplexRule face_interp = grundmann_moller_rule(2, 3);  // degree 7
};

inline const FunctionalRules& functional_rules() {
  static const FunctionalRules rules;
  return rules;
}

}  // namespace detail

// Local basis of V1 or V2 on one cell: twelve affine fields dual to the
// global moment functionals of the cell's edges (faces).
struct VecCellBasis {
  std::array<index_t, 12> dofs{};
  std::array<AffineField, 12> fn{};
};

namespace detail {

// Builds the 12 fields dual to the given 12 functionals by expanding in the
// monomial fields e_c * {1, X, Y, Z} (centered, scaled coordinates) and
// solving the resulting 12x12 moment system.
template <typename Functional>
VecCellBasis build_vec_cell_basis(const TetMesh& mesh, index_t c, Functional&& functional) {
  const Vec3 x0 = mesh.cell_centroid(c);
  const double scale = cell_scale(mesh, c);
  if (!(mesh.cell_volume(c) > 0.0)) throw std::invalid_argument("cell basis: degenerate cell");

  auto monomial = [&](int k, const Vec3& x) -> Vec3 {
    const int comp = k / 4, m = k % 4;
    const Vec3 d = (x - x0) * (1.0 / scale);
    const double mono = (m == 0) ? 1.0 : d[m - 1];
    Vec3 v{};
    v[comp] = mono;
    return v;
  };

  std::vector<double> vmat(144);
  for (int row = 0; row < 12; ++row)
    for (int k = 0; k < 12; ++k)
      vmat[static_cast<std::size_t>(row) * 12 + k] =
          functional(row, [&](const Vec3& x) { return monomial(k, x); });

  std::vector<double> coef(144, 0.0);
  for (int j = 0; j < 12; ++j) coef[static_cast<std::size_t>(j) * 12 + j] = 1.0;  // identity RHS
  solve_dense(vmat, 12, coef, 12);

  VecCellBasis basis;
  for (int j = 0; j < 12; ++j) {
    AffineField f;
    f.x0 = x0;
    for (int comp = 0; comp < 3; ++comp) {
      f.a[comp] = coef[static_cast<std::size_t>(j) * 12 + comp * 4];
      for (int d = 0; d < 3; ++d)
        f.B[comp][d] = coef[static_cast<std::size_t>(j) * 12 + comp * 4 + d + 1] / scale;
    }
    basis.fn[j] = f;
  }
  return basis;
}

}  // namespace detail

inline VecCellBasis build_v1_cell_basis(const TetMesh& mesh, index_t c) {
  const auto& rules = detail::functional_rules();
  VecCellBasis basis = detail::build_vec_cell_basis(mesh, c, [&](int row, auto&& field) {
    const int le = row / 2, m = row % 2;
    const index_t ge = mesh.cell_edges[c][le];
    const Vec3 plo = mesh.vertices[mesh.edges[ge][0]];
    const Vec3 phi = mesh.vertices[mesh.edges[ge][1]];
    return detail::edge_moment(plo, phi, m, rules.edge, field);
  });
  for (int le = 0; le < 6; ++le)
    for (int m = 0; m < 2; ++m) basis.dofs[2 * le + m] = 2 * mesh.cell_edges[c][le] + m;
  return basis;
}

inline VecCellBasis build_v2_cell_basis(const TetMesh& mesh, index_t c) {
  const auto& rules = detail::functional_rules();
  VecCellBasis basis = detail::build_vec_cell_basis(mesh, c, [&](int row, auto&& field) {
    const int lf = row / 3, m = row % 3;
    const index_t gf = mesh.cell_faces[c][lf];
    const auto& fv = mesh.faces[gf];
    return detail::face_moment(mesh.vertices[fv[0]], mesh.vertices[fv[1]], mesh.vertices[fv[2]], m,
                               rules.face, field);
  });
  for (int lf = 0; lf < 4; ++lf)
    for (int m = 0; m < 3; ++m) basis.dofs[3 * lf + m] = 3 * mesh.cell_faces[c][lf] + m;
  return basis;
}

// P2 Lagrange basis on one cell: vertex values plus edge-midpoint values.
// Midpoint DOFs are symmetric in the edge endpoints, so they carry no
// orientation.
struct ScalarCellBasis {
  std::array<index_t, 10> dofs{};
  std::array<Vec3, 4> grad_lambda{};
  std::array<double, 4> lambda_at_origin{};
  Vec3 p0{};

  double lambda(int i, const Vec3& x) const { return lambda_at_origin[i] + dot(grad_lambda[i], x - p0); }

  double value(int i, const Vec3& x) const {
    if (i < 4) {
      const double l = lambda(i, x);
      return l * (2.0 * l - 1.0);
    }
    const auto& e = kLocalEdges[i - 4];
    return 4.0 * lambda(e[0], x) * lambda(e[1], x);
  }

  Vec3 gradient(int i, const Vec3& x) const {
    if (i < 4) {
      const double l = lambda(i, x);
      return grad_lambda[i] * (4.0 * l - 1.0);
    }
    const auto& e = kLocalEdges[i - 4];
    return 4.0 * (lambda(e[1], x) * grad_lambda[e[0]] + lambda(e[0], x) * grad_lambda[e[1]]);
  }
};

inline ScalarCellBasis build_v0_cell_basis(const TetMesh& mesh, index_t c) {
  ScalarCellBasis b;
  const auto& k = mesh.cells[c];
  b.p0 = mesh.vertices[k[0]];
  const Vec3 j0 = mesh.vertices[k[1]] - b.p0;
  const Vec3 j1 = mesh.vertices[k[2]] - b.p0;
  const Vec3 j2 = mesh.vertices[k[3]] - b.p0;
  const double det = dot(cross(j0, j1), j2);
  if (!(det > 0.0)) throw std::invalid_argument("cell basis: degenerate cell");
  // Rows of the inverse Jacobian are the gradients of lambda_1..3.
  const Vec3 r1 = cross(j1, j2) * (1.0 / det);
  const Vec3 r2 = cross(j2, j0) * (1.0 / det);
  const Vec3 r3 = cross(j0, j1) * (1.0 / det);
  b.grad_lambda = {-(r1 + r2 + r3), r1, r2, r3};
  b.lambda_at_origin = {1.0, 0.0, 0.0, 0.0};
  const index_t nv = mesh.n_vertices();
  for (int i = 0; i < 4; ++i) b.dofs[i] = k[i];
  for (int le = 0; le < 6; ++le) b.dofs[4 + le] = nv + mesh.cell_edges[c][le];
  return b;
}

// Point evaluation of all shape functions of one space on one cell, at a
// reference-tetrahedron point. Vector spaces report the physical values and
// the relevant differential (curl for V1, div for V2, grad for V0).
struct BasisEval {
  std::vector<index_t> dofs;
  std::vector<double> scalar_values;
  std::vector<Vec3> vec_values;
  std::vector<Vec3> vec_diff;
  std::vector<double> scalar_diff;
};

inline Vec3 map_reference_point(const TetMesh& mesh, index_t c, const Vec3& ref) {
  const auto& k = mesh.cells[c];
  const Vec3 p0 = mesh.vertices[k[0]];
  return p0 + ref.x * (mesh.vertices[k[1]] - p0) + ref.y * (mesh.vertices[k[2]] - p0) +
         ref.z * (mesh.vertices[k[3]] - p0);
}

inline BasisEval eval_basis(const TetMesh& mesh, SpaceKind kind, index_t c, const Vec3& ref) {
  BasisEval out;
  const Vec3 x = map_reference_point(mesh, c, ref);
  switch (kind) {
    case SpaceKind::V0: {
      const ScalarCellBasis b = build_v0_cell_basis(mesh, c);
      out.dofs.assign(b.dofs.begin(), b.dofs.end());
      for (int i = 0; i < 10; ++i) {
        out.scalar_values.push_back(b.value(i, x));
        out.vec_diff.push_back(b.gradient(i, x));
      }
      break;
    }
    case SpaceKind::V1: {
      const VecCellBasis b = build_v1_cell_basis(mesh, c);
      out.dofs.assign(b.dofs.begin(), b.dofs.end());
      for (int i = 0; i < 12; ++i) {
        out.vec_values.push_back(b.fn[i].value(x));
        out.vec_diff.push_back(b.fn[i].curl());
      }
      break;
    }
    case SpaceKind::V2: {
      const VecCellBasis b = build_v2_cell_basis(mesh, c);
      out.dofs.assign(b.dofs.begin(), b.dofs.end());
      for (int i = 0; i < 12; ++i) {
        out.vec_values.push_back(b.fn[i].value(x));
        out.scalar_diff.push_back(b.fn[i].div());
      }
      break;
    }
    case SpaceKind::V3:
      out.dofs.push_back(c);
      out.scalar_values.push_back(1.0);
      break;
  }
  return out;
}

// Canonical interpolation: applies the DOF functionals of the space to the
// field. Fields are passed as (cell, x) callables so piecewise-polynomial
// members of a neighboring space can be interpolated consistently (their
// shared traces make the entity moments single-valued).
using VecField = std::function<Vec3(index_t cell, const Vec3& x)>;
using ScalarField = std::function<double(index_t cell, const Vec3& x)>;

inline std::vector<double> interpolate(const FeSpace& space, const VecField& field) {
  const TetMesh& mesh = *space.mesh;
  const auto& rules = detail::functional_rules();
  std::vector<double> dofs(space.n_dofs, 0.0);
  if (space.kind == SpaceKind::V1) {
    for (index_t e = 0; e < mesh.n_edges(); ++e) {
      const index_t c = mesh.edge_cell[e];
      const Vec3 plo = mesh.vertices[mesh.edges[e][0]];
      const Vec3 phi = mesh.vertices[mesh.edges[e][1]];
      for (int m = 0; m < 2; ++m)
        dofs[2 * e + m] = detail::edge_moment(plo, phi, m, rules.edge_interp,
                                              [&](const Vec3& x) { return field(c, x); });
    }
  } else if (space.kind == SpaceKind::V2) {
    for (index_t f = 0; f < mesh.n_faces(); ++f) {
      const index_t c = mesh.face_cells[f][0];
      const auto& fv = mesh.faces[f];
      for (int m = 0; m < 3; ++m)
        dofs[3 * f + m] =
            detail::face_moment(mesh.vertices[fv[0]], mesh.vertices[fv[1]], mesh.vertices[fv[2]], m,
                                rules.face_interp, [&](const Vec3& x) { return field(c, x); });
    }
  } else {
    throw std::invalid_argument("interpolate: vector field requires V1 or V2");
  }
  return dofs;
}

inline std::vector<double> interpolate(const FeSpace& space, const ScalarField& field) {
  const TetMesh& mesh = *space.mesh;
  std::vector<double> dofs(space.n_dofs, 0.0);
  if (space.kind == SpaceKind::V0) {
    const index_t nv = mesh.n_vertices();
    for (index_t v = 0; v < nv; ++v) dofs[v] = field(-1, mesh.vertices[v]);
    for (index_t e = 0; e < mesh.n_edges(); ++e) {
      const Vec3 mid = (mesh.vertices[mesh.edges[e][0]] + mesh.vertices[mesh.edges[e][1]]) * 0.5;
      dofs[nv + e] = field(mesh.edge_cell[e], mid);
    }
  } else if (space.kind == SpaceKind::V3) {
    static const SimplexRule rule = simplex_rule_for_degree(3, kAssemblyDegree);
    for (index_t c = 0; c < mesh.n_cells(); ++c) {
      const double vol = mesh.cell_volume(c);
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec3 x = map_reference_point(mesh, c, {rule.points[q][0], rule.points[q][1], rule.points[q][2]});
        acc += rule.weights[q] * 6.0 * vol * field(c, x);
      }
      dofs[c] = acc / vol;  // cell average
    }
  } else {
    throw std::invalid_argument("interpolate: scalar field requires V0 or V3");
  }
  return dofs;
}

// Convenience overloads for globally-defined smooth fields.
inline std::vector<double> interpolate(const FeSpace& space, const std::function<Vec3(const Vec3&)>& f) {
  return interpolate(space, VecField([&](index_t, const Vec3& x) { return f(x); }));
}
inline std::vector<double> interpolate(const FeSpace& space, const std::function<double(const Vec3&)>& f) {
  return interpolate(space, ScalarField([&](index_t, const Vec3& x) { return f(x); }));
}

// Pointwise evaluation of coefficient fields; intended for tests and
// post-processing, not assembly hot loops.
inline Vec3 eval_vec_field(const FeSpace& space, std::span<const double> coeffs, index_t c, const Vec3& x) {
  const VecCellBasis b = (space.kind == SpaceKind::V1) ? build_v1_cell_basis(*space.mesh, c)
                                                       : build_v2_cell_basis(*space.mesh, c);
  Vec3 v{};
  for (int i = 0; i < 12; ++i) v += coeffs[b.dofs[i]] * b.fn[i].value(x);
  return v;
}

inline Vec3 eval_v1_curl(const FeSpace& space, std::span<const double> coeffs, index_t c) {
  const VecCellBasis b = build_v1_cell_basis(*space.mesh, c);
  Vec3 v{};
  for (int i = 0; i < 12; ++i) v += coeffs[b.dofs[i]] * b.fn[i].curl();
  return v;
}

inline double eval_v2_div(const FeSpace& space, std::span<const double> coeffs, index_t c) {
  const VecCellBasis b = build_v2_cell_basis(*space.mesh, c);
  double d = 0.0;
  for (int i = 0; i < 12; ++i) d += coeffs[b.dofs[i]] * b.fn[i].div();
  return d;
}

inline double eval_scalar_field(const FeSpace& space, std::span<const double> coeffs, index_t c,
                                const Vec3& x) {
  if (space.kind == SpaceKind::V3) return coeffs[c];
  const ScalarCellBasis b = build_v0_cell_basis(*space.mesh, c);
  double v = 0.0;
  for (int i = 0; i < 10; ++i) v += coeffs[b.dofs[i]] * b.value(i, x);
  return v;
}

inline Vec3 eval_v0_grad(const FeSpace& space, std::span<const double> coeffs, index_t c, const Vec3& x) {
  const ScalarCellBasis b = build_v0_cell_basis(*space.mesh, c);
  Vec3 v{};
  for (int i = 0; i < 10; ++i) v += coeffs[b.dofs[i]] * b.gradient(i, x);
  return v;
}

// Verifies the discrete complex inclusions curl V1 in V2, div V2 in V3 and
// grad V0 in V1 on randomly generated members, by interpolating the
// differential into the target space and comparing pointwise at interior
// quadrature points.
struct InclusionReport {
  bool curl_v1_in_v2 = false;
  bool div_v2_in_v3 = false;
  bool grad_v0_in_v1 = false;
  double max_deviation = 0.0;

  bool all() const { return curl_v1_in_v2 && div_v2_in_v3 && grad_v0_in_v1; }
};

inline InclusionReport complex_inclusion_check(const TetMesh& mesh, int n_samples = 20,
                                               unsigned seed = 1234, double tol = 1e-10) {
  const FeSpace v0 = build_space(mesh, SpaceKind::V0);
  const FeSpace v1 = build_space(mesh, SpaceKind::V1);
  const FeSpace v2 = build_space(mesh, SpaceKind::V2);
  const FeSpace v3 = build_space(mesh, SpaceKind::V3);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  static const SimplexRule rule = grundmann_moller_rule(3, 1);

  InclusionReport rep;
  double dev_curl = 0.0, dev_div = 0.0, dev_grad = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    std::vector<double> a(v1.n_dofs), v(v2.n_dofs), s0(v0.n_dofs);
    for (double& c : a) c = dist(rng);
    for (double& c : v) c = dist(rng);
    for (double& c : s0) c = dist(rng);

    const auto curl_a = interpolate(
        v2, VecField([&](index_t c, const Vec3&) { return eval_v1_curl(v1, a, c); }));
    const auto div_v = interpolate(
        v3, ScalarField([&](index_t c, const Vec3&) { return eval_v2_div(v2, v, c); }));
    const auto grad_s = interpolate(
        v1, VecField([&](index_t c, const Vec3& x) { return eval_v0_grad(v0, s0, c, x); }));

    for (index_t c = 0; c < mesh.n_cells(); ++c) {
      const Vec3 curl_here = eval_v1_curl(v1, a, c);
      const double div_here = eval_v2_div(v2, v, c);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec3 ref{rule.points[q][0], rule.points[q][1], rule.points[q][2]};
        const Vec3 x = map_reference_point(mesh, c, ref);
        dev_curl = std::max(dev_curl, norm(eval_vec_field(v2, curl_a, c, x) - curl_here));
        dev_div = std::max(dev_div, std::abs(eval_scalar_field(v3, div_v, c, x) - div_here));
        dev_grad = std::max(dev_grad, norm(eval_vec_field(v1, grad_s, c, x) - eval_v0_grad(v0, s0, c, x)));
      }
    }
  }
  rep.curl_v1_in_v2 = dev_curl <= tol;
  rep.div_v2_in_v3 = dev_div <= tol;
  rep.grad_v0_in_v1 = dev_grad <= tol;
  rep.max_deviation = std::max({dev_curl, dev_div, dev_grad});
  return rep;
}

}  // namespace mhdkin
