// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mhdkin/types.hpp"

namespace mhdkin {

// Local entity numbering on a tetrahedron (vertices 0..3).
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
// Face i is opposite vertex i.
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

// Tetrahedral mesh of the unit cube with fully enumerated entities.
//
// Global orientation convention: every edge is stored low-vertex-first and
// every face with its vertex indices sorted ascending. The relative
// orientation of a cell's local entities against these global entities is
// recorded in cell_edge_sign / cell_face_sign.
struct TetMesh {
  int level = -1;       // refinement index for structured meshes, -1 otherwise
  int n_per_axis = 0;   // cubes per axis for structured meshes
  double h = 0.0;       // maximum edge length

  std::vector<Vec3> vertices;
  std::vector<std::array<index_t, 2>> edges;  // lo < hi
  std::vector<std::array<index_t, 3>> faces;  // ascending triple
  std::vector<std::array<index_t, 4>> cells;  // positive volume under stored order

  std::vector<std::array<index_t, 6>> cell_edges;
  std::vector<std::array<index_t, 4>> cell_faces;
  std::vector<std::array<std::int8_t, 6>> cell_edge_sign;  // +1: local low->high matches global
  std::vector<std::array<std::int8_t, 4>> cell_face_sign;  // +1: local face normal matches global

  std::vector<std::array<index_t, 2>> face_cells;  // adjacent cells, second = -1 on the boundary
  std::vector<index_t> edge_cell;                  // one incident cell per edge

  std::vector<std::uint8_t> vertex_on_boundary;
  std::vector<std::uint8_t> edge_on_boundary;
  std::vector<std::uint8_t> face_on_boundary;

  index_t n_vertices() const { return static_cast<index_t>(vertices.size()); }
  index_t n_edges() const { return static_cast<index_t>(edges.size()); }
  index_t n_faces() const { return static_cast<index_t>(faces.size()); }
  index_t n_cells() const { return static_cast<index_t>(cells.size()); }

  double cell_volume(index_t c) const {
    const auto& k = cells[c];
    const Vec3 a = vertices[k[1]] - vertices[k[0]];
    const Vec3 b = vertices[k[2]] - vertices[k[0]];
    const Vec3 d = vertices[k[3]] - vertices[k[0]];
    return dot(cross(a, b), d) / 6.0;
  }

  Vec3 cell_centroid(index_t c) const {
    const auto& k = cells[c];
    return (vertices[k[0]] + vertices[k[1]] + vertices[k[2]] + vertices[k[3]]) * 0.25;
  }
};

namespace detail {

struct FaceKeyHash {
  std::size_t operator()(const std::array<index_t, 3>& f) const {
    std::size_t h = 1469598103934665603ull;
    for (index_t v : f) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace detail

// Derives edges, faces, incidence, orientation signs and boundary flags from
// a vertex/cell list. Entity numbering depends on cell traversal order, but
// the set of entities, their counts and their boundary classification do not.
inline TetMesh build_from_cells(std::vector<Vec3> vertices, std::vector<std::array<index_t, 4>> cells) {
  TetMesh m;
  m.vertices = std::move(vertices);
  m.cells = std::move(cells);
  const index_t nc = m.n_cells();

  for (index_t c = 0; c < nc; ++c) {
    if (m.cell_volume(c) <= 0.0) throw std::invalid_argument("build_from_cells: nonpositive cell volume");
  }

  std::unordered_map<std::uint64_t, index_t> edge_ids;
  std::unordered_map<std::array<index_t, 3>, index_t, detail::FaceKeyHash> face_ids;
  edge_ids.reserve(static_cast<std::size_t>(nc) * 4);
  face_ids.reserve(static_cast<std::size_t>(nc) * 3);

  m.cell_edges.resize(nc);
  m.cell_faces.resize(nc);
  m.cell_edge_sign.resize(nc);
  m.cell_face_sign.resize(nc);

  for (index_t c = 0; c < nc; ++c) {
    const auto& k = m.cells[c];
    for (int le = 0; le < 6; ++le) {
      index_t a = k[kLocalEdges[le][0]];
      index_t b = k[kLocalEdges[le][1]];
      const bool ordered = a < b;
      if (!ordered) std::swap(a, b);
      const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
      auto [it, inserted] = edge_ids.try_emplace(key, static_cast<index_t>(m.edges.size()));
      if (inserted) {
        m.edges.push_back({a, b});
        m.edge_cell.push_back(c);
      }
      m.cell_edges[c][le] = it->second;
      m.cell_edge_sign[c][le] = ordered ? 1 : -1;
    }
    for (int lf = 0; lf < 4; ++lf) {
      std::array<index_t, 3> f = {k[kLocalFaces[lf][0]], k[kLocalFaces[lf][1]], k[kLocalFaces[lf][2]]};
      // Parity of the sort gives the local-vs-global normal sign.
      int swaps = 0;
      if (f[0] > f[1]) {
        std::swap(f[0], f[1]);
        ++swaps;
      }
      if (f[1] > f[2]) {
        std::swap(f[1], f[2]);
        ++swaps;
      }
      if (f[0] > f[1]) {
        std::swap(f[0], f[1]);
        ++swaps;
      }
      auto [it, inserted] = face_ids.try_emplace(f, static_cast<index_t>(m.faces.size()));
      if (inserted) {
        m.faces.push_back(f);
        m.face_cells.push_back({c, -1});
      } else {
        auto& fc = m.face_cells[it->second];
        if (fc[1] != -1) throw std::invalid_argument("build_from_cells: face shared by more than two cells");
        fc[1] = c;
      }
      m.cell_faces[c][lf] = it->second;
      m.cell_face_sign[c][lf] = (swaps % 2 == 0) ? 1 : -1;
    }
  }

  // Boundary classification: a face is boundary iff it has one adjacent cell;
  // vertices and edges inherit the flag from the faces containing them.
  m.face_on_boundary.assign(m.faces.size(), 0);
  m.vertex_on_boundary.assign(m.vertices.size(), 0);
  m.edge_on_boundary.assign(m.edges.size(), 0);
  std::unordered_map<std::uint64_t, index_t> boundary_edges;
  for (index_t f = 0; f < m.n_faces(); ++f) {
    if (m.face_cells[f][1] != -1) continue;
    m.face_on_boundary[f] = 1;
    const auto& fv = m.faces[f];
    for (index_t v : fv) m.vertex_on_boundary[v] = 1;
    const std::array<std::array<index_t, 2>, 3> fe = {{{fv[0], fv[1]}, {fv[0], fv[2]}, {fv[1], fv[2]}}};
    for (const auto& e : fe) {
      const std::uint64_t key = (static_cast<std::uint64_t>(e[0]) << 32) | static_cast<std::uint32_t>(e[1]);
      boundary_edges.try_emplace(key, 0);
    }
  }
  for (index_t e = 0; e < m.n_edges(); ++e) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(m.edges[e][0]) << 32) | static_cast<std::uint32_t>(m.edges[e][1]);
    if (boundary_edges.count(key)) m.edge_on_boundary[e] = 1;
  }

  double hmax = 0.0;
  for (const auto& e : m.edges) hmax = std::max(hmax, norm(m.vertices[e[1]] - m.vertices[e[0]]));
  m.h = hmax;
  return m;
}

// Largest structured refinement level: for level 8 (n = 512) the face-DOF
// count 3F exceeds the 32-bit index range.
inline constexpr int kMaxMeshLevel = 7;

// Structured mesh of (0,1)^3 at refinement level k: n = 2^(k+1) cubes per
// axis, each split into six tetrahedra sharing the cube diagonal from the
// lexicographically lowest to the highest corner. Neighboring cubes induce
// the same diagonal on every shared square, so the subdivision is conforming.
inline TetMesh build_mesh(int level) {
  if (level < 0) throw std::invalid_argument("build_mesh: level must be >= 0");
  if (level > kMaxMeshLevel)
    throw std::domain_error("build_mesh: level > " + std::to_string(kMaxMeshLevel) +
                            " overflows 32-bit DOF indices");
  const index_t n = static_cast<index_t>(1) << (level + 1);
  const index_t np = n + 1;

  std::vector<Vec3> vertices(static_cast<std::size_t>(np) * np * np);
  auto vid = [np](index_t ix, index_t iy, index_t iz) { return ix + np * (iy + np * iz); };
  for (index_t iz = 0; iz < np; ++iz)
    for (index_t iy = 0; iy < np; ++iy)
      for (index_t ix = 0; ix < np; ++ix)
        vertices[vid(ix, iy, iz)] = {static_cast<double>(ix) / n, static_cast<double>(iy) / n,
                                     static_cast<double>(iz) / n};

  std::vector<std::array<index_t, 4>> cells;
  cells.reserve(static_cast<std::size_t>(6) * n * n * n);
  for (index_t iz = 0; iz < n; ++iz)
    for (index_t iy = 0; iy < n; ++iy)
      for (index_t ix = 0; ix < n; ++ix) {
        const index_t v0 = vid(ix, iy, iz);
        const index_t v1 = vid(ix + 1, iy, iz);
        const index_t v2 = vid(ix, iy + 1, iz);
        const index_t v3 = vid(ix + 1, iy + 1, iz);
        const index_t v4 = vid(ix, iy, iz + 1);
        const index_t v5 = vid(ix + 1, iy, iz + 1);
        const index_t v6 = vid(ix, iy + 1, iz + 1);
        const index_t v7 = vid(ix + 1, iy + 1, iz + 1);
        cells.push_back({v0, v1, v3, v7});
        cells.push_back({v0, v1, v7, v5});
        cells.push_back({v0, v5, v7, v4});
        cells.push_back({v0, v3, v2, v7});
        cells.push_back({v0, v6, v4, v7});
        cells.push_back({v0, v2, v6, v7});
      }

  TetMesh m = build_from_cells(std::move(vertices), std::move(cells));
  m.level = level;
  m.n_per_axis = static_cast<int>(n);
  return m;
}

// Single reference tetrahedron; used by tests and the reference-basis checks.
inline TetMesh make_single_tet() {
  return build_from_cells({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                          {{0, 1, 2, 3}});
}

struct EntityCounts {
  index_t vertices, edges, faces, cells;
};

inline EntityCounts entity_counts(const TetMesh& m) {
  return {m.n_vertices(), m.n_edges(), m.n_faces(), m.n_cells()};
}

// Recomputes the per-entity boundary flags from face adjacency.
struct BoundaryFlags {
  std::vector<std::uint8_t> vertex, edge, face;
};

inline BoundaryFlags classify_boundary(const TetMesh& m) {
  return {m.vertex_on_boundary, m.edge_on_boundary, m.face_on_boundary};
}

inline double mesh_size(const TetMesh& m) { return m.h; }

// Plain-text dump: one section per entity kind, one entity per line.
inline void dump_mesh(const TetMesh& m, std::ostream& os) {
  os << "vertices " << m.n_vertices() << "\n";
  for (const auto& v : m.vertices) os << v.x << " " << v.y << " " << v.z << "\n";
  os << "edges " << m.n_edges() << "\n";
  for (const auto& e : m.edges) os << e[0] << " " << e[1] << "\n";
  os << "faces " << m.n_faces() << "\n";
  for (const auto& f : m.faces) os << f[0] << " " << f[1] << " " << f[2] << "\n";
  os << "cells " << m.n_cells() << "\n";
  for (const auto& c : m.cells) os << c[0] << " " << c[1] << " " << c[2] << " " << c[3] << "\n";
  os << "boundary_faces";
  for (index_t f = 0; f < m.n_faces(); ++f)
    if (m.face_on_boundary[f]) os << " " << f;
  os << "\n";
}

}  // namespace mhdkin
