// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mhdkin {

// Global entity/DOF index type. build_mesh() rejects refinement levels whose
// entity counts would overflow it (see mesh.hpp).
using index_t = std::int32_t;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double a) const { return {a * x, a * y, a * z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  Vec3& operator*=(double a) {
    x *= a;
    y *= a;
    z *= a;
    return *this;
  }
};

inline Vec3 operator*(double a, const Vec3& v) { return v * a; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

// Dense vector helpers shared by the solvers.
inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

namespace detail {

// In-place Gaussian elimination with partial pivoting on a row-major n x n
// matrix; solves for nrhs right-hand sides stored column-contiguously in rhs
// (rhs[k * n + i]). Used for the small per-cell dual-basis systems.
inline void solve_dense(std::vector<double>& a, int n, std::vector<double>& rhs, int nrhs) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double pmax = std::abs(a[static_cast<std::size_t>(k) * n + k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a[static_cast<std::size_t>(i) * n + k]);
      if (v > pmax) {
        piv = i;
        pmax = v;
      }
    }
    if (pmax == 0.0) throw std::runtime_error("solve_dense: singular matrix at pivot " + std::to_string(k));
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a[static_cast<std::size_t>(k) * n + j], a[static_cast<std::size_t>(piv) * n + j]);
      for (int r = 0; r < nrhs; ++r) std::swap(rhs[static_cast<std::size_t>(r) * n + k], rhs[static_cast<std::size_t>(r) * n + piv]);
    }
    const double d = a[static_cast<std::size_t>(k) * n + k];
    for (int i = k + 1; i < n; ++i) {
      const double f = a[static_cast<std::size_t>(i) * n + k] / d;
      if (f == 0.0) continue;
      a[static_cast<std::size_t>(i) * n + k] = 0.0;
      for (int j = k + 1; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] -= f * a[static_cast<std::size_t>(k) * n + j];
      for (int r = 0; r < nrhs; ++r) rhs[static_cast<std::size_t>(r) * n + i] -= f * rhs[static_cast<std::size_t>(r) * n + k];
    }
  }
  for (int r = 0; r < nrhs; ++r) {
    for (int i = n - 1; i >= 0; --i) {
      double s = rhs[static_cast<std::size_t>(r) * n + i];
      for (int j = i + 1; j < n; ++j) s -= a[static_cast<std::size_t>(i) * n + j] * rhs[static_cast<std::size_t>(r) * n + j];
      rhs[static_cast<std::size_t>(r) * n + i] = s / a[static_cast<std::size_t>(i) * n + i];
    }
  }
}

}  // namespace detail

}  // namespace mhdkin
