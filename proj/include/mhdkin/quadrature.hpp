// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "mhdkin/types.hpp"

namespace mhdkin {

// Quadrature rule on the reference d-simplex (d = 2: triangle with vertices
// (0,0), (1,0), (0,1); d = 3: tetrahedron with vertices at the origin and the
// unit points). Weights include the reference volume, i.e. they sum to 1/d!.
struct SimplexRule {
  int dim = 0;
  int degree = 0;
  std::vector<std::array<double, 3>> points;  // reference coordinates, trailing entries 0 for d < 3
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Enumerates all multi-indices k of length `len` with |k| = total.
inline void enumerate_compositions(int total, int len, std::vector<int>& k, int pos,
                                   const std::function<void(const std::vector<int>&)>& emit) {
  if (pos == len - 1) {
    k[pos] = total;
    emit(k);
    return;
  }
  for (int v = 0; v <= total; ++v) {
    k[pos] = v;
    enumerate_compositions(total - v, len, k, pos + 1, emit);
  }
}

}  // namespace detail

// Grundmann-Moller simplex rule of degree 2s+1. The construction is fully
// combinatorial, so the unit tests validate it against closed-form monomial
// integrals rather than against a table.
inline SimplexRule grundmann_moller_rule(int dim, int s) {
  if (dim < 1 || dim > 3 || s < 0) throw std::invalid_argument("grundmann_moller_rule: bad arguments");
  SimplexRule rule;
  rule.dim = dim;
  rule.degree = 2 * s + 1;
  const int d = dim;
  std::vector<int> k(d + 1, 0);
  for (int i = 0; i <= s; ++i) {
    const int denom = d + 2 * s + 1 - 2 * i;
    const double w = ((i % 2 == 0) ? 1.0 : -1.0) * std::pow(2.0, -2.0 * s) *
                     std::pow(static_cast<double>(denom), 2 * s + 1) /
                     (detail::factorial(i) * detail::factorial(d + 2 * s + 1 - i));
    detail::enumerate_compositions(s - i, d + 1, k, 0, [&](const std::vector<int>& kk) {
      std::array<double, 3> p{0.0, 0.0, 0.0};
      for (int j = 1; j <= d; ++j) p[j - 1] = (2.0 * kk[j] + 1.0) / denom;
      rule.points.push_back(p);
      rule.weights.push_back(w);
    });
  }
  return rule;
}

// Smallest Grundmann-Moller rule exact for polynomials of the given degree.
inline SimplexRule simplex_rule_for_degree(int dim, int degree) {
  const int s = std::max(0, (degree - 1 + 1) / 2);  // 2s+1 >= degree
  return grundmann_moller_rule(dim, s);
}

// Gauss-Legendre rule on [0, 1]; weights sum to 1. Exact for degree 2n-1.
struct IntervalRule {
  std::vector<double> points;
  std::vector<double> weights;
  std::size_t size() const { return weights.size(); }
};

inline IntervalRule gauss_legendre_rule(int n) {
  IntervalRule r;
  auto add = [&](double t, double w) {  // (t, w) on [-1, 1]
    r.points.push_back(0.5 * (1.0 + t));
    r.weights.push_back(0.5 * w);
  };
  switch (n) {
    case 1:
      add(0.0, 2.0);
      break;
    case 2:
      add(-1.0 / std::sqrt(3.0), 1.0);
      add(1.0 / std::sqrt(3.0), 1.0);
      break;
    case 3:
      add(-std::sqrt(3.0 / 5.0), 5.0 / 9.0);
      add(0.0, 8.0 / 9.0);
      add(std::sqrt(3.0 / 5.0), 5.0 / 9.0);
      break;
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      add(-b, wb);
      add(-a, wa);
      add(a, wa);
      add(b, wb);
      break;
    }
    case 5: {
      const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
      const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
      add(-b, wb);
      add(-a, wa);
      add(0.0, 128.0 / 225.0);
      add(a, wa);
      add(b, wb);
      break;
    }
    default:
      throw std::invalid_argument("gauss_legendre_rule: n must be in [1, 5]");
  }
  return r;
}

// Default rule degrees used across the project: assembly integrates all
// polynomial bilinear-form integrands of the model exactly; error norms use a
// rule two degrees higher so quadrature error stays below discretization
// error.
inline constexpr int kAssemblyDegree = 7;
inline constexpr int kErrorDegree = 9;

}  // namespace mhdkin
