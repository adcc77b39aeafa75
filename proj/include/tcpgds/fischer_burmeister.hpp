#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "tcpgds/matrix.hpp"
#include "tcpgds/problem.hpp"

namespace tcpgds {

/// Fischer-Burmeister NCP function sqrt(a^2 + b^2) - a - b. Vanishes exactly
/// on the complementary pairs a >= 0, b >= 0, ab = 0.
inline double fischer_burmeister(double a, double b) { return std::hypot(a, b) - a - b; }

/// A selected element of the FB subdifferential: partial derivatives with
/// respect to a and b. Satisfies (da+1)^2 + (db+1)^2 <= 1, with equality off
/// the origin.
struct FbSubgradient {
  double da;
  double db;
};

/// Smooth branch a/r - 1, b/r - 1 whenever r = sqrt(a^2+b^2) > 0. At the
/// origin the subdifferential is a disc; this returns the fixed selection
/// alpha = beta = 1/sqrt(2) (the limit of the smooth branch along a = b > 0)
/// so repeated runs are deterministic.
inline FbSubgradient fb_subgradient(double a, double b) {
  double r = std::hypot(a, b);
  if (r == 0.0) {
    constexpr double kOriginCoeff = 0.70710678118654752440;  // 1/sqrt(2)
    return {kOriginCoeff - 1.0, kOriginCoeff - 1.0};
  }
  return {a / r - 1.0, b / r - 1.0};
}

/// Residual map: component i is fb(x_i, F_i(x)). Zero exactly at solutions.
inline Vector residual(const TcpProblem& problem, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(problem.dim()))
    throw std::invalid_argument("residual: state length does not match problem");
  Vector f = problem.complementarity_map(x);
  Vector phi(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) phi[i] = fischer_burmeister(x[i], f[i]);
  return phi;
}

inline double residual_norm(const TcpProblem& problem, std::span<const double> x) {
  return norm2(residual(problem, x));
}

/// Merit (error monitoring) value: half the squared residual norm.
inline double merit(const TcpProblem& problem, std::span<const double> x) {
  Vector phi = residual(problem, x);
  return 0.5 * dot(phi, phi);
}

/// An element V of the Clarke generalized Jacobian of the residual map:
/// V = D_a + (m-1) D_b (A x^{m-2}), with D_a, D_b diagonal from the
/// per-component FB subgradients at (x_i, F_i(x)). Relies on the problem
/// tensor being symmetric in its trailing indices, which TcpProblem enforces.
inline Matrix generalized_jacobian(const TcpProblem& problem, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(problem.dim()))
    throw std::invalid_argument("generalized_jacobian: state length does not match problem");
  const int n = problem.dim();
  const double jacobian_scale = problem.order() - 1;
  Vector f = problem.complementarity_map(x);
  Matrix m2 = contract_matrix(problem.tensor(), x);
  Matrix v(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto si = static_cast<std::size_t>(i);
    FbSubgradient g = fb_subgradient(x[si], f[si]);
    for (int j = 0; j < n; ++j) {
      auto sj = static_cast<std::size_t>(j);
      v(si, sj) = g.db * jacobian_scale * m2(si, sj);
    }
    v(si, si) += g.da;
  }
  return v;
}

}  // namespace tcpgds
