#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tcpgds/problem.hpp"
#include "tcpgds/rng.hpp"
#include "tcpgds/tensor.hpp"

namespace tcpgds {

/// A diagonal-tensor instance bundled with its closed-form solution, used as
/// an oracle against integrator output.
struct DiagonalProblem {
  TcpProblem problem;
  Vector diagonal;
  Vector solution;
};

/// For a_{k...k} = d_k > 0 the problem splits into scalar complementarity
/// conditions with solution x_k = max(0, -q_k/d_k)^{1/(m-1)}.
inline Vector diagonal_solution(int order, const Vector& diagonal, const Vector& q) {
  Vector x(diagonal.size());
  for (std::size_t k = 0; k < diagonal.size(); ++k) {
    double ratio = -q[k] / diagonal[k];
    x[k] = ratio > 0.0 ? std::pow(ratio, 1.0 / (order - 1)) : 0.0;
  }
  return x;
}

inline DiagonalProblem make_diagonal_problem(int order, Vector diagonal, Vector q) {
  if (diagonal.size() != q.size())
    throw std::invalid_argument("diagonal problem: diagonal and q lengths differ");
  DenseTensor tensor(order, static_cast<int>(diagonal.size()));
  std::vector<int> index(static_cast<std::size_t>(order));
  for (std::size_t k = 0; k < diagonal.size(); ++k) {
    if (!(diagonal[k] > 0.0))
      throw std::invalid_argument("diagonal problem: diagonal entries must be positive");
    std::fill(index.begin(), index.end(), static_cast<int>(k));
    tensor.at(index) = diagonal[k];
  }
  Vector solution = diagonal_solution(order, diagonal, q);
  return {TcpProblem(tensor, std::move(q)), std::move(diagonal), std::move(solution)};
}

/// Seeded generator: d_k ~ U(0.5, 2), q_k ~ U(-2, 2). Even order is the
/// useful regime (it makes the diagonal tensor a P-tensor, so the flow has a
/// unique attracting solution).
inline DiagonalProblem random_diagonal_problem(int order, int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_diagonal_problem: dim must be >= 1");
  Rng rng(seed);
  Vector diagonal = rng.uniform_vector(static_cast<std::size_t>(dim), 0.5, 2.0);
  Vector q = rng.uniform_vector(static_cast<std::size_t>(dim), -2.0, 2.0);
  return make_diagonal_problem(order, std::move(diagonal), std::move(q));
}

}  // namespace tcpgds
