#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tcpgds/tensor.hpp"

namespace tcpgds {

/// An instance TCP(A, q): find x >= 0 with A x^{m-1} + q >= 0 and
/// x^T (A x^{m-1} + q) = 0. The tensor is partially symmetrized at
/// construction (the induced map is unchanged) so the generalized Jacobian
/// of the residual can be assembled from a single matrix contraction.
class TcpProblem {
 public:
  TcpProblem(const DenseTensor& tensor, Vector q)
      : tensor_(partial_symmetrize(tensor)), q_(std::move(q)) {
    if (q_.size() != static_cast<std::size_t>(tensor_.dim()))
      throw std::invalid_argument("TcpProblem: q length does not match tensor dimension");
    if (!all_finite(q_)) throw std::invalid_argument("TcpProblem: q has non-finite entries");
    if (!all_finite(tensor_.entries()))
      throw std::invalid_argument("TcpProblem: tensor has non-finite entries");
  }

  const DenseTensor& tensor() const { return tensor_; }
  const Vector& q() const { return q_; }
  int dim() const { return tensor_.dim(); }
  int order() const { return tensor_.order(); }

  /// F(x) = A x^{m-1} + q, the map whose complementarity with x is sought.
  Vector complementarity_map(std::span<const double> x) const {
    Vector f = contract_vector(tensor_, x);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += q_[i];
    return f;
  }

 private:
  DenseTensor tensor_;
  Vector q_;
};

enum class ViolationKind { negative_state, negative_map, complementarity };

struct Violation {
  ViolationKind kind;
  int index;         // offending component (largest |x_i F_i| term for complementarity)
  double magnitude;  // size of the violation
};

struct SolutionCheck {
  bool solution = true;
  std::vector<Violation> violations;
};

/// Checks the three defining conditions to absolute tolerance tol:
/// min_i x_i >= -tol, min_i F_i(x) >= -tol, |x^T F(x)| <= tol.
inline SolutionCheck verify_solution(const TcpProblem& problem, std::span<const double> x,
                                     double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("verify_solution: tol must be positive");
  if (x.size() != static_cast<std::size_t>(problem.dim()))
    throw std::invalid_argument("verify_solution: state length does not match problem");
  Vector f = problem.complementarity_map(x);
  SolutionCheck check;
  const int n = problem.dim();

  for (int i = 0; i < n; ++i) {
    double xi = x[static_cast<std::size_t>(i)];
    if (xi < -tol) check.violations.push_back({ViolationKind::negative_state, i, -xi});
  }
  for (int i = 0; i < n; ++i) {
    double fi = f[static_cast<std::size_t>(i)];
    if (fi < -tol) check.violations.push_back({ViolationKind::negative_map, i, -fi});
  }
  double inner = dot(x, f);
  if (std::abs(inner) > tol) {
    int worst = 0;
    double worst_term = -1.0;
    for (int i = 0; i < n; ++i) {
      double term = std::abs(x[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)]);
      if (term > worst_term) {
        worst_term = term;
        worst = i;
      }
    }
    check.violations.push_back({ViolationKind::complementarity, worst, std::abs(inner)});
  }
  check.solution = check.violations.empty();
  return check;
}

inline std::string describe(const SolutionCheck& check) {
  if (check.solution) return "solution";
  std::ostringstream out;
  out << "violations:";
  for (const Violation& v : check.violations) {
    switch (v.kind) {
      case ViolationKind::negative_state:
        out << " x[" << v.index + 1 << "]<0 by " << v.magnitude << ";";
        break;
      case ViolationKind::negative_map:
        out << " F[" << v.index + 1 << "]<0 by " << v.magnitude << ";";
        break;
      case ViolationKind::complementarity:
        out << " |x.F|=" << v.magnitude << " (largest term at index " << v.index + 1 << ");";
        break;
    }
  }
  return out.str();
}

}  // namespace tcpgds
