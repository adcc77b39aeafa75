#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "tcpgds/matrix.hpp"
#include "tcpgds/rng.hpp"

namespace tcpgds {

/// Dense order-m, dimension-n real tensor stored as a flat row-major m-way
/// array (last index fastest). Order and dimension are fixed at construction;
/// indices are 0-based in code, 1-based only in the JSON interchange format.
class DenseTensor {
 public:
  DenseTensor(int order, int dim) : order_(order), dim_(dim) {
    if (order < 2) throw std::invalid_argument("tensor order must be at least 2");
    if (dim < 1) throw std::invalid_argument("tensor dimension must be at least 1");
    std::size_t count = 1;
    for (int k = 0; k < order; ++k) {
      if (count > kMaxEntries / static_cast<std::size_t>(dim))
        throw std::invalid_argument("tensor too large: dim^order exceeds storage cap");
      count *= static_cast<std::size_t>(dim);
    }
    entries_.assign(count, 0.0);
  }

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t entry_count() const { return entries_.size(); }
  const std::vector<double>& entries() const { return entries_; }

  double at(std::span<const int> index) const { return entries_[offset(index)]; }
  double& at(std::span<const int> index) { return entries_[offset(index)]; }

  /// Variadic 0-based accessor, e.g. t(0, 1, 1, 1) = -1.0 for an order-4 tensor.
  template <typename... Ix>
  double& operator()(Ix... ix) {
    std::array<int, sizeof...(Ix)> index{static_cast<int>(ix)...};
    return entries_[offset(index)];
  }
  template <typename... Ix>
  double operator()(Ix... ix) const {
    std::array<int, sizeof...(Ix)> index{static_cast<int>(ix)...};
    return entries_[offset(index)];
  }

 private:
  static constexpr std::size_t kMaxEntries = std::size_t{1} << 26;

  std::size_t offset(std::span<const int> index) const {
    if (index.size() != static_cast<std::size_t>(order_))
      throw std::invalid_argument("tensor index has wrong number of components");
    std::size_t flat = 0;
    for (int i : index) {
      if (i < 0 || i >= dim_) throw std::out_of_range("tensor index out of range");
      flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    }
    return flat;
  }

  int order_;
  int dim_;
  std::vector<double> entries_;
};

/// Odometer step over {0,...,dim-1}^k with the last position fastest; returns
/// false once the index wraps back to all zeros. Matches row-major flat order.
inline bool advance_index(std::span<int> index, int dim) {
  for (std::size_t pos = index.size(); pos-- > 0;) {
    if (++index[pos] < dim) return true;
    index[pos] = 0;
  }
  return false;
}

/// The multilinear map x -> A x^{m-1}: component i sums a_{i,i2,...,im} *
/// x_{i2}...x_{im} over all trailing index tuples.
inline Vector contract_vector(const DenseTensor& t, std::span<const double> x) {
  const int n = t.dim();
  const int m = t.order();
  if (x.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("contract_vector: vector length does not match tensor dimension");
  Vector y(static_cast<std::size_t>(n), 0.0);
  std::vector<int> index(static_cast<std::size_t>(m), 0);
  const auto& entries = t.entries();
  std::size_t flat = 0;
  do {
    double a = entries[flat++];
    if (a != 0.0) {
      double prod = a;
      for (int k = 1; k < m; ++k) prod *= x[static_cast<std::size_t>(index[static_cast<std::size_t>(k)])];
      y[static_cast<std::size_t>(index[0])] += prod;
    }
  } while (advance_index(index, n));
  return y;
}

/// The n-by-n matrix A x^{m-2} with (j,k) entry summing a_{j,k,i3,...,im} *
/// x_{i3}...x_{im}. For a tensor symmetric in indices 2..m, (m-1) times this
/// matrix is the Jacobian of x -> A x^{m-1}. For m = 2 it is the tensor itself.
inline Matrix contract_matrix(const DenseTensor& t, std::span<const double> x) {
  const int n = t.dim();
  const int m = t.order();
  if (x.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("contract_matrix: vector length does not match tensor dimension");
  Matrix out(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  std::vector<int> index(static_cast<std::size_t>(m), 0);
  const auto& entries = t.entries();
  std::size_t flat = 0;
  do {
    double a = entries[flat++];
    if (a != 0.0) {
      double prod = a;
      for (int k = 2; k < m; ++k) prod *= x[static_cast<std::size_t>(index[static_cast<std::size_t>(k)])];
      out(static_cast<std::size_t>(index[0]), static_cast<std::size_t>(index[1])) += prod;
    }
  } while (advance_index(index, n));
  return out;
}

/// Averages entries over all permutations of indices 2..m. The result is
/// symmetric in its trailing indices and induces the same map x -> A x^{m-1}.
inline DenseTensor partial_symmetrize(const DenseTensor& t) {
  const int n = t.dim();
  const int m = t.order();
  DenseTensor out(m, n);
  std::vector<int> index(static_cast<std::size_t>(m), 0);
  std::vector<int> tail(static_cast<std::size_t>(m - 1));
  std::vector<int> probe(static_cast<std::size_t>(m));
  do {
    std::copy(index.begin() + 1, index.end(), tail.begin());
    std::sort(tail.begin(), tail.end());
    probe[0] = index[0];
    double acc = 0.0;
    int count = 0;
    // Distinct arrangements of the tail; their mean equals the mean over all
    // (m-1)! permutations because orbit multiplicities are uniform.
    do {
      std::copy(tail.begin(), tail.end(), probe.begin() + 1);
      acc += t.at(probe);
      ++count;
    } while (std::next_permutation(tail.begin(), tail.end()));
    out.at(index) = acc / count;
  } while (advance_index(index, n));
  return out;
}

/// Outcome of the sampling diagnostic for the P-tensor property. Finding no
/// counterexample is evidence, never a proof; a witness x is conclusive.
struct PTensorCheck {
  bool counterexample_found = false;
  Vector witness;  // nonempty iff counterexample_found
  std::size_t samples_checked = 0;
};

/// Probes `trials` unit vectors (the +/- coordinate axes first, then random
/// sphere directions) for an x with max_i x_i (A x^{m-1})_i <= 0.
inline PTensorCheck p_tensor_sample_check(const DenseTensor& t, std::size_t trials,
                                          std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("p_tensor_sample_check: trials must be >= 1");
  const int n = t.dim();
  auto is_counterexample = [&](const Vector& x) {
    Vector y = contract_vector(t, x);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) best = std::max(best, x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)]);
    return best <= 0.0;
  };

  PTensorCheck result;
  for (int i = 0; i < n && result.samples_checked < trials; ++i) {
    for (double sign : {1.0, -1.0}) {
      if (result.samples_checked >= trials) break;
      Vector axis(static_cast<std::size_t>(n), 0.0);
      axis[static_cast<std::size_t>(i)] = sign;
      ++result.samples_checked;
      if (is_counterexample(axis)) {
        result.counterexample_found = true;
        result.witness = std::move(axis);
        return result;
      }
    }
  }
  Rng rng(seed);
  while (result.samples_checked < trials) {
    Vector x = rng.unit_vector(static_cast<std::size_t>(n));
    ++result.samples_checked;
    if (is_counterexample(x)) {
      result.counterexample_found = true;
      result.witness = std::move(x);
      return result;
    }
  }
  return result;
}

}  // namespace tcpgds
