#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tcpgds/activation.hpp"
#include "tcpgds/problem.hpp"
#include "tcpgds/tensor.hpp"

namespace tcpgds {

/// The three benchmark tensors shipped with the CLI, byte-for-byte as
/// published: eg1 and eg3 are order-4 dimension-2 P-tensors, eg2 is the
/// order-5 dimension-3 diagonal tensor a_{kkkkk} = k.
inline DenseTensor builtin_tensor(std::string_view name) {
  if (name == "eg1") {
    DenseTensor t(4, 2);
    t(0, 0, 0, 0) = 1.0;
    t(0, 1, 1, 1) = -1.0;
    t(0, 0, 1, 1) = 1.0;
    t(1, 1, 1, 1) = 1.0;
    t(1, 0, 0, 0) = -1.0;
    t(1, 1, 0, 0) = 1.0;
    return t;
  }
  if (name == "eg2") {
    DenseTensor t(5, 3);
    t(0, 0, 0, 0, 0) = 1.0;
    t(1, 1, 1, 1, 1) = 2.0;
    t(2, 2, 2, 2, 2) = 3.0;
    return t;
  }
  if (name == "eg3") {
    DenseTensor t(4, 2);
    t(0, 0, 0, 0) = 1.0;
    t(0, 0, 0, 1) = -2.0;
    t(0, 0, 1, 1) = 1.0;
    t(1, 1, 1, 1) = 1.0;
    return t;
  }
  throw std::invalid_argument("unknown builtin problem '" + std::string(name) +
                              "' (expected eg1, eg2 or eg3)");
}

inline int builtin_dim(std::string_view name) { return name == "eg2" ? 3 : 2; }

inline TcpProblem load_builtin(std::string_view name, Vector q) {
  DenseTensor tensor = builtin_tensor(name);
  if (q.size() != static_cast<std::size_t>(tensor.dim()))
    throw std::invalid_argument("builtin '" + std::string(name) + "' needs q of length " +
                                std::to_string(tensor.dim()));
  return TcpProblem(tensor, std::move(q));
}

/// Default activation sweep per builtin: the linear flow plus the three
/// nonlinear parameter sets used in the published experiments.
inline std::vector<ActivationSpec> builtin_activation_suite(std::string_view name) {
  if (name == "eg1")
    return {ActivationSpec::linear(), ActivationSpec::bipolar_sigmoid(5.0),
            ActivationSpec::power_sigmoid(3, 5.0), ActivationSpec::smooth_power_sigmoid(3, 7.0)};
  if (name == "eg2")
    return {ActivationSpec::linear(), ActivationSpec::bipolar_sigmoid(7.0),
            ActivationSpec::power_sigmoid(5, 7.0), ActivationSpec::smooth_power_sigmoid(5, 9.0)};
  if (name == "eg3")
    return {ActivationSpec::linear(), ActivationSpec::bipolar_sigmoid(7.0),
            ActivationSpec::power_sigmoid(5, 9.0), ActivationSpec::smooth_power_sigmoid(7, 11.0)};
  throw std::invalid_argument("unknown builtin problem '" + std::string(name) + "'");
}

}  // namespace tcpgds
