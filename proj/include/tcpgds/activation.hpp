#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tcpgds/matrix.hpp"

namespace tcpgds {

enum class ActivationFamily { linear, bipolar_sigmoid, power_sigmoid, smooth_power_sigmoid };

/// An odd, monotonically increasing scalar shaping function applied
/// elementwise to the residual inside the flow. Construct through the named
/// factories, which enforce the parameter ranges each family requires:
/// bipolar sigmoid gain > 2, power sigmoid gain >= 2 with odd exponent >= 3,
/// smooth power sigmoid gain > 2 with odd exponent >= 3.
struct ActivationSpec {
  ActivationFamily family = ActivationFamily::linear;
  int exponent = 0;   // odd power p, power families only
  double gain = 0.0;  // sigmoid gain q, sigmoid families only

  static ActivationSpec linear() { return {}; }

  static ActivationSpec bipolar_sigmoid(double gain) {
    if (!(gain > 2.0))
      throw std::invalid_argument("bipolar sigmoid requires gain q > 2");
    return {ActivationFamily::bipolar_sigmoid, 0, gain};
  }

  static ActivationSpec power_sigmoid(int exponent, double gain) {
    require_odd_power(exponent);
    if (!(gain >= 2.0))
      throw std::invalid_argument("power sigmoid requires gain q >= 2");
    return {ActivationFamily::power_sigmoid, exponent, gain};
  }

  static ActivationSpec smooth_power_sigmoid(int exponent, double gain) {
    require_odd_power(exponent);
    if (!(gain > 2.0))
      throw std::invalid_argument("smooth power sigmoid requires gain q > 2");
    return {ActivationFamily::smooth_power_sigmoid, exponent, gain};
  }

  /// Canonical config-grammar form, e.g. "lin", "bs:q=7", "ps:p=5,q=7".
  std::string label() const {
    std::ostringstream out;
    switch (family) {
      case ActivationFamily::linear:
        return "lin";
      case ActivationFamily::bipolar_sigmoid:
        out << "bs:q=" << format_gain();
        break;
      case ActivationFamily::power_sigmoid:
        out << "ps:p=" << exponent << ",q=" << format_gain();
        break;
      case ActivationFamily::smooth_power_sigmoid:
        out << "sps:p=" << exponent << ",q=" << format_gain();
        break;
    }
    return out.str();
  }

 private:
  static void require_odd_power(int exponent) {
    // Oddness is what makes x^p odd; the convergence argument needs it even
    // though the printed constraint is only p >= 3.
    if (exponent < 3 || exponent % 2 == 0)
      throw std::invalid_argument("power exponent p must be an odd integer >= 3");
  }

  std::string format_gain() const {
    std::ostringstream out;
    out << gain;
    return out.str();
  }
};

namespace detail {

// Odd integer power by repeated multiplication; exact sign symmetry.
inline double int_power(double x, int p) {
  double r = x;
  for (int i = 1; i < p; ++i) r *= x;
  return r;
}

// (1-exp(-q x))/(1+exp(-q x)) scaled so the value at x = 1 is exactly 1.
// Evaluated as tanh(q x / 2)/tanh(q / 2), which is algebraically identical
// and immune to exp overflow.
inline double scaled_sigmoid(double x, double gain) {
  return std::tanh(0.5 * gain * x) / std::tanh(0.5 * gain);
}

}  // namespace detail

inline double apply_scalar(const ActivationSpec& spec, double x) {
  switch (spec.family) {
    case ActivationFamily::linear:
      return x;
    case ActivationFamily::bipolar_sigmoid:
      return detail::scaled_sigmoid(x, spec.gain);
    case ActivationFamily::power_sigmoid:
      return std::abs(x) >= 1.0 ? detail::int_power(x, spec.exponent)
                                : detail::scaled_sigmoid(x, spec.gain);
    case ActivationFamily::smooth_power_sigmoid:
      return 0.5 * detail::int_power(x, spec.exponent) + detail::scaled_sigmoid(x, spec.gain);
  }
  throw std::logic_error("unknown activation family");
}

inline Vector apply_vector(const ActivationSpec& spec, std::span<const double> v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = apply_scalar(spec, v[i]);
  return out;
}

namespace detail {

inline double parse_number(std::string_view text, std::string_view what) {
  std::string buf(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(buf, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("activation: bad " + std::string(what) + " value '" + buf + "'");
  }
  if (used != buf.size())
    throw std::invalid_argument("activation: bad " + std::string(what) + " value '" + buf + "'");
  return value;
}

inline int parse_exponent(std::string_view text) {
  double value = parse_number(text, "p");
  int p = static_cast<int>(value);
  if (static_cast<double>(p) != value)
    throw std::invalid_argument("activation: exponent p must be an integer");
  return p;
}

}  // namespace detail

/// Parses the config grammar family[:key=value,...] with keys p and q,
/// e.g. "lin", "bs:q=5", "ps:p=3,q=5", "sps:p=3,q=7".
inline ActivationSpec parse_activation(std::string_view text) {
  std::string_view family = text;
  std::string_view params;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    family = text.substr(0, colon);
    params = text.substr(colon + 1);
  }

  bool have_p = false, have_q = false;
  int p = 0;
  double q = 0.0;
  std::string_view rest = params;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("activation: expected key=value, got '" + std::string(item) + "'");
    std::string_view key = item.substr(0, eq);
    std::string_view value = item.substr(eq + 1);
    if (key == "p" && !have_p) {
      p = detail::parse_exponent(value);
      have_p = true;
    } else if (key == "q" && !have_q) {
      q = detail::parse_number(value, "q");
      have_q = true;
    } else {
      throw std::invalid_argument("activation: unknown or repeated key '" + std::string(key) + "'");
    }
  }

  auto require = [&](bool need_p, bool need_q) {
    if (need_p != have_p || need_q != have_q)
      throw std::invalid_argument("activation '" + std::string(family) +
                                  "': wrong parameter set (expected " +
                                  (need_p ? std::string("p") + (need_q ? ",q" : "") : std::string(need_q ? "q" : "none")) +
                                  ")");
  };

  if (family == "lin") {
    require(false, false);
    return ActivationSpec::linear();
  }
  if (family == "bs") {
    require(false, true);
    return ActivationSpec::bipolar_sigmoid(q);
  }
  if (family == "ps") {
    require(true, true);
    return ActivationSpec::power_sigmoid(p, q);
  }
  if (family == "sps") {
    require(true, true);
    return ActivationSpec::smooth_power_sigmoid(p, q);
  }
  throw std::invalid_argument("activation: unknown family '" + std::string(family) + "'");
}

/// Parses a semicolon-separated activation list, e.g. "lin;bs:q=7;ps:p=5,q=7".
inline std::vector<ActivationSpec> parse_activation_list(std::string_view text) {
  std::vector<ActivationSpec> specs;
  std::string_view rest = text;
  while (!rest.empty()) {
    auto semi = rest.find(';');
    std::string_view item = rest.substr(0, semi);
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    if (!item.empty()) specs.push_back(parse_activation(item));
  }
  if (specs.empty()) throw std::invalid_argument("activation list is empty");
  return specs;
}

}  // namespace tcpgds
