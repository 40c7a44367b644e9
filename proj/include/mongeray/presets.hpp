#pragma once

#include <optional>
#include <string>

#include "mongeray/densities.hpp"
#include "mongeray/errors.hpp"
#include "mongeray/geometry.hpp"

namespace mongeray {

struct Preset {
  std::string name;
  RayProfile profile;
  bool reflected = false;
};

namespace detail {
inline double parse_positive(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("preset: cannot parse " + what + " '" + text + "'");
  }
  if (used != text.size() || !(v > 0.0)) throw DomainError("preset: " + what + " must be a positive number");
  return v;
}
}  // namespace detail

/// Recognised names:
///   power:<s>        omega = a^s/2 on Delta
///   exponential      omega = exp(1 - 1/a)/2 on Delta
///   cor2.2           power s = 1/2, reflected
///   cor2.3           power s = 1 on Delta
///   cor2.4           power s = 1, reflected
///   cor2.5:<alpha>   power s = 2/alpha, reflected
///   rem2.7           exponential on Delta
inline Preset parse_preset(const std::string& name) {
  if (name == "cor2.2") return {name, RayProfile::power(0.5), true};
  if (name == "cor2.3") return {name, RayProfile::power(1.0), false};
  if (name == "cor2.4") return {name, RayProfile::power(1.0), true};
  if (name == "rem2.7" || name == "exponential") return {name, RayProfile::exponential(), false};
  if (name.rfind("cor2.5:", 0) == 0) {
    const double alpha = detail::parse_positive(name.substr(7), "alpha");
    return {name, RayProfile::power(2.0 / alpha), true};
  }
  if (name.rfind("power:", 0) == 0) {
    const double s = detail::parse_positive(name.substr(6), "s");
    return {name, RayProfile::power(s), false};
  }
  throw DomainError("unknown preset '" + name + "'");
}

inline DensityPair make_pair(const Preset& preset, std::optional<double> c = std::nullopt) {
  auto pair = DensityPair::make(preset.profile, c);
  return preset.reflected ? pair.reflected_pair() : pair;
}

}  // namespace mongeray
