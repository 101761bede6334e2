#pragma once

#include <cmath>
#include <numbers>
#include <string_view>

namespace fdens {

enum class Kernel { gaussian, epanechnikov };

inline double kernel_value(Kernel k, double u) {
  if (k == Kernel::gaussian) return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
  return std::abs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

/// Roughness R(W) = integral of W squared.
inline double kernel_roughness(Kernel k) {
  if (k == Kernel::gaussian) return 1.0 / (2.0 * std::sqrt(std::numbers::pi));
  return 0.6;
}

/// Half-width of the kernel support in bandwidth units (gaussian: effectively unbounded).
inline double kernel_support(Kernel k) { return k == Kernel::gaussian ? 40.0 : 1.0; }

inline std::string_view kernel_name(Kernel k) { return k == Kernel::gaussian ? "gaussian" : "epanechnikov"; }

/// Throws InputError for unknown names.
Kernel parse_kernel(std::string_view name);

}  // namespace fdens
