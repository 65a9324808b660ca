#pragma once

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfloc/grid.hpp"

namespace tfloc::testing {

inline constexpr double kPi = std::numbers::pi;

/// Symmetric signal grid [-half, half) with n = 2*half/dt samples.
inline SignalGrid symmetric_grid(double half, double dt) {
  return SignalGrid(static_cast<std::size_t>(std::lround(2.0 * half / dt)), dt, -half);
}

}  // namespace tfloc::testing
