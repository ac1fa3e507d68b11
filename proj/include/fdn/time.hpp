#pragma once

#include <cmath>
#include <cstdint>

namespace fdn {

/// Virtual time in integral milliseconds. All event timestamps are quantized
/// to this grid so that ordering never depends on floating-point rounding.
using SimTime = std::int64_t;

/// Seconds to milliseconds, rounding half up.
inline SimTime to_ms(double seconds) {
  return static_cast<SimTime>(std::floor(seconds * 1000.0 + 0.5));
}

inline double to_s(SimTime ms) { return static_cast<double>(ms) / 1000.0; }

}  // namespace fdn
