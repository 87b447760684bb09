#pragma once

#include <compare>
#include <cstdint>

namespace spikeloop::hybrid {

/// A point (t, j) of a hybrid time domain: continuous time plus jump count.
/// Ordering is lexicographic; a jump advances j while t stays fixed.
struct HybridTime {
  double t = 0.0;
  std::int64_t j = 0;

  friend auto operator<=>(const HybridTime&, const HybridTime&) = default;
};

}  // namespace spikeloop::hybrid
