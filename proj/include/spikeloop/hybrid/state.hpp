#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace spikeloop::hybrid {

/// Combined state q = (x, xi1, xi2): plant state plus the two membrane
/// potentials. Also used as the derivative container by the integrator.
struct HybridState {
  std::vector<double> x;
  double xi1 = 0.0;
  double xi2 = 0.0;

  HybridState() = default;
  HybridState(std::vector<double> plant_state, double xi1_init, double xi2_init)
      : x(std::move(plant_state)), xi1(xi1_init), xi2(xi2_init) {}

  static HybridState scalar(double x0, double xi1_init = 0.0, double xi2_init = 0.0) {
    return HybridState({x0}, xi1_init, xi2_init);
  }

  std::size_t dim() const { return x.size(); }

  bool finite() const {
    if (!std::isfinite(xi1) || !std::isfinite(xi2)) return false;
    for (double v : x)
      if (!std::isfinite(v)) return false;
    return true;
  }

  std::vector<double> flattened() const {
    std::vector<double> out = x;
    out.push_back(xi1);
    out.push_back(xi2);
    return out;
  }

  friend bool operator==(const HybridState&, const HybridState&) = default;
};

namespace detail {

// dst += c * k, componentwise; dims must already agree.
inline void add_scaled(HybridState& dst, const HybridState& k, double c) {
  for (std::size_t i = 0; i < dst.x.size(); ++i) dst.x[i] += c * k.x[i];
  dst.xi1 += c * k.xi1;
  dst.xi2 += c * k.xi2;
}

}  // namespace detail

}  // namespace spikeloop::hybrid
