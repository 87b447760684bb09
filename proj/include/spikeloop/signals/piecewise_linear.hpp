#pragma once

// Seeded piecewise-linear random signal: knot values drawn uniformly from
// [-amplitude, +amplitude] on a fixed time grid, linearly interpolated in
// between. Knots come from a SplitMix64 stream, so a fixed seed gives a
// bit-identical knot sequence on every platform.

#include <cmath>
#include <cstdint>
#include <vector>

#include "spikeloop/errors.hpp"

namespace spikeloop::signals {

/// SplitMix64 (Steele, Lea & Flood). Used for knot generation and for
/// deriving independent per-signal stream seeds from one base seed.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

class PiecewiseLinearSignal {
 public:
  PiecewiseLinearSignal(double grid_step, double amplitude, std::uint64_t seed)
      : grid_step_(grid_step), amplitude_(amplitude), seed_(seed), rng_{seed} {
    if (!(grid_step > 0.0)) throw ConfigError("signal: grid_step must be > 0");
    if (amplitude < 0.0) throw ConfigError("signal: amplitude must be >= 0");
  }

  /// Stream seed for sub-signal `stream` of a scenario seeded with `base`,
  /// so that distinct signals draw from decorrelated SplitMix64 streams.
  static std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t stream) {
    SplitMix64 g{base ^ (0x9E3779B97F4A7C15ull * (stream + 1))};
    return g.next();
  }

  double grid_step() const { return grid_step_; }
  double amplitude() const { return amplitude_; }
  std::uint64_t seed() const { return seed_; }

  /// Linear interpolation between the knots bracketing t; exact at knots.
  double sample(double t) const {
    if (t < 0.0) throw PreconditionError("signal: sample time must be >= 0");
    auto k = static_cast<std::size_t>(t / grid_step_);
    // t computed as (k+1)*grid_step can truncate to k; snap to the knot.
    if (t == grid_step_ * static_cast<double>(k + 1)) ++k;
    ensure_knots(k + 1);
    const double t_k = grid_step_ * static_cast<double>(k);
    double theta = (t - t_k) / grid_step_;
    if (theta < 0.0) theta = 0.0;
    if (theta > 1.0) theta = 1.0;
    return (1.0 - theta) * knots_[k] + theta * knots_[k + 1];
  }

  /// Knot value v_k (materializing the stream up to k).
  double knot(std::size_t k) const {
    ensure_knots(k);
    return knots_[k];
  }

 private:
  void ensure_knots(std::size_t k) const {
    while (knots_.size() <= k) {
      const double u = rng_.next_unit();
      knots_.push_back(amplitude_ * (2.0 * u - 1.0));
    }
  }

  double grid_step_;
  double amplitude_;
  std::uint64_t seed_;
  mutable SplitMix64 rng_;
  mutable std::vector<double> knots_;
};

}  // namespace spikeloop::signals
