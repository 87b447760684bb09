#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "spikeloop/errors.hpp"

namespace spikeloop::lif {

/// LTI triple (A, B, C) of a single-input single-output plant:
/// xdot = A x + B u, y = C x. A is stored row-major.
struct PlantParams {
  std::size_t n = 0;
  std::vector<double> A;  // n*n, row-major
  std::vector<double> B;  // n
  std::vector<double> C;  // n (single output row)

  PlantParams(std::size_t n_x, std::vector<double> a, std::vector<double> b,
              std::vector<double> c)
      : n(n_x), A(std::move(a)), B(std::move(b)), C(std::move(c)) {
    if (n < 1) throw ConfigError("plant: n_x must be >= 1");
    if (A.size() != n * n) throw ConfigError("plant: A must be n_x x n_x");
    if (B.size() != n) throw ConfigError("plant: B must have length n_x");
    if (C.size() != n) throw ConfigError("plant: C must have length n_x");
    for (double v : A)
      if (!std::isfinite(v)) throw ConfigError("plant: A has non-finite entry");
    for (double v : B)
      if (!std::isfinite(v)) throw ConfigError("plant: B has non-finite entry");
    for (double v : C)
      if (!std::isfinite(v)) throw ConfigError("plant: C has non-finite entry");
  }

  static PlantParams scalar(double a, double b = 1.0, double c = 1.0) {
    return PlantParams(1, {a}, {b}, {c});
  }

  double output(std::span<const double> x) const {
    double y = 0.0;
    for (std::size_t i = 0; i < n; ++i) y += C[i] * x[i];
    return y;
  }

  void state_derivative(std::span<const double> x, std::span<double> dx) const {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += A[i * n + k] * x[k];
      dx[i] = acc;
    }
  }
};

/// Per-neuron spike amplitudes, leak rates and firing thresholds
/// (asymmetric pair; use symmetric() when both neurons match).
struct NeuronParams {
  double alpha1, alpha2;
  double mu1, mu2;
  double delta1, delta2;

  NeuronParams(double a1, double a2, double m1, double m2, double d1, double d2)
      : alpha1(a1), alpha2(a2), mu1(m1), mu2(m2), delta1(d1), delta2(d2) {
    auto chk = [](bool ok, const char* msg) {
      if (!ok) throw ConfigError(msg);
    };
    chk(std::isfinite(a1) && a1 > 0.0, "neurons: alpha1 must be > 0");
    chk(std::isfinite(a2) && a2 > 0.0, "neurons: alpha2 must be > 0");
    chk(std::isfinite(m1) && m1 >= 0.0, "neurons: mu1 must be >= 0");
    chk(std::isfinite(m2) && m2 >= 0.0, "neurons: mu2 must be >= 0");
    chk(std::isfinite(d1) && d1 > 0.0, "neurons: delta1 must be > 0");
    chk(std::isfinite(d2) && d2 > 0.0, "neurons: delta2 must be > 0");
  }

  static NeuronParams symmetric(double alpha, double mu, double delta) {
    return NeuronParams(alpha, alpha, mu, mu, delta, delta);
  }
};

}  // namespace spikeloop::lif
