#pragma once

// Practical-stability design for the scalar loop (n_x = 1, a > 0). Given a
// contraction budget rho in (0,1), the certified region of attraction is
//
//   psi = (rho + 1) / ((rho + 1)^2 - 1) * alpha,
//
// thresholds up to delta_max = rho alpha / (mu + a) are admissible, the
// state obeys |x(t,j)| <= gamma^j |x(0,0)| + 2 alpha from |x(0,0)| <=
// sigma psi with gamma = sqrt(1 - (1-sigma)(rho+1)^2), and consecutive
// spikes are separated by at least tau = delta / (psi + 2 alpha).

#include <cmath>
#include <sstream>
#include <string>

#include "spikeloop/errors.hpp"

namespace spikeloop::analysis {

/// Scalar plant restricted to the certified class: pole a > 0 and positive
/// gains b, c (certification rescales them away, see normalized_*).
struct ScalarPlant {
  double a;
  double b = 1.0;
  double c = 1.0;

  ScalarPlant(double pole, double input_gain = 1.0, double output_gain = 1.0)
      : a(pole), b(input_gain), c(output_gain) {
    if (!(a > 0.0)) throw ConfigError("scalar plant: a must be > 0 for certification");
    if (!(b > 0.0)) throw ConfigError("scalar plant: b must be > 0");
    if (!(c > 0.0)) throw ConfigError("scalar plant: c must be > 0");
  }

  /// Spike amplitude of the equivalent b = c = 1 loop (state z = c x).
  double normalized_amplitude(double alpha) const { return b * c * alpha; }

  /// State scale between the raw and the normalized loop.
  double state_scale() const { return c; }
};

struct StabilityCertificate {
  // design inputs
  double a = 0.0;
  double alpha = 0.0;
  double mu = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
  double delta = 0.0;
  // derived quantities
  double psi = 0.0;        // region-of-attraction radius
  double delta_max = 0.0;  // largest admissible threshold rho*alpha/(mu+a)
  double gamma = 0.0;      // per-jump contraction factor
  double upsilon = 0.0;    // state bound psi + 2*alpha
  double tau = 0.0;        // guaranteed dwell-time delta/upsilon
};

/// Region-of-attraction radius as a function of rho (the forward map that
/// solve_rho_for_roa inverts).
inline double roa_radius(double rho, double alpha) {
  const double u = rho + 1.0;
  return u / (u * u - 1.0) * alpha;
}

/// Lower admissible bound for sigma given rho.
inline double sigma_lower_bound(double rho) {
  const double u2 = (rho + 1.0) * (rho + 1.0);
  return (u2 - 1.0) / u2;
}

namespace detail {

// Feasibility comparisons carry a relative slack so that boundary choices
// like delta = rho*alpha/(mu+a) survive floating-point evaluation.
inline constexpr double kFeasibilityRelTol = 1e-12;

inline bool leq_with_slack(double lhs, double rhs) {
  return lhs <= rhs + kFeasibilityRelTol * std::max(std::abs(lhs), std::abs(rhs));
}

[[noreturn]] inline void design_fail(const std::string& inequality, double value) {
  std::ostringstream msg;
  msg << "design constraint violated: " << inequality << " (got " << value << ")";
  throw DesignError(msg.str(), inequality);
}

}  // namespace detail

/// Checks every parameter constraint and assembles the certificate by
/// direct substitution. Throws DesignError naming the violated inequality.
inline StabilityCertificate design_certificate(double a, double alpha, double mu, double rho,
                                               double sigma, double delta) {
  if (!(a > 0.0)) detail::design_fail("a > 0", a);
  if (!(alpha > 0.0)) detail::design_fail("alpha > 0", alpha);
  if (!(mu >= 0.0)) detail::design_fail("mu >= 0", mu);
  if (!(rho > 0.0 && rho < 1.0)) detail::design_fail("rho in (0,1)", rho);
  const double sigma_min = sigma_lower_bound(rho);
  if (!(sigma < 1.0) || !detail::leq_with_slack(sigma_min, sigma))
    detail::design_fail("sigma in [((rho+1)^2-1)/(rho+1)^2, 1)", sigma);
  const double delta_max = rho * alpha / (mu + a);
  if (!(delta > 0.0) || !detail::leq_with_slack(delta, delta_max))
    detail::design_fail("delta in (0, rho*alpha/(mu+a)]", delta);

  StabilityCertificate cert;
  cert.a = a;
  cert.alpha = alpha;
  cert.mu = mu;
  cert.rho = rho;
  cert.sigma = sigma;
  cert.delta = delta;
  cert.psi = roa_radius(rho, alpha);
  cert.delta_max = delta_max;
  const double u2 = (rho + 1.0) * (rho + 1.0);
  cert.gamma = std::sqrt(1.0 - (1.0 - sigma) * u2);
  cert.upsilon = cert.psi + 2.0 * alpha;
  cert.tau = delta / cert.upsilon;
  return cert;
}

/// Inverts the region-of-attraction formula: the rho in (0,1) with
/// roa_radius(rho, alpha) = psi_desired. Feasible iff psi_desired exceeds
/// the rho -> 1 limit 2*alpha/3.
inline double solve_rho_for_roa(double alpha, double psi_desired) {
  if (!(alpha > 0.0)) throw PreconditionError("solve_rho_for_roa: alpha must be > 0");
  if (!(psi_desired > 0.0)) throw PreconditionError("solve_rho_for_roa: psi must be > 0");

  // psi u^2 - alpha u - psi = 0 with u = rho + 1, taking the positive root.
  const double u =
      (alpha + std::sqrt(alpha * alpha + 4.0 * psi_desired * psi_desired)) / (2.0 * psi_desired);
  const double rho = u - 1.0;
  if (!(rho > 0.0 && rho < 1.0)) {
    std::ostringstream msg;
    msg << "no rho in (0,1) reaches psi = " << psi_desired
        << "; feasibility requires psi > 2*alpha/3 = " << (2.0 * alpha / 3.0);
    throw DesignError(msg.str(), "psi > 2*alpha/3");
  }
  return rho;
}

}  // namespace spikeloop::analysis
