#include "smoothsafe/scalar_funcs.hpp"

#include "smoothsafe/errors.hpp"

#include <cmath>

namespace smoothsafe {

namespace {

std::string join_key(std::string_view prefix, std::string_view field) {
  std::string key(prefix);
  key += '.';
  key += field;
  return key;
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::string to_string(TransitionShape shape) {
  switch (shape) {
    case TransitionShape::Cubic:
      return "Cubic";
    case TransitionShape::Quintic:
      return "Quintic";
  }
  return "Cubic";
}

TransitionShape parse_transition_shape(std::string_view name) {
  if (name == "Cubic") return TransitionShape::Cubic;
  if (name == "Quintic") return TransitionShape::Quintic;
  throw ConfigError("shape", "unknown transition shape '" + std::string(name) +
                                 "' (expected Cubic or Quintic)");
}

void TransitionParams::validate(std::string_view key) const {
  if (!positive_finite(tau)) throw ConfigError(join_key(key, "tau"), "TransitionParams requires tau > 0");
}

void GateParams::validate(std::string_view key) const {
  if (!positive_finite(epsilon))
    throw ConfigError(join_key(key, "epsilon"), "GateParams requires 0 < epsilon < delta");
  if (!std::isfinite(delta) || !(delta > epsilon))
    throw ConfigError(join_key(key, "delta"), "GateParams requires 0 < epsilon < delta");
}

void ClassK::validate(std::string_view key) const {
  if (!positive_finite(alpha0)) throw ConfigError(join_key(key, "alpha0"), "ClassK requires alpha0 > 0");
}

void PenaltyParams::validate(std::string_view key) const {
  if (!positive_finite(delta)) throw ConfigError(join_key(key, "delta"), "PenaltyParams requires delta > 0");
  if (!positive_finite(mu)) throw ConfigError(join_key(key, "mu"), "PenaltyParams requires mu > 0");
  if (!positive_finite(psi_max))
    throw ConfigError(join_key(key, "psi_max"), "PenaltyParams requires psi_max > 0");
}

double gate_eval(double h, const GateParams& p) { return gate(h, p); }

double transition_eval(double z, const TransitionParams& p) { return transition(z, p); }

double transition_deriv(double z, const TransitionParams& p) {
  if (z <= 0.0 || z >= p.tau) return 0.0;
  const double s = z / p.tau;
  if (p.shape == TransitionShape::Cubic) return -6.0 * s * (1.0 - s) / p.tau;
  return -30.0 * s * s * (1.0 - s) * (1.0 - s) / p.tau;
}

double classk_eval(double h, const ClassK& k) { return classk(h, k); }

double psi_eval(double h, double sigma, double a_wnorm, const PenaltyParams& p,
                const TransitionParams& tau_h, const TransitionParams& tau_sigma) {
  return psi(h, sigma, a_wnorm, p, tau_h, tau_sigma);
}

double psi_eval(double h, double sigma, double a_wnorm, const PenaltyParams& p) {
  return psi(h, sigma, a_wnorm, p);
}

}  // namespace smoothsafe
