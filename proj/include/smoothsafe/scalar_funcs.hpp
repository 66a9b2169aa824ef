#pragma once

// Smooth scalar maps used by the safety filters: the transition window,
// perception gate, class-K rate, and the penalty weight.
//
// Every map is templated on the scalar type so the same code path runs on
// doubles and on the forward-mode types in dual.hpp.

#include <string>
#include <string_view>

namespace smoothsafe {

enum class TransitionShape {
  Cubic,   // 1 - 3s^2 + 2s^3, C1 at the joins
  Quintic  // 1 - 10s^3 + 15s^4 - 6s^5, C2 at the joins
};

std::string to_string(TransitionShape shape);
TransitionShape parse_transition_shape(std::string_view name);

struct TransitionParams {
  double tau = 1.0;
  TransitionShape shape = TransitionShape::Cubic;

  void validate(std::string_view key = "transition") const;
};

// Perception gate: 1 for h <= epsilon, 0 for h >= delta.
struct GateParams {
  double epsilon = 0.2;
  double delta = 1.0;
  TransitionShape shape = TransitionShape::Cubic;

  void validate(std::string_view key = "gate") const;
};

enum class ClassKForm { Linear };

struct ClassK {
  double alpha0 = 1.0;
  ClassKForm form = ClassKForm::Linear;

  void validate(std::string_view key = "classk") const;
};

// Penalty weight parameters. The transition widths default to (delta, mu).
struct PenaltyParams {
  double delta = 1.0;
  double mu = 1.0;
  double psi_max = 1e12;
  TransitionShape shape = TransitionShape::Cubic;

  void validate(std::string_view key = "penalty") const;

  TransitionParams h_transition() const { return {delta, shape}; }
  TransitionParams sigma_transition() const { return {mu, shape}; }
};

template <class T>
T transition(const T& z, const TransitionParams& p) {
  if (z <= 0.0) return T(1.0);
  if (z >= p.tau) return T(0.0);
  const T s = z / p.tau;
  if (p.shape == TransitionShape::Cubic) return 1.0 - s * s * (3.0 - 2.0 * s);
  return 1.0 - s * s * s * (10.0 - s * (15.0 - 6.0 * s));
}

template <class T>
T gate(const T& h, const GateParams& p) {
  return transition(T(h - p.epsilon), TransitionParams{p.delta - p.epsilon, p.shape});
}

template <class T>
T classk(const T& h, const ClassK& k) {
  // Linear is the only form; the switch keeps new forms from compiling silently.
  switch (k.form) {
    case ClassKForm::Linear:
      break;
  }
  return k.alpha0 * h;
}

// Product phi_delta(h) * phi_mu(sigma).
template <class T>
T penalty_blend(const T& h, const T& sigma, const TransitionParams& tau_h,
                const TransitionParams& tau_sigma) {
  return transition(h, tau_h) * transition(sigma, tau_sigma);
}

// psi = b / (|a|_{W^-1} (1 - b)) with b the blend; saturates at psi_max.
template <class T>
T psi(const T& h, const T& sigma, const T& a_wnorm, const PenaltyParams& p,
      const TransitionParams& tau_h, const TransitionParams& tau_sigma) {
  const T blend = penalty_blend(h, sigma, tau_h, tau_sigma);
  if (blend <= 0.0) return T(0.0);
  const T gap = 1.0 - blend;
  if (gap <= 0.0) return T(p.psi_max);
  const T out = blend / (a_wnorm * gap);
  if (!(out < p.psi_max)) return T(p.psi_max);
  return out;
}

template <class T>
T psi(const T& h, const T& sigma, const T& a_wnorm, const PenaltyParams& p) {
  return psi(h, sigma, a_wnorm, p, p.h_transition(), p.sigma_transition());
}

double gate_eval(double h, const GateParams& p);
double transition_eval(double z, const TransitionParams& p);
double transition_deriv(double z, const TransitionParams& p);
double classk_eval(double h, const ClassK& k);
double psi_eval(double h, double sigma, double a_wnorm, const PenaltyParams& p,
                const TransitionParams& tau_h, const TransitionParams& tau_sigma);
double psi_eval(double h, double sigma, double a_wnorm, const PenaltyParams& p);

}  // namespace smoothsafe
