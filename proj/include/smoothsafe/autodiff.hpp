#pragma once

// Forward-mode derivatives of the smooth filtered command u*(x):
// Jacobians, directional feedforward terms, and the attitude reference of the
// planar drone (which needs second derivatives of u*).

#include "smoothsafe/design.hpp"
#include "smoothsafe/dual.hpp"

#include <Eigen/Core>

#include <optional>

namespace smoothsafe {

inline constexpr double kSnapTol = 1e-9;

struct JacobianResult {
  Eigen::MatrixXd matrix;  // m x n, d u* / d x
  bool valid = true;       // false within snap_tol of a transition join
};

// True when some transition argument (h or sigma of any obstacle) sits within
// snap_tol of a join, where one-sided second derivatives differ.
bool near_transition_join(const SafetyDesign& design, const StateVec& x, double snap_tol = kSnapTol);

JacobianResult filter_jacobian(const SafetyDesign& design, const StateVec& x, double snap_tol = kSnapTol);

// Filter output at x together with (d u*/d x) dir, from one directional pass.
struct DirectionalEval {
  FilterOutput output;
  ControlVec derivative;
};
DirectionalEval evaluate_directional(const SafetyDesign& design, const StateVec& x, const StateVec& dir);

// (d u*/d x) xdot in one directional pass.
ControlVec feedforward_term(const SafetyDesign& design, const StateVec& x, const StateVec& xdot);

// theta_d = atan2(-a_x, a_y + g).
double desired_attitude(const Eigen::Vector2d& a_d, double gravity);

// Outer-loop reference for the planar drone at position p and velocity v.
struct DroneReference {
  FilterOutput filter;         // filtered velocity command and diagnostics
  Eigen::Vector2d accel;       // a_d
  double thrust_accel = 0.0;   // |a_d + g e_y|, i.e. F / m
  double theta = 0.0;          // theta_d
  double theta_rate = 0.0;     // theta_d dot (0 without feedforward)
  bool valid = true;
};

// a_d = -k_v (v - u*(p)) [+ (d u*/d p) v]. With feedforward, theta_d dot is the
// time derivative of theta_d along p' = v, v' = accel. When `attitude` is given,
// accel is what the thrust |a_d + g e_y| realizes at that attitude; otherwise
// it is a_d itself (the vehicle assumed on its attitude reference).
DroneReference drone_reference(const SafetyDesign& design, double k_v, double gravity,
                               const Eigen::Vector2d& p, const Eigen::Vector2d& v, bool feedforward,
                               std::optional<double> attitude = std::nullopt);

double desired_attitude_rate(const SafetyDesign& design, double k_v, double gravity,
                             const Eigen::Vector2d& p, const Eigen::Vector2d& v,
                             std::optional<double> attitude = std::nullopt);

}  // namespace smoothsafe
