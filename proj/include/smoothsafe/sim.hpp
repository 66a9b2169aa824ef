#pragma once

// Fixed-step RK4 simulation of the single integrator, double integrator and
// planar drone under a velocity-level safety design, plus trajectory metrics.

#include "smoothsafe/design.hpp"
#include "smoothsafe/model.hpp"

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace smoothsafe {

inline constexpr double kInvTol = 1e-6;

struct GainSet {
  double k = 1.0;        // nominal proportional gain
  double k_p = 1.0;      // double-integrator velocity tracking
  double k_v = 1.0;      // drone outer loop
  double k_theta = 2.0;  // drone attitude
  double k_omega = 2.0;  // drone attitude rate
  double mass = 1.0;
  double inertia = 0.1;
  double gravity = 9.81;

  void validate(std::string_view key = "gains") const;
};

struct Scenario {
  SystemKind system = SystemKind::SingleIntegrator;
  std::vector<Obstacle> obstacles;
  Eigen::VectorXd goal = Eigen::VectorXd::Zero(2);
  StateVec x0 = StateVec::Zero(2);
  GainSet gains;
  FilterConfig filter;
  double duration = 10.0;
  double dt = 1e-3;
  bool feedforward = false;
  // Replace the initial velocity (and drone attitude) by the values that put
  // the vehicle exactly on the filtered velocity field at t = 0.
  bool start_on_field = false;

  void validate() const;
  int state_dim() const;
  int control_dim() const;
  // Velocity-level design on the 2-D position.
  SafetyDesign design() const;
};

// Time-indexed simulation results. Per-step filter diagnostics refer to the
// obstacle with the smallest h.
struct TrajectoryLog {
  SystemKind system = SystemKind::SingleIntegrator;
  Eigen::VectorXd goal;
  double dt = 0.0;
  std::vector<double> t;
  std::vector<StateVec> x;
  std::vector<ControlVec> u;
  std::vector<std::vector<double>> h;  // one entry per obstacle
  std::vector<double> sigma;
  std::vector<double> gate_or_psi;
  std::vector<double> correction_norm;
  std::vector<double> tracking_err;  // |xdot - u*(x)|, NaN for the single integrator

  std::size_t size() const { return t.size(); }
  double min_h_at(std::size_t k) const;
};

struct Metrics {
  double min_h = 0.0;
  double goal_error_final = 0.0;
  double velocity_tracking_rms = 0.0;  // NaN when not applicable
  double control_rate_max = 0.0;
  int violations = 0;
};

using VectorField = std::function<StateVec(double, const StateVec&)>;

StateVec rk4_step(const VectorField& derivative, double t, const StateVec& x, double dt);

TrajectoryLog run_single_integrator(const Scenario& sc);
TrajectoryLog run_double_integrator(const Scenario& sc);
TrajectoryLog run_planar_drone(const Scenario& sc);
TrajectoryLog run_scenario(const Scenario& sc);

// Initial state actually simulated (differs from x0 when start_on_field).
StateVec resolved_initial_state(const Scenario& sc);

Metrics compute_metrics(const TrajectoryLog& log, double inv_tol = kInvTol);

struct Verdict {
  std::string name;
  bool applicable = false;
  bool pass = true;
  std::string detail;
};

// Forward invariance, set stability from an unsafe start, and perception
// freedom, each checked only where it applies.
std::vector<Verdict> evaluate_verdicts(const Scenario& sc, const TrajectoryLog& log, const Metrics& m,
                                       double inv_tol = kInvTol);

// Smallest sigma over the steps where h crosses the gate range delta.
// NaN when the trajectory never crosses it.
double gate_boundary_sigma_min(const TrajectoryLog& log, double delta);

// Index of the first logged step where the filter correction is nonzero, or
// -1 if it never activates.
long activation_index(const TrajectoryLog& log);

// Second difference of the control at activation, |(u_{k+1} - u_k) - (u_{k-1} - u_{k-2})| / dt^2
// with k the activation index: the sum of the two three-point stencils that
// contain the activation instant, so it does not depend on where inside the
// step the switch falls. Returns 0 when the filter never activates or
// activates within the first two steps.
double activation_second_difference(const TrajectoryLog& log);

}  // namespace smoothsafe
