#include "smoothsafe/sim.hpp"

#include "smoothsafe/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace smoothsafe {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_positive(double v, const std::string& key) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be a positive finite number");
}

double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

// Everything the integrator needs from one evaluation of the closed loop.
struct StageEval {
  StateVec xdot;
  ControlVec u;
  FilterOutput filter;
  double tracking_err = kNaN;
};

using Plant = std::function<StageEval(double, const StateVec&)>;

TrajectoryLog integrate(const Scenario& sc, const SafetyDesign& design, const StateVec& x0, const Plant& plant) {
  const auto steps = static_cast<std::size_t>(std::llround(sc.duration / sc.dt));
  TrajectoryLog log;
  log.system = sc.system;
  log.goal = sc.goal;
  log.dt = sc.dt;
  log.t.reserve(steps + 1);
  log.x.reserve(steps + 1);

  StateVec x = x0;
  double t = 0.0;
  const VectorField field = [&](double ts, const StateVec& xs) { return plant(ts, xs).xdot; };
  for (std::size_t k = 0; k <= steps; ++k) {
    t = static_cast<double>(k) * sc.dt;
    try {
      const StageEval e = plant(t, x);
      log.t.push_back(t);
      log.x.push_back(x);
      log.u.push_back(e.u);
      log.h.push_back(design.barrier_values(x.head(2)));
      log.sigma.push_back(e.filter.sigma);
      log.gate_or_psi.push_back(e.filter.gate_or_psi);
      log.correction_norm.push_back(e.filter.correction.norm());
      log.tracking_err.push_back(e.tracking_err);
      if (k < steps) x = rk4_step(field, t, x, sc.dt);
    } catch (const ConfigError&) {
      throw;
    } catch (const SimulationError&) {
      throw;
    } catch (const std::exception& ex) {
      throw SimulationError(t, ex.what());
    }
  }
  return log;
}

}  // namespace

void GainSet::validate(std::string_view key) const {
  const std::string k(key);
  require_positive(this->k, k + ".k");
  require_positive(k_p, k + ".k_p");
  require_positive(k_v, k + ".k_v");
  require_positive(k_theta, k + ".k_theta");
  require_positive(k_omega, k + ".k_omega");
  require_positive(mass, k + ".mass");
  require_positive(inertia, k + ".inertia");
  require_positive(gravity, k + ".gravity");
}

int Scenario::state_dim() const {
  switch (system) {
    case SystemKind::SingleIntegrator:
      return 2;
    case SystemKind::DoubleIntegrator:
      return 4;
    case SystemKind::PlanarDrone:
      return 6;
    case SystemKind::GenericAffine:
      break;
  }
  throw ConfigError("system", "GenericAffine systems cannot be simulated from a scenario");
}

int Scenario::control_dim() const { return 2; }

void Scenario::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "dt must be > 0");
  if (!(duration >= dt) || !std::isfinite(duration)) throw ConfigError("duration", "duration must be >= dt");
  if (x0.size() != state_dim())
    throw ConfigError("x0", "x0 has " + std::to_string(x0.size()) + " entries, " + to_string(system) +
                                " needs " + std::to_string(state_dim()));
  if (!x0.allFinite()) throw ConfigError("x0", "x0 must be finite");
  if (goal.size() != 2 || !goal.allFinite()) throw ConfigError("goal", "goal must be a finite 2-vector");
  gains.validate("gains");
  filter.validate("filter");
  if (filter.weight.dim() != 2) throw ConfigError("filter.weight", "W must be 2x2 for a planar velocity command");
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const std::string key = "obstacles." + std::to_string(i);
    obstacles[i].validate(key);
    if (obstacles[i].center.size() != 2) throw ConfigError(key + ".center", "center must be a 2-vector");
  }
  if (obstacles.size() > 1 && !is_smooth(filter.kind))
    throw ConfigError("filter.kind", "QP filters support a single obstacle; use a penalty kind for several");
  if (feedforward) {
    if (system == SystemKind::SingleIntegrator)
      throw ConfigError("feedforward", "feedforward applies to DoubleIntegrator and PlanarDrone only");
    if (!is_smooth(filter.kind))
      throw ConfigError("feedforward", "feedforward requires a smooth filter (Penalty or StabilizedPenalty), got " +
                                           to_string(filter.kind));
  }
}

SafetyDesign Scenario::design() const {
  SafetyDesign d;
  d.system = ControlAffineSystem::single_integrator(2);
  for (const Obstacle& o : obstacles) d.barriers.push_back(Barrier{o});
  d.nominal = ProportionalNominal{goal, gains.k};
  d.filter = filter;
  return d;
}

double TrajectoryLog::min_h_at(std::size_t k) const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : h[k]) m = std::min(m, v);
  return m;
}

StateVec rk4_step(const VectorField& derivative, double t, const StateVec& x, double dt) {
  const StateVec k1 = derivative(t, x);
  const StateVec k2 = derivative(t + 0.5 * dt, x + 0.5 * dt * k1);
  const StateVec k3 = derivative(t + 0.5 * dt, x + 0.5 * dt * k2);
  const StateVec k4 = derivative(t + dt, x + dt * k3);
  StateVec out = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite()) throw NonFiniteState("RK4 step produced a non-finite state");
  return out;
}

StateVec resolved_initial_state(const Scenario& sc) {
  StateVec x = sc.x0;
  if (!sc.start_on_field || sc.system == SystemKind::SingleIntegrator) return x;
  const SafetyDesign design = sc.design();
  const Eigen::Vector2d p = x.head(2);
  if (sc.system == SystemKind::DoubleIntegrator) {
    x.segment(2, 2) = design.command(p);
    return x;
  }
  x.segment(2, 2) = design.command(p);
  const DroneReference ref =
      drone_reference(design, sc.gains.k_v, sc.gains.gravity, p, x.segment(2, 2), sc.feedforward);
  x[4] = ref.theta;
  x[5] = ref.theta_rate;
  return x;
}

TrajectoryLog run_single_integrator(const Scenario& sc) {
  if (sc.system != SystemKind::SingleIntegrator) throw ConfigError("system", "expected SingleIntegrator");
  sc.validate();
  const SafetyDesign design = sc.design();
  const Plant plant = [&](double, const StateVec& x) {
    StageEval e;
    e.filter = design.evaluate(x);
    e.u = e.filter.u_star;
    e.xdot = e.u;
    return e;
  };
  return integrate(sc, design, resolved_initial_state(sc), plant);
}

TrajectoryLog run_double_integrator(const Scenario& sc) {
  if (sc.system != SystemKind::DoubleIntegrator) throw ConfigError("system", "expected DoubleIntegrator");
  sc.validate();
  const SafetyDesign design = sc.design();
  const ControlAffineSystem sys = ControlAffineSystem::double_integrator(2);
  const double k_p = sc.gains.k_p;
  const Plant plant = [&](double, const StateVec& x) {
    const StateVec p = x.head(2);
    const StateVec v = x.segment(2, 2);
    StageEval e;
    ControlVec ff = ControlVec::Zero(2);
    if (sc.feedforward) {
      DirectionalEval d = evaluate_directional(design, p, v);
      e.filter = std::move(d.output);
      ff = d.derivative;
    } else {
      e.filter = design.evaluate(p);
    }
    e.u = -k_p * (v - e.filter.u_star) + ff;
    e.xdot = sys.drift<double>(x) + sys.input_map<double>(x) * e.u;
    e.tracking_err = (v - e.filter.u_star).norm();
    return e;
  };
  return integrate(sc, design, resolved_initial_state(sc), plant);
}

TrajectoryLog run_planar_drone(const Scenario& sc) {
  if (sc.system != SystemKind::PlanarDrone) throw ConfigError("system", "expected PlanarDrone");
  sc.validate();
  const SafetyDesign design = sc.design();
  const GainSet& g = sc.gains;
  const ControlAffineSystem sys = ControlAffineSystem::planar_drone(g.mass, g.inertia, g.gravity);
  // theta_d dot needs second derivatives of u*, which jump at transition
  // joins; there the last value from a regular point is reused.
  double held_rate = 0.0;
  const Plant plant = [&](double, const StateVec& x) {
    const Eigen::Vector2d p = x.head(2);
    const Eigen::Vector2d v = x.segment(2, 2);
    const DroneReference ref = drone_reference(design, g.k_v, g.gravity, p, v, sc.feedforward, x[4]);
    if (ref.valid) held_rate = ref.theta_rate;
    const double rate = sc.feedforward ? held_rate : 0.0;
    StageEval e;
    e.filter = ref.filter;
    e.u.resize(2);
    e.u[0] = g.mass * ref.thrust_accel;
    e.u[1] = -g.inertia * (g.k_theta * wrap_angle(x[4] - ref.theta) + g.k_omega * (x[5] - rate));
    e.xdot = sys.drift<double>(x) + sys.input_map<double>(x) * e.u;
    e.tracking_err = (v - e.filter.u_star).norm();
    return e;
  };
  return integrate(sc, design, resolved_initial_state(sc), plant);
}

TrajectoryLog run_scenario(const Scenario& sc) {
  switch (sc.system) {
    case SystemKind::SingleIntegrator:
      return run_single_integrator(sc);
    case SystemKind::DoubleIntegrator:
      return run_double_integrator(sc);
    case SystemKind::PlanarDrone:
      return run_planar_drone(sc);
    case SystemKind::GenericAffine:
      break;
  }
  throw ConfigError("system", "GenericAffine systems cannot be simulated from a scenario");
}

Metrics compute_metrics(const TrajectoryLog& log, double inv_tol) {
  Metrics m;
  if (log.size() == 0) throw std::invalid_argument("compute_metrics: empty log");
  m.min_h = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < log.size(); ++k) {
    const double h = log.min_h_at(k);
    m.min_h = std::min(m.min_h, h);
    if (h < -inv_tol) ++m.violations;
  }
  m.goal_error_final = (log.x.back().head(log.goal.size()) - log.goal).norm();

  double sum = 0.0;
  std::size_t count = 0;
  for (double e : log.tracking_err) {
    if (std::isnan(e)) continue;
    sum += e * e;
    ++count;
  }
  m.velocity_tracking_rms = count > 0 ? std::sqrt(sum / static_cast<double>(count)) : kNaN;

  m.control_rate_max = 0.0;
  for (std::size_t k = 1; k < log.size(); ++k)
    m.control_rate_max = std::max(m.control_rate_max, (log.u[k] - log.u[k - 1]).norm() / log.dt);
  return m;
}

std::vector<Verdict> evaluate_verdicts(const Scenario& sc, const TrajectoryLog& log, const Metrics& m,
                                       double inv_tol) {
  std::vector<Verdict> out;
  const double h0 = log.size() > 0 ? log.min_h_at(0) : 0.0;
  std::ostringstream detail;

  Verdict inv{"forward_invariance", h0 >= 0.0, true, ""};
  if (inv.applicable) {
    inv.pass = m.violations == 0 && m.min_h >= -inv_tol;
    detail << "violations=" << m.violations << " min_h=" << m.min_h;
    inv.detail = detail.str();
  } else {
    inv.detail = "h(x0) < 0";
  }
  out.push_back(inv);

  Verdict stab{"set_stability", h0 < 0.0, true, ""};
  if (stab.applicable) {
    std::size_t first = log.size();
    for (std::size_t k = 0; k < log.size(); ++k) {
      if (log.min_h_at(k) >= 0.0) {
        first = k;
        break;
      }
    }
    bool reviolated = false;
    for (std::size_t k = first; k < log.size(); ++k) reviolated = reviolated || log.min_h_at(k) < -inv_tol;
    stab.pass = first < log.size() && !reviolated;
    if (first == log.size())
      stab.detail = "never reached h >= 0";
    else
      stab.detail = "reached h >= 0 at t=" + std::to_string(log.t[first]) + (reviolated ? ", re-violated" : "");
  } else {
    stab.detail = "h(x0) >= 0";
  }
  out.push_back(stab);

  const bool gated = sc.filter.kind == FilterKind::GatedQP;
  const double delta = gated ? sc.filter.gate.delta : sc.filter.penalty.delta;
  Verdict pf{"perception_freedom", sc.filter.kind != FilterKind::ClassicalQP && m.min_h >= delta, true, ""};
  if (pf.applicable) {
    double worst = 0.0;
    for (double c : log.correction_norm) worst = std::max(worst, c);
    pf.pass = gated ? worst == 0.0 : worst <= 1e-12;
    pf.detail = "max correction=" + std::to_string(worst);
  } else {
    pf.detail = "trajectory enters h < delta";
  }
  out.push_back(pf);
  return out;
}

double gate_boundary_sigma_min(const TrajectoryLog& log, double delta) {
  double best = kNaN;
  for (std::size_t k = 1; k < log.size(); ++k) {
    const double a = log.min_h_at(k - 1) - delta;
    const double b = log.min_h_at(k) - delta;
    if ((a < 0.0) == (b < 0.0)) continue;
    const double s = std::min(log.sigma[k - 1], log.sigma[k]);
    best = std::isnan(best) ? s : std::min(best, s);
  }
  return best;
}

long activation_index(const TrajectoryLog& log) {
  for (std::size_t k = 0; k < log.size(); ++k)
    if (log.correction_norm[k] > 0.0) return static_cast<long>(k);
  return -1;
}

double activation_second_difference(const TrajectoryLog& log) {
  const long k0 = activation_index(log);
  if (k0 < 2 || k0 + 1 >= static_cast<long>(log.size())) return 0.0;
  const auto& u = log.u;
  const ControlVec d2 = (u[k0 + 1] - u[k0]) - (u[k0 - 1] - u[k0 - 2]);
  return d2.norm() / (log.dt * log.dt);
}

}  // namespace smoothsafe
