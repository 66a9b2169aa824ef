#include "smoothsafe/autodiff.hpp"

#include <cmath>

namespace smoothsafe {

namespace {

void require_smooth(const SafetyDesign& design) {
  if (!is_smooth(design.filter.kind))
    throw NotDifferentiable(to_string(design.filter.kind) + " filter is only Lipschitz; derivatives need a penalty kind");
}

template <int N>
Eigen::MatrixXd jacobian_block(const SafetyDesign& design, const StateVec& x, int first) {
  VecT<Dual<N>> xs(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) xs[i] = Dual<N>(x[i]);
  for (int k = 0; k < N && first + k < x.size(); ++k) xs[first + k].d[k] = 1.0;
  const VecT<Dual<N>> u = design.evaluate_t<Dual<N>>(xs).u_star;
  Eigen::MatrixXd block(u.size(), N);
  for (Eigen::Index r = 0; r < u.size(); ++r) block.row(r) = u[r].d.transpose();
  return block;
}

bool near(double value, double join, double tol) { return std::abs(value - join) < tol; }

}  // namespace

bool near_transition_join(const SafetyDesign& design, const StateVec& x, double snap_tol) {
  const ControlVec u0 = design.nominal(x);
  const PenaltyParams& p = design.filter.penalty;
  for (const Barrier& b : design.barriers) {
    const double h = b.value(x);
    const LieData lie = lie_derivatives(design.system, b, x);
    const double sigma = detail::sigma_t(design.filter, lie, h, u0);
    if (near(h, 0.0, snap_tol) || near(h, p.delta, snap_tol)) return true;
    if (near(sigma, 0.0, snap_tol) || near(sigma, p.mu, snap_tol)) return true;
  }
  return false;
}

JacobianResult filter_jacobian(const SafetyDesign& design, const StateVec& x, double snap_tol) {
  require_smooth(design);
  JacobianResult out;
  const auto n = static_cast<int>(x.size());
  switch (n) {
    case 2:
      out.matrix = jacobian_block<2>(design, x, 0);
      break;
    case 3:
      out.matrix = jacobian_block<3>(design, x, 0);
      break;
    default:
      out.matrix.resize(design.system.input_dim(), n);
      for (int j = 0; j < n; ++j) out.matrix.col(j) = jacobian_block<1>(design, x, j);
      break;
  }
  out.valid = !near_transition_join(design, x, snap_tol);
  return out;
}

DirectionalEval evaluate_directional(const SafetyDesign& design, const StateVec& x, const StateVec& dir) {
  require_smooth(design);
  VecT<Dual<1>> xs(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) xs[i] = Dual<1>(x[i], Dual<1>::Grad(dir[i]));
  const FilterResultT<Dual<1>> r = design.evaluate_t<Dual<1>>(xs);

  const auto m = r.u_star.size();
  FilterResultT<double> values{ControlVec(m), ControlVec(m), r.h.v, r.sigma.v, r.gate_or_psi.v};
  DirectionalEval out{{}, ControlVec(m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    values.u_star[i] = r.u_star[i].v;
    values.correction[i] = r.correction[i].v;
    out.derivative[i] = r.u_star[i].d[0];
  }
  out.output = to_output(values);
  return out;
}

ControlVec feedforward_term(const SafetyDesign& design, const StateVec& x, const StateVec& xdot) {
  return evaluate_directional(design, x, xdot).derivative;
}

double desired_attitude(const Eigen::Vector2d& a_d, double gravity) {
  const double y = -a_d.x();
  const double x = a_d.y() + gravity;
  if (std::abs(x) < 1e-9 && std::abs(y) < 1e-9)
    throw DegenerateThrust("desired acceleration cancels gravity (free fall)");
  return std::atan2(y, x);
}

DroneReference drone_reference(const SafetyDesign& design, double k_v, double gravity,
                               const Eigen::Vector2d& p, const Eigen::Vector2d& v, bool feedforward,
                               std::optional<double> attitude) {
  DroneReference ref;
  Eigen::Vector2d jv = Eigen::Vector2d::Zero();
  if (feedforward) {
    DirectionalEval d = evaluate_directional(design, p, v);
    ref.filter = std::move(d.output);
    jv = d.derivative;
    ref.valid = !near_transition_join(design, p);
  } else {
    ref.filter = design.evaluate(p);
  }

  ref.accel = -k_v * (v - ref.filter.u_star) + jv;
  ref.theta = desired_attitude(ref.accel, gravity);
  const double ax = ref.accel.x();
  const double ay = ref.accel.y() + gravity;
  ref.thrust_accel = std::hypot(ax, ay);
  if (!feedforward) return ref;

  Eigen::Vector2d vdot = ref.accel;
  if (attitude) vdot = Eigen::Vector2d(-std::sin(*attitude), std::cos(*attitude)) * ref.thrust_accel -
                       Eigen::Vector2d(0.0, gravity);

  // Seed p + e1 v + e2 v + e1 e2 vdot: the cross term of u* is then
  // H[v, v] + J vdot, the second time derivative of u*(p(t)).
  VecT<HyperDual> ph(2);
  for (int i = 0; i < 2; ++i) ph[i] = HyperDual(p[i], v[i], v[i], vdot[i]);
  const VecT<HyperDual> uh = design.evaluate_t<HyperDual>(ph).u_star;
  Eigen::Vector2d accel_rate;
  for (int i = 0; i < 2; ++i) accel_rate[i] = -k_v * (vdot[i] - jv[i]) + uh[i].d12;

  ref.theta_rate = (ax * accel_rate.y() - accel_rate.x() * ay) / (ax * ax + ay * ay);
  return ref;
}

double desired_attitude_rate(const SafetyDesign& design, double k_v, double gravity,
                             const Eigen::Vector2d& p, const Eigen::Vector2d& v,
                             std::optional<double> attitude) {
  return drone_reference(design, k_v, gravity, p, v, true, attitude).theta_rate;
}

}  // namespace smoothsafe
