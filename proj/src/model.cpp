#include "smoothsafe/model.hpp"

#include <cmath>

namespace smoothsafe {

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::SingleIntegrator:
      return "SingleIntegrator";
    case SystemKind::DoubleIntegrator:
      return "DoubleIntegrator";
    case SystemKind::PlanarDrone:
      return "PlanarDrone";
    case SystemKind::GenericAffine:
      return "GenericAffine";
  }
  return "SingleIntegrator";
}

SystemKind parse_system_kind(std::string_view name) {
  if (name == "SingleIntegrator") return SystemKind::SingleIntegrator;
  if (name == "DoubleIntegrator") return SystemKind::DoubleIntegrator;
  if (name == "PlanarDrone") return SystemKind::PlanarDrone;
  throw ConfigError("system", "unknown system '" + std::string(name) +
                                  "' (expected SingleIntegrator, DoubleIntegrator or PlanarDrone)");
}

ControlAffineSystem ControlAffineSystem::single_integrator(int dim) {
  return ControlAffineSystem(SystemKind::SingleIntegrator, dim, dim, dim);
}

ControlAffineSystem ControlAffineSystem::double_integrator(int dim) {
  return ControlAffineSystem(SystemKind::DoubleIntegrator, 2 * dim, dim, dim);
}

ControlAffineSystem ControlAffineSystem::planar_drone(double mass, double inertia, double gravity) {
  ControlAffineSystem sys(SystemKind::PlanarDrone, 6, 2, 2);
  sys.mass_ = mass;
  sys.inertia_ = inertia;
  sys.gravity_ = gravity;
  return sys;
}

ControlAffineSystem ControlAffineSystem::affine(Eigen::VectorXd f0, Eigen::MatrixXd A,
                                                Eigen::MatrixXd B) {
  const int n = static_cast<int>(f0.size());
  if (A.rows() != n || A.cols() != n || B.rows() != n)
    throw std::invalid_argument("affine system: inconsistent dimensions");
  ControlAffineSystem sys(SystemKind::GenericAffine, n, static_cast<int>(B.cols()), n);
  sys.f0_ = std::move(f0);
  sys.A_ = std::move(A);
  sys.B_ = std::move(B);
  return sys;
}

void Obstacle::validate(std::string_view key) const {
  const std::string k(key);
  if (center.size() == 0 || !center.allFinite())
    throw ConfigError(k + ".center", "Obstacle center must be a finite vector");
  if (!std::isfinite(radius) || !(radius > 0.0))
    throw ConfigError(k + ".radius", "Obstacle requires radius > 0");
  if (!std::isfinite(margin) || !(margin >= 0.0))
    throw ConfigError(k + ".margin", "Obstacle requires margin >= 0");
}

double barrier_eval(const Barrier& b, const Position& pos) { return b.value(pos); }

Eigen::RowVectorXd barrier_gradient(const Barrier& b, const Position& pos, double grad_tol) {
  return b.gradient(pos, grad_tol);
}

LieData lie_derivatives(const ControlAffineSystem& sys, const Barrier& b, const StateVec& x,
                        double a_tol) {
  return lie_derivatives_t(sys, b, x, a_tol);
}

double sigma_eval(const LieData& lie, const ControlVec& u0, double alpha_h) {
  return lie.c_val + lie.a_row.dot(u0) + alpha_h;
}

ControlVec nominal_proportional(const Position& x, const Position& x_d, double k) {
  return -k * (x - x_d);
}

}  // namespace smoothsafe
