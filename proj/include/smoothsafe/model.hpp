#pragma once

// Control-affine systems x' = f(x) + g(x) u, circular-obstacle barriers and
// their Lie derivatives, and the proportional nominal law.

#include "smoothsafe/dual.hpp"
#include "smoothsafe/errors.hpp"
#include "smoothsafe/scalar_funcs.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <string_view>

namespace smoothsafe {

using StateVec = Eigen::VectorXd;
using ControlVec = Eigen::VectorXd;
using Position = Eigen::VectorXd;

template <class T> using VecT = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T> using RowT = Eigen::Matrix<T, 1, Eigen::Dynamic>;
template <class T> using MatT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kGradTol = 1e-9;
inline constexpr double kATol = 1e-9;

enum class SystemKind { SingleIntegrator, DoubleIntegrator, PlanarDrone, GenericAffine };

std::string to_string(SystemKind kind);
SystemKind parse_system_kind(std::string_view name);

class ControlAffineSystem {
public:
  static ControlAffineSystem single_integrator(int dim = 2);
  static ControlAffineSystem double_integrator(int dim = 2);
  static ControlAffineSystem planar_drone(double mass, double inertia, double gravity);
  // f(x) = f0 + A x, g(x) = B.
  static ControlAffineSystem affine(Eigen::VectorXd f0, Eigen::MatrixXd A, Eigen::MatrixXd B);

  SystemKind kind() const { return kind_; }
  int state_dim() const { return n_; }
  int input_dim() const { return m_; }
  // Leading state entries that form the position the barrier acts on.
  int position_dim() const { return pos_dim_; }

  template <class T>
  VecT<T> drift(const VecT<T>& x) const;

  template <class T>
  MatT<T> input_map(const VecT<T>& x) const;

private:
  ControlAffineSystem(SystemKind kind, int n, int m, int pos_dim)
      : kind_(kind), n_(n), m_(m), pos_dim_(pos_dim) {}

  SystemKind kind_;
  int n_;
  int m_;
  int pos_dim_;
  double mass_ = 1.0;
  double inertia_ = 1.0;
  double gravity_ = 0.0;
  Eigen::VectorXd f0_;
  Eigen::MatrixXd A_;
  Eigen::MatrixXd B_;
};

struct Obstacle {
  Eigen::VectorXd center;
  double radius = 1.0;
  double margin = 0.0;

  void validate(std::string_view key = "obstacle") const;
};

// h(p) = |p - c| - (r + margin). Acts on the first center.size() entries of
// whatever vector it is given.
struct Barrier {
  Obstacle obstacle;

  template <class T>
  T value(const VecT<T>& x) const {
    using std::sqrt;
    const auto k = obstacle.center.size();
    T r2(0.0);
    for (Eigen::Index i = 0; i < k; ++i) {
      const T d = x[i] - obstacle.center[i];
      r2 += d * d;
    }
    return sqrt(r2) - (obstacle.radius + obstacle.margin);
  }

  // Gradient with respect to the full vector x (zero past the position block).
  template <class T>
  RowT<T> gradient(const VecT<T>& x, double grad_tol = kGradTol) const {
    using std::sqrt;
    const auto k = obstacle.center.size();
    RowT<T> g = RowT<T>::Zero(x.size());
    T r2(0.0);
    for (Eigen::Index i = 0; i < k; ++i) {
      g[i] = x[i] - obstacle.center[i];
      r2 += g[i] * g[i];
    }
    const T r = sqrt(r2);
    if (!(r > grad_tol)) throw DegenerateGradient("barrier gradient undefined at the obstacle center");
    for (Eigen::Index i = 0; i < k; ++i) g[i] = g[i] / r;
    return g;
  }
};

template <class T>
struct LieDataT {
  T c_val;
  RowT<T> a_row;
};
using LieData = LieDataT<double>;

// Nominal u0(x) = -k (p - goal) on the position block.
struct ProportionalNominal {
  Eigen::VectorXd goal;
  double k = 1.0;

  template <class T>
  VecT<T> operator()(const VecT<T>& x) const {
    VecT<T> u(goal.size());
    for (Eigen::Index i = 0; i < goal.size(); ++i) u[i] = -k * (x[i] - goal[i]);
    return u;
  }
};

template <class T>
T row_norm(const RowT<T>& a) {
  using std::sqrt;
  T s(0.0);
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * a[i];
  return sqrt(s);
}

template <class T>
LieDataT<T> lie_derivatives_t(const ControlAffineSystem& sys, const Barrier& b, const VecT<T>& x,
                              double a_tol = kATol) {
  const RowT<T> grad = b.gradient(x);
  LieDataT<T> out{(grad * sys.drift(x))(0, 0), grad * sys.input_map(x)};
  if (!(row_norm(out.a_row) >= a_tol))
    throw RelativeDegreeViolation("|L_g h| = " + std::to_string(value_of(row_norm(out.a_row))) +
                                  " below tolerance");
  return out;
}

double barrier_eval(const Barrier& b, const Position& pos);
Eigen::RowVectorXd barrier_gradient(const Barrier& b, const Position& pos, double grad_tol = kGradTol);
LieData lie_derivatives(const ControlAffineSystem& sys, const Barrier& b, const StateVec& x,
                        double a_tol = kATol);
double sigma_eval(const LieData& lie, const ControlVec& u0, double alpha_h);
ControlVec nominal_proportional(const Position& x, const Position& x_d, double k);

// ---------------------------------------------------------------------------

template <class T>
VecT<T> ControlAffineSystem::drift(const VecT<T>& x) const {
  VecT<T> f = VecT<T>::Zero(n_);
  switch (kind_) {
    case SystemKind::SingleIntegrator:
      break;
    case SystemKind::DoubleIntegrator:
      f.head(pos_dim_) = x.segment(pos_dim_, pos_dim_);
      break;
    case SystemKind::PlanarDrone:
      f[0] = x[2];
      f[1] = x[3];
      f[3] = T(-gravity_);
      f[4] = x[5];
      break;
    case SystemKind::GenericAffine:
      for (int i = 0; i < n_; ++i) {
        T acc(f0_[i]);
        for (int j = 0; j < n_; ++j) acc += A_(i, j) * x[j];
        f[i] = acc;
      }
      break;
  }
  return f;
}

template <class T>
MatT<T> ControlAffineSystem::input_map(const VecT<T>& x) const {
  using std::cos;
  using std::sin;
  MatT<T> g = MatT<T>::Zero(n_, m_);
  switch (kind_) {
    case SystemKind::SingleIntegrator:
      for (int i = 0; i < n_; ++i) g(i, i) = T(1.0);
      break;
    case SystemKind::DoubleIntegrator:
      for (int i = 0; i < pos_dim_; ++i) g(pos_dim_ + i, i) = T(1.0);
      break;
    case SystemKind::PlanarDrone:
      g(2, 0) = -sin(x[4]) / mass_;
      g(3, 0) = cos(x[4]) / mass_;
      g(5, 1) = T(1.0 / inertia_);
      break;
    case SystemKind::GenericAffine:
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < m_; ++j) g(i, j) = T(B_(i, j));
      break;
  }
  return g;
}

}  // namespace smoothsafe
