#pragma once

// Closed-form safety filters.
//
//   ClassicalQP        argmin 1/2|u-u0|_W^2  s.t.  c + a u + alpha(h) >= 0
//   GatedQP            same, constraint multiplied by the perception gate
//   Penalty            argmin 1/2|u-u0|_W^2 + 1/2 psi (c + a u + alpha(h))^2
//   StabilizedPenalty  penalty law rewritten with the blend phi_d(h) phi_mu(sigma)
//
// Throughout, |a|_{W^-1} denotes the quadratic form a W^-1 a^T, and psi is
// evaluated at the nominal margin sigma = c + a u0 + alpha(h).

#include "smoothsafe/model.hpp"
#include "smoothsafe/scalar_funcs.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smoothsafe {

// Symmetric positive-definite weight with cached inverse.
class WeightMatrix {
public:
  WeightMatrix() : WeightMatrix(Eigen::MatrixXd::Identity(2, 2)) {}
  explicit WeightMatrix(Eigen::MatrixXd w, std::string_view key = "weight");

  static WeightMatrix identity(int m) { return WeightMatrix(Eigen::MatrixXd::Identity(m, m)); }

  const Eigen::MatrixXd& matrix() const { return w_; }
  const Eigen::MatrixXd& inverse() const { return w_inv_; }
  int dim() const { return static_cast<int>(w_.rows()); }

private:
  Eigen::MatrixXd w_;
  Eigen::MatrixXd w_inv_;
};

enum class FilterKind { ClassicalQP, GatedQP, Penalty, StabilizedPenalty };

std::string to_string(FilterKind kind);
FilterKind parse_filter_kind(std::string_view name);
inline bool is_smooth(FilterKind kind) {
  return kind == FilterKind::Penalty || kind == FilterKind::StabilizedPenalty;
}

struct FilterConfig {
  FilterKind kind = FilterKind::Penalty;
  WeightMatrix weight;
  GateParams gate;
  ClassK classk;
  PenaltyParams penalty;

  void validate(std::string_view key = "filter") const;
};

struct FilterOutput {
  ControlVec u_star;
  double h = 0.0;
  double sigma = 0.0;
  double gate_or_psi = 0.0;  // gate value for QP kinds, psi for penalty kinds
  ControlVec correction;     // u_star - u0
  bool constraint_active = false;
};

template <class T>
struct FilterResultT {
  VecT<T> u_star;
  VecT<T> correction;
  T h;
  T sigma;
  T gate_or_psi;
};

double wnorm(const Eigen::RowVectorXd& a_row, const WeightMatrix& w, double a_tol = kATol);
ControlVec nu(const Eigen::RowVectorXd& a_row, const WeightMatrix& w, double a_tol = kATol);

FilterOutput gated_filter(const FilterConfig& cfg, const LieData& lie, double h, const ControlVec& u0);
FilterOutput penalty_filter(const FilterConfig& cfg, const LieData& lie, double h, const ControlVec& u0);
FilterOutput stabilized_penalty_filter(const FilterConfig& cfg, const LieData& lie, double h,
                                       const ControlVec& u0);
FilterOutput multi_penalty_filter(const FilterConfig& cfg, std::span<const LieData> lies,
                                  std::span<const double> hs, const ControlVec& u0);

// (W + psi a^T a)^-1 by a rank-one update of W^-1.
Eigen::MatrixXd sherman_morrison_inverse(const WeightMatrix& w, double psi, const Eigen::RowVectorXd& a_row);

// Barrier rate c + a u under the applied control.
double hdot_under_filter(const LieData& lie, const ControlVec& u_star);

FilterOutput to_output(const FilterResultT<double>& r);

namespace detail {

template <class T>
T dot(const RowT<T>& a, const VecT<T>& u) {
  T s(0.0);
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * u[i];
  return s;
}

template <class T>
T quad_form(const RowT<T>& a, const Eigen::MatrixXd& m, const RowT<T>& b) {
  T s(0.0);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) s += a[i] * m(i, j) * b[j];
  return s;
}

template <class T>
T wnorm_t(const RowT<T>& a, const Eigen::MatrixXd& w_inv, double a_tol = kATol) {
  if (a.size() != w_inv.rows()) throw std::invalid_argument("L_g h and W dimensions differ");
  if (!(row_norm(a) >= a_tol))
    throw RelativeDegreeViolation("|L_g h| = " + std::to_string(value_of(row_norm(a))) +
                                  " below tolerance");
  return quad_form(a, w_inv, a);
}

template <class T>
VecT<T> nu_t(const RowT<T>& a, const Eigen::MatrixXd& w_inv) {
  VecT<T> v(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    T s(0.0);
    for (Eigen::Index j = 0; j < a.size(); ++j) s += w_inv(i, j) * a[j];
    v[i] = s;
  }
  return v;
}

template <class T>
T sigma_t(const FilterConfig& cfg, const LieDataT<T>& lie, const T& h, const VecT<T>& u0) {
  return lie.c_val + dot(lie.a_row, u0) + classk(h, cfg.classk);
}

template <class T>
FilterResultT<T> finish(const VecT<T>& u0, VecT<T> correction, const T& h, const T& sigma,
                        const T& gate_or_psi) {
  FilterResultT<T> out{u0 + correction, std::move(correction), h, sigma, gate_or_psi};
  return out;
}

template <class T>
FilterResultT<T> gated(const FilterConfig& cfg, const LieDataT<T>& lie, const T& h, const VecT<T>& u0) {
  const Eigen::MatrixXd& w_inv = cfg.weight.inverse();
  const T w = wnorm_t(lie.a_row, w_inv);
  const T sigma = sigma_t(cfg, lie, h, u0);
  const T g = cfg.kind == FilterKind::ClassicalQP ? T(1.0) : gate(h, cfg.gate);
  VecT<T> correction = VecT<T>::Zero(u0.size());
  if (g * sigma < 0.0) correction = nu_t(lie.a_row, w_inv) * T(-sigma / w);
  return finish(u0, std::move(correction), h, sigma, g);
}

template <class T>
FilterResultT<T> penalty(const FilterConfig& cfg, const LieDataT<T>& lie, const T& h, const VecT<T>& u0) {
  const Eigen::MatrixXd& w_inv = cfg.weight.inverse();
  const T w = wnorm_t(lie.a_row, w_inv);
  const T sigma = sigma_t(cfg, lie, h, u0);
  const T p = psi(h, sigma, w, cfg.penalty);
  const T scale = -(p * sigma) / (1.0 + p * w);
  return finish(u0, VecT<T>(nu_t(lie.a_row, w_inv) * scale), h, sigma, p);
}

template <class T>
FilterResultT<T> stabilized(const FilterConfig& cfg, const LieDataT<T>& lie, const T& h,
                            const VecT<T>& u0) {
  const Eigen::MatrixXd& w_inv = cfg.weight.inverse();
  const T w = wnorm_t(lie.a_row, w_inv);
  const T sigma = sigma_t(cfg, lie, h, u0);
  const T blend =
      penalty_blend(h, sigma, cfg.penalty.h_transition(), cfg.penalty.sigma_transition());
  const T scale = -(blend * sigma) / w;
  return finish(u0, VecT<T>(nu_t(lie.a_row, w_inv) * scale), h, sigma, psi(h, sigma, w, cfg.penalty));
}

// Stationarity of the summed penalty objective with frozen psi_i:
//   (W + sum psi_i a_i^T a_i) u = W u0 - sum psi_i (c_i + alpha_i) a_i^T.
// Solved in the active-set (Woodbury) form
//   (Psi^-1 + A W^-1 A^T) lambda = sigma,   u = u0 - W^-1 A^T lambda,
// which is the same system after the rank-k update and stays well conditioned
// when some psi_i sit at the saturation ceiling.
template <class T>
FilterResultT<T> multi_penalty(const FilterConfig& cfg, std::span<const LieDataT<T>> lies,
                               std::span<const T> hs, const VecT<T>& u0) {
  if (lies.empty() || lies.size() != hs.size())
    throw std::invalid_argument("multi_penalty_filter: need N >= 1 matching (lie, h) pairs");
  const Eigen::MatrixXd& w_inv = cfg.weight.inverse();
  const std::size_t n = lies.size();

  std::vector<T> sigma(n), psis(n);
  std::vector<std::size_t> active;
  std::size_t closest = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const T w = wnorm_t(lies[i].a_row, w_inv);
    sigma[i] = sigma_t(cfg, lies[i], hs[i], u0);
    psis[i] = psi(hs[i], sigma[i], w, cfg.penalty);
    if (psis[i] > 0.0) active.push_back(i);
    if (hs[i] < hs[closest]) closest = i;
  }

  VecT<T> correction = VecT<T>::Zero(u0.size());
  if (!active.empty()) {
    const auto k = static_cast<Eigen::Index>(active.size());
    MatT<T> s(k, k);
    VecT<T> rhs(k);
    for (Eigen::Index r = 0; r < k; ++r) {
      const auto& ar = lies[active[r]].a_row;
      rhs[r] = sigma[active[r]];
      for (Eigen::Index c = 0; c <= r; ++c) {
        s(r, c) = quad_form(ar, w_inv, lies[active[c]].a_row);
        s(c, r) = s(r, c);
      }
      s(r, r) += 1.0 / psis[active[r]];
    }
    Eigen::LLT<MatT<T>> llt(s);
    if (llt.info() != Eigen::Success) throw SolveFailure("multi-penalty system is not positive definite");
    const VecT<T> lambda = llt.solve(rhs);
    for (Eigen::Index r = 0; r < k; ++r)
      correction -= nu_t(lies[active[r]].a_row, w_inv) * lambda[r];
  }
  return finish(u0, std::move(correction), hs[closest], sigma[closest], psis[closest]);
}

}  // namespace detail

}  // namespace smoothsafe
