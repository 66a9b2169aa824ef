#include "smoothsafe/filters.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>

namespace smoothsafe {

WeightMatrix::WeightMatrix(Eigen::MatrixXd w, std::string_view key) : w_(std::move(w)) {
  const std::string k(key);
  if (w_.rows() == 0 || w_.rows() != w_.cols()) throw ConfigError(k, "W must be a non-empty square matrix");
  if (!w_.allFinite()) throw ConfigError(k, "W must be finite");
  if ((w_ - w_.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ConfigError(k, "W must be symmetric");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w_, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) throw ConfigError(k, "W must be positive definite");
  w_inv_ = w_.inverse();
  w_inv_ = 0.5 * (w_inv_ + w_inv_.transpose());
  const Eigen::MatrixXd residual = w_ * w_inv_ - Eigen::MatrixXd::Identity(w_.rows(), w_.cols());
  if (residual.cwiseAbs().maxCoeff() > 1e-10) throw ConfigError(k, "W is too ill-conditioned to invert");
}

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::ClassicalQP:
      return "ClassicalQP";
    case FilterKind::GatedQP:
      return "GatedQP";
    case FilterKind::Penalty:
      return "Penalty";
    case FilterKind::StabilizedPenalty:
      return "StabilizedPenalty";
  }
  return "Penalty";
}

FilterKind parse_filter_kind(std::string_view name) {
  if (name == "ClassicalQP") return FilterKind::ClassicalQP;
  if (name == "GatedQP") return FilterKind::GatedQP;
  if (name == "Penalty") return FilterKind::Penalty;
  if (name == "StabilizedPenalty") return FilterKind::StabilizedPenalty;
  throw ConfigError("filter.kind", "unknown filter kind '" + std::string(name) +
                                       "' (expected ClassicalQP, GatedQP, Penalty or StabilizedPenalty)");
}

void FilterConfig::validate(std::string_view key) const {
  const std::string k(key);
  gate.validate(k + ".gate");
  classk.validate(k + ".classk");
  penalty.validate(k + ".penalty");
}

double wnorm(const Eigen::RowVectorXd& a_row, const WeightMatrix& w, double a_tol) {
  return detail::wnorm_t(a_row, w.inverse(), a_tol);
}

ControlVec nu(const Eigen::RowVectorXd& a_row, const WeightMatrix& w, double a_tol) {
  detail::wnorm_t(a_row, w.inverse(), a_tol);
  return detail::nu_t(a_row, w.inverse());
}

FilterOutput to_output(const FilterResultT<double>& r) {
  FilterOutput out;
  out.u_star = r.u_star;
  out.correction = r.correction;
  out.h = r.h;
  out.sigma = r.sigma;
  out.gate_or_psi = r.gate_or_psi;
  out.constraint_active = r.correction.norm() > 0.0;
  return out;
}

FilterOutput gated_filter(const FilterConfig& cfg, const LieData& lie, double h, const ControlVec& u0) {
  return to_output(detail::gated(cfg, lie, h, u0));
}

FilterOutput penalty_filter(const FilterConfig& cfg, const LieData& lie, double h, const ControlVec& u0) {
  return to_output(detail::penalty(cfg, lie, h, u0));
}

FilterOutput stabilized_penalty_filter(const FilterConfig& cfg, const LieData& lie, double h,
                                       const ControlVec& u0) {
  return to_output(detail::stabilized(cfg, lie, h, u0));
}

FilterOutput multi_penalty_filter(const FilterConfig& cfg, std::span<const LieData> lies,
                                  std::span<const double> hs, const ControlVec& u0) {
  return to_output(detail::multi_penalty<double>(cfg, lies, hs, u0));
}

Eigen::MatrixXd sherman_morrison_inverse(const WeightMatrix& w, double psi,
                                         const Eigen::RowVectorXd& a_row) {
  const Eigen::MatrixXd& w_inv = w.inverse();
  if (psi == 0.0) return w_inv;
  const Eigen::VectorXd v = w_inv * a_row.transpose();
  const double q = a_row.dot(v);
  return w_inv - (psi / (1.0 + psi * q)) * (v * v.transpose());
}

double hdot_under_filter(const LieData& lie, const ControlVec& u_star) {
  return lie.c_val + lie.a_row.dot(u_star);
}

}  // namespace smoothsafe
