#pragma once

// Shared generators and independent oracles for the test suites.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace testsupport {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(unsigned long long seed) : gen(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }

  Eigen::VectorXd vec(int n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  // SPD matrix with eigenvalues in [lo, hi] and a random orientation.
  Eigen::MatrixXd spd(int n, double lo = 0.2, double hi = 5.0) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = std::normal_distribution<double>()(gen);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd ev(n);
    for (int i = 0; i < n; ++i) ev[i] = uniform(lo, hi);
    Eigen::MatrixXd w = q * ev.asDiagonal() * q.transpose();
    return 0.5 * (w + w.transpose());
  }

  // Row vector with norm at least min_norm.
  Eigen::RowVectorXd row(int n, double min_norm = 0.1, double max_norm = 3.0) {
    for (;;) {
      Eigen::RowVectorXd a = vec(n, -max_norm, max_norm).transpose();
      if (a.norm() >= min_norm && a.norm() <= max_norm) return a;
    }
  }
};

// Minimizer of 1/2 |u - u0|_W^2 subject to rows G u + e >= 0, found by
// enumerating active sets and checking KKT conditions of each candidate.
inline Eigen::VectorXd qp_oracle(const Eigen::MatrixXd& w, const Eigen::VectorXd& u0, const Eigen::MatrixXd& g,
                                 const Eigen::VectorXd& e) {
  const int m = static_cast<int>(u0.size());
  const int k = static_cast<int>(g.rows());
  Eigen::VectorXd best = u0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::vector<int> act;
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) act.push_back(i);
    const int na = static_cast<int>(act.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + na, m + na);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + na);
    kkt.topLeftCorner(m, m) = w;
    rhs.head(m) = w * u0;
    for (int j = 0; j < na; ++j) {
      kkt.block(0, m + j, m, 1) = -g.row(act[j]).transpose();
      kkt.block(m + j, 0, 1, m) = g.row(act[j]);
      rhs[m + j] = -e[act[j]];
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd u = sol.head(m);
    bool ok = true;
    for (int j = 0; j < na; ++j) ok = ok && sol[m + j] >= -1e-12;
    for (int i = 0; i < k; ++i) ok = ok && g.row(i).dot(u) + e[i] >= -1e-10;
    if (!ok) continue;
    const double cost = 0.5 * (u - u0).dot(w * (u - u0));
    if (cost < best_cost) {
      best_cost = cost;
      best = u;
    }
  }
  return best;
}

// Brute-force minimizer of a nonnegative convex quadratic in R^2 whose Hessian
// is `hess`: a dense grid in the Hessian's scaled eigenbasis, then a shrinking
// pattern search. Only objective values are used. In those coordinates
// f = f* + |z - z*|^2 / 2 with f* >= 0, so |z*| <= sqrt(2 f(center)) and the
// grid radius is widened to enclose the minimizer.
template <class F>
Eigen::Vector2d grid_minimize(const F& f, const Eigen::Vector2d& center, const Eigen::Matrix2d& hess,
                              double radius, int grid = 100, int refine = 50) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(hess);
  Eigen::Matrix2d basis;
  for (int j = 0; j < 2; ++j) basis.col(j) = eig.eigenvectors().col(j) / std::sqrt(eig.eigenvalues()[j]);
  auto at = [&](const Eigen::Vector2d& z) { return Eigen::Vector2d(center + basis * z); };

  Eigen::Vector2d zbest = Eigen::Vector2d::Zero();
  double fbest = f(at(zbest));
  radius = std::max(radius, 1.01 * std::sqrt(2.0 * fbest));
  const double step0 = 2.0 * radius / (grid - 1);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Eigen::Vector2d z(-radius + i * step0, -radius + j * step0);
      const double v = f(at(z));
      if (v < fbest) {
        fbest = v;
        zbest = z;
      }
    }
  }
  double step = step0;
  for (int it = 0; it < refine; ++it) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          if (dx == 0 && dy == 0) continue;
          const Eigen::Vector2d z = zbest + step * Eigen::Vector2d(dx, dy);
          const double v = f(at(z));
          if (v < fbest) {
            fbest = v;
            zbest = z;
            improved = true;
          }
        }
      }
    }
    step *= 0.5;
  }
  return at(zbest);
}

}  // namespace testsupport
