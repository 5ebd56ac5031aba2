#pragma once

// Damped-least-squares inverse kinematics with projected (clamped) steps and
// random restarts. The first attempt always starts from the straight-line
// zero configuration.

#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "morphoforge/errors.hpp"
#include "morphoforge/kinematics.hpp"

namespace morphoforge {

struct IkConfig {
  double damping = 0.1;  // lambda
  int max_iterations = 200;  // per restart
  double step_tolerance = 1e-8;
  double residual_tolerance = 1e-4;
  int restarts = 20;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(damping > 0.0)) throw ValidationError("ik damping must be > 0");
    if (max_iterations < 1) throw ValidationError("ik max_iterations must be >= 1");
    if (!(step_tolerance > 0.0)) throw ValidationError("ik step_tolerance must be > 0");
    if (!(residual_tolerance > 0.0)) throw ValidationError("ik residual_tolerance must be > 0");
    if (restarts < 1) throw ValidationError("ik restarts must be >= 1");
  }

  friend bool operator==(const IkConfig&, const IkConfig&) = default;
};

struct IkResult {
  JointState q;
  Vector6d residual = Vector6d::Zero();
  double residual_norm = 0.0;
  bool converged = false;
  int iterations_used = 0;  // summed over restarts
};

inline IkResult solve_ik(const RobotDesign& d, const Pose& root, const Pose& target,
                         const IkConfig& cfg) {
  cfg.validate();
  const auto axes = d.axes();
  const auto n = static_cast<Eigen::Index>(axes.size());

  Eigen::VectorXd lower(n), upper(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lower[i] = axes[static_cast<std::size_t>(i)].lower;
    upper[i] = axes[static_cast<std::size_t>(i)].upper;
  }

  IkResult best;
  best.q = JointState::Zero(n);
  best.residual = pose_error(target, detail::walk_chain(d, root, best.q, nullptr));
  best.residual_norm = best.residual.norm();
  best.converged = best.residual_norm < cfg.residual_tolerance;
  if (best.converged || n == 0) return best;

  std::mt19937_64 rng(cfg.seed);
  const double lambda2 = cfg.damping * cfg.damping;
  Jacobian jac(6, n);
  JointState q(n);
  int total_iterations = 0;

  for (int attempt = 0; attempt < cfg.restarts && !best.converged; ++attempt) {
    if (attempt == 0) {
      q.setZero();
    } else {
      for (Eigen::Index i = 0; i < n; ++i) {
        q[i] = std::uniform_real_distribution<double>(lower[i], upper[i])(rng);
      }
    }

    for (int it = 0; it < cfg.max_iterations; ++it) {
      const Pose ee = detail::walk_chain(d, root, q, &jac);
      const Vector6d e = pose_error(target, ee);
      const double norm = e.norm();
      if (norm < best.residual_norm) {
        best.q = q;
        best.residual = e;
        best.residual_norm = norm;
      }
      if (norm < cfg.residual_tolerance) {
        best.converged = true;
        break;
      }
      ++total_iterations;

      Eigen::Matrix<double, 6, 6> jjt = jac * jac.transpose();
      jjt.diagonal().array() += lambda2;
      const Vector6d y = jjt.llt().solve(e);
      const JointState next = (q + jac.transpose() * y).cwiseMax(lower).cwiseMin(upper);
      const double step = (next - q).norm();
      q = next;
      if (step < cfg.step_tolerance) {
        const Vector6d last = pose_error(target, detail::walk_chain(d, root, q, nullptr));
        if (last.norm() < best.residual_norm) {
          best.q = q;
          best.residual = last;
          best.residual_norm = last.norm();
          best.converged = best.residual_norm < cfg.residual_tolerance;
        }
        break;
      }
    }
  }
  best.iterations_used = total_iterations;
  return best;
}

}  // namespace morphoforge
