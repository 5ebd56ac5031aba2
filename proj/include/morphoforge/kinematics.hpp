#pragma once

// Forward kinematics, geometric Jacobian and 6-D pose error for serial
// module chains.
//
// Per module, starting from the current frame:
//   R, P, Y   translate L/2 along +z, rotate about the axis, translate L/2
//   O         translate L/2, rotate about +x, rotate about +y, translate L/2
//   S         translate L + q along +z
//   F         translate L along +z

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "morphoforge/errors.hpp"
#include "morphoforge/joint_module.hpp"

namespace morphoforge {

using JointState = Eigen::VectorXd;
using Jacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();

  static Pose identity() { return {}; }

  /// Rigid composition: this * other.
  Pose operator*(const Pose& other) const {
    Pose out;
    out.position = position + orientation * other.position;
    out.orientation = (orientation * other.orientation).normalized();
    return out;
  }

  Eigen::Vector3d z_axis() const { return orientation * Eigen::Vector3d::UnitZ(); }
};

/// Fixed-axis roll-pitch-yaw: R = Rz(yaw) * Ry(pitch) * Rx(roll).
inline Eigen::Quaterniond quat_from_rpy(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX()))
      .normalized();
}

inline Eigen::Vector3d unit_axis(AxisType t) {
  switch (t) {
    case AxisType::Roll:
      return Eigen::Vector3d::UnitX();
    case AxisType::Pitch:
      return Eigen::Vector3d::UnitY();
    default:
      return Eigen::Vector3d::UnitZ();
  }
}

/// Rotation vector (axis * angle) of a unit quaternion with angle in [0, pi].
inline Eigen::Vector3d rotation_log(Eigen::Quaterniond q) {
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const Eigen::Vector3d v = q.vec();
  const double s = v.norm();
  if (s < 1e-12) {
    // Small-angle limit of 2*atan2(s, w)/s.
    return (2.0 / q.w()) * v;
  }
  return (2.0 * std::atan2(s, q.w()) / s) * v;
}

/// Upper three: target.p - actual.p. Lower three: log(target.R * actual.R^-1).
inline Vector6d pose_error(const Pose& target, const Pose& actual) {
  Vector6d e;
  e.head<3>() = target.position - actual.position;
  e.tail<3>() = rotation_log(target.orientation * actual.orientation.conjugate());
  return e;
}

inline double chain_reach(const RobotDesign& d) {
  double s = 0.0;
  for (const auto& m : d.modules()) s += m.max_extent();
  return s;
}

namespace detail {

inline void check_dof(const RobotDesign& d, const JointState& q) {
  if (static_cast<std::size_t>(q.size()) != d.dof()) {
    throw ValidationError("joint state dimension mismatch: expected " + std::to_string(d.dof()) +
                          " DOF, got " + std::to_string(q.size()));
  }
}

/// Walks the chain; when `jac` is given also fills the geometric Jacobian.
inline Pose walk_chain(const RobotDesign& d, const Pose& root, const JointState& q, Jacobian* jac) {
  Eigen::Vector3d p = root.position;
  Eigen::Quaterniond r = root.orientation.normalized();
  const auto n = static_cast<Eigen::Index>(d.dof());

  // World-frame axis origin and direction of each DOF, filled on the way out.
  Eigen::Matrix<double, 3, Eigen::Dynamic> origins(3, n);
  Eigen::Matrix<double, 3, Eigen::Dynamic> directions(3, n);
  Eigen::Index k = 0;

  auto advance = [&](double dist) { p += r * Eigen::Vector3d(0.0, 0.0, dist); };
  auto rotate = [&](AxisType t, double angle) {
    const Eigen::Vector3d local = unit_axis(t);
    origins.col(k) = p;
    directions.col(k) = r * local;
    r = r * Eigen::Quaterniond(Eigen::AngleAxisd(angle, local));
    ++k;
  };

  for (const auto& m : d.modules()) {
    const double half = 0.5 * m.length();
    switch (m.kind()) {
      case JointKind::Roll:
        advance(half);
        rotate(AxisType::Roll, q[k]);
        advance(half);
        break;
      case JointKind::Pitch:
        advance(half);
        rotate(AxisType::Pitch, q[k]);
        advance(half);
        break;
      case JointKind::Yaw:
        advance(half);
        rotate(AxisType::Yaw, q[k]);
        advance(half);
        break;
      case JointKind::Orthogonal:
        advance(half);
        rotate(AxisType::Roll, q[k]);
        rotate(AxisType::Pitch, q[k]);
        advance(half);
        break;
      case JointKind::Prismatic:
        origins.col(k).setConstant(std::numeric_limits<double>::quiet_NaN());
        directions.col(k) = r * Eigen::Vector3d::UnitZ();
        advance(m.length() + q[k]);
        ++k;
        break;
      case JointKind::Fixed:
        advance(m.length());
        break;
    }
    r.normalize();
  }

  if (jac != nullptr) {
    jac->resize(6, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Vector3d z = directions.col(i);
      if (std::isnan(origins(0, i))) {
        jac->col(i).head<3>() = z;
        jac->col(i).tail<3>().setZero();
      } else {
        jac->col(i).head<3>() = z.cross(p - origins.col(i));
        jac->col(i).tail<3>() = z;
      }
    }
  }
  return Pose{p, r};
}

}  // namespace detail

inline Pose forward_kinematics(const RobotDesign& d, const Pose& root, const JointState& q) {
  detail::check_dof(d, q);
  return detail::walk_chain(d, root, q, nullptr);
}

/// 6 x dof geometric Jacobian: rows 0-2 linear, rows 3-5 angular velocity.
inline Jacobian jacobian(const RobotDesign& d, const Pose& root, const JointState& q) {
  detail::check_dof(d, q);
  Jacobian j(6, static_cast<Eigen::Index>(d.dof()));
  detail::walk_chain(d, root, q, &j);
  return j;
}

/// Forward kinematics and Jacobian in a single pass.
inline Pose forward_kinematics(const RobotDesign& d, const Pose& root, const JointState& q,
                               Jacobian& jac) {
  detail::check_dof(d, q);
  return detail::walk_chain(d, root, q, &jac);
}

}  // namespace morphoforge
