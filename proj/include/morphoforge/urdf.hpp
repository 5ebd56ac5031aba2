#pragma once

// URDF export of a design in its straight-line zero pose.
//
// Joint frames sit at the joint axes; the offset between consecutive joints
// is carried by the next joint's origin along +z. Every module emits one
// joint element per axis (F emits one fixed joint). When the chain ends with
// a non-zero offset past the last joint a fixed `end_effector_joint` closes
// it. The terminal link is always named `end_effector`.

#include <cstdio>
#include <string>
#include <vector>

#include "morphoforge/joint_module.hpp"

namespace morphoforge {

namespace detail {

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct UrdfJoint {
  std::string name;
  std::string type;  // revolute | prismatic | fixed
  std::string child;
  double origin_z = 0.0;
  const char* axis = "0 0 1";
  double lower = 0.0;
  double upper = 0.0;
};

inline const char* axis_xyz(AxisType t) {
  switch (t) {
    case AxisType::Roll:
      return "1 0 0";
    case AxisType::Pitch:
      return "0 1 0";
    default:
      return "0 0 1";
  }
}

inline std::string link_xml(const std::string& name, double extent) {
  std::string s = "  <link name=\"" + name + "\">\n";
  s +=
      "    <inertial>\n"
      "      <origin xyz=\"0 0 0\" rpy=\"0 0 0\"/>\n"
      "      <mass value=\"0.01\"/>\n"
      "      <inertia ixx=\"1e-06\" ixy=\"0\" ixz=\"0\" iyy=\"1e-06\" iyz=\"0\" izz=\"1e-06\"/>\n"
      "    </inertial>\n";
  if (extent > 0.0) {
    const std::string half = fmt17(0.5 * extent);
    s += "    <visual>\n      <origin xyz=\"0 0 " + half +
         "\" rpy=\"0 0 0\"/>\n      <geometry>\n        <cylinder radius=\"0.02\" length=\"" +
         fmt17(extent) + "\"/>\n      </geometry>\n    </visual>\n";
  }
  s += "  </link>\n";
  return s;
}

}  // namespace detail

inline std::string export_urdf(const RobotDesign& d, const std::string& name) {
  using detail::UrdfJoint;
  std::vector<UrdfJoint> joints;
  double pending = 0.0;  // distance from the last joint frame to the next attachment point

  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& m = d[i];
    const std::string base = "m" + std::to_string(i) + "_" + kind_letter(m.kind());
    const double half = 0.5 * m.length();
    switch (m.kind()) {
      case JointKind::Roll:
      case JointKind::Pitch:
      case JointKind::Yaw: {
        const Axis a = m.axes().front();
        joints.push_back({base + "_joint", "revolute", base + "_link", pending + half,
                          detail::axis_xyz(a.type), a.lower, a.upper});
        pending = half;
        break;
      }
      case JointKind::Orthogonal: {
        const auto ax = m.axes();
        joints.push_back({base + "_roll_joint", "revolute", base + "_cross_link", pending + half,
                          detail::axis_xyz(ax[0].type), ax[0].lower, ax[0].upper});
        joints.push_back({base + "_pitch_joint", "revolute", base + "_link", 0.0,
                          detail::axis_xyz(ax[1].type), ax[1].lower, ax[1].upper});
        pending = half;
        break;
      }
      case JointKind::Prismatic: {
        const Axis a = m.axes().front();
        joints.push_back({base + "_joint", "prismatic", base + "_link", pending + m.length(),
                          "0 0 1", a.lower, a.upper});
        pending = 0.0;
        break;
      }
      case JointKind::Fixed:
        joints.push_back({base + "_joint", "fixed", base + "_link", pending + m.length()});
        pending = 0.0;
        break;
    }
  }
  if (pending > 0.0 || joints.empty()) {
    joints.push_back({"end_effector_joint", "fixed", "end_effector", pending});
  } else {
    joints.back().child = "end_effector";
  }

  // Link extents for visuals: distance to the next joint origin.
  std::string xml = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<robot name=\"" + name + "\">\n";
  std::string parent = "base_link";
  xml += detail::link_xml(parent, joints.front().origin_z);
  for (std::size_t j = 0; j < joints.size(); ++j) {
    const auto& jt = joints[j];
    const double extent = j + 1 < joints.size() ? joints[j + 1].origin_z : 0.0;
    xml += detail::link_xml(jt.child, extent);
    xml += "  <joint name=\"" + jt.name + "\" type=\"" + jt.type + "\">\n";
    xml += "    <parent link=\"" + parent + "\"/>\n";
    xml += "    <child link=\"" + jt.child + "\"/>\n";
    xml += "    <origin xyz=\"0 0 " + detail::fmt17(jt.origin_z) + "\" rpy=\"0 0 0\"/>\n";
    if (jt.type != "fixed") {
      xml += "    <axis xyz=\"" + std::string(jt.axis) + "\"/>\n";
      xml += "    <limit lower=\"" + detail::fmt17(jt.lower) + "\" upper=\"" +
             detail::fmt17(jt.upper) + "\" effort=\"100\" velocity=\"1\"/>\n";
    }
    xml += "  </joint>\n";
    parent = jt.child;
  }
  xml += "</robot>\n";
  return xml;
}

}  // namespace morphoforge
