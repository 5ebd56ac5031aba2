#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "morphoforge/kinematics.hpp"
#include "support/oracles.hpp"
#include "support/random_design.hpp"

namespace morphoforge {
namespace {

using testing::random_configuration;
using testing::random_pose;

constexpr double kPi = std::numbers::pi;

TEST(ForwardKinematics, FixedChainIsStraight) {
  const auto d = parse_design("F:0.2,F:0.3");
  const Pose p = forward_kinematics(d, Pose::identity(), JointState(0));
  EXPECT_TRUE(p.position.isApprox(Eigen::Vector3d(0, 0, 0.5)));
  EXPECT_TRUE(p.orientation.isApprox(Eigen::Quaterniond::Identity()));

  std::mt19937_64 rng(1);
  const Pose root = random_pose(rng);
  const Pose q = forward_kinematics(d, root, JointState(0));
  EXPECT_LT((q.position - (root.position + 0.5 * root.z_axis())).norm(), 1e-12);
  EXPECT_LT(testing::quaternion_distance(q.orientation, root.orientation), 1e-12);
}

TEST(ForwardKinematics, PitchModuleHandComposed) {
  // translate(0,0,0.2) * rotY(pi/2) * translate(0,0,0.2)
  const auto d = parse_design("P:0.4");
  JointState q(1);
  q << kPi / 2;
  const Pose p = forward_kinematics(d, Pose::identity(), q);
  EXPECT_LT((p.position - Eigen::Vector3d(0.2, 0, 0.2)).norm(), 1e-12);
  const Eigen::Quaterniond expected(Eigen::AngleAxisd(kPi / 2, Eigen::Vector3d::UnitY()));
  EXPECT_LT(testing::quaternion_distance(p.orientation, expected), 1e-12);
}

TEST(ForwardKinematics, PrismaticExtendsToTwiceLength) {
  const auto d = parse_design("S:0.3");
  JointState q(1);
  q << 0.3;
  EXPECT_LT((forward_kinematics(d, Pose::identity(), q).position - Eigen::Vector3d(0, 0, 0.6)).norm(), 1e-15);
}

TEST(ForwardKinematics, OrthogonalIsRollThenPitch) {
  const auto o = parse_design("O:0.4");
  const auto rp = RobotDesign({JointModule(JointKind::Roll, 0.4)});
  JointState q(2);
  q << 0.7, -0.4;
  const Pose p = forward_kinematics(o, Pose::identity(), q);
  // Same as: half link, roll, pitch, half link.
  const Eigen::Quaterniond r = Eigen::Quaterniond(Eigen::AngleAxisd(0.7, Eigen::Vector3d::UnitX())) *
                               Eigen::Quaterniond(Eigen::AngleAxisd(-0.4, Eigen::Vector3d::UnitY()));
  const Eigen::Vector3d expected = Eigen::Vector3d(0, 0, 0.2) + r * Eigen::Vector3d(0, 0, 0.2);
  EXPECT_LT((p.position - expected).norm(), 1e-12);
  EXPECT_LT(testing::quaternion_distance(p.orientation, r), 1e-12);
}

TEST(ForwardKinematics, DimensionMismatchNamesCounts) {
  const auto d = parse_design("O:0.3,P:0.2");
  try {
    forward_kinematics(d, Pose::identity(), JointState::Zero(2));
    FAIL();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("expected 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("got 2"), std::string::npos) << msg;
  }
  EXPECT_THROW(jacobian(d, Pose::identity(), JointState::Zero(4)), ValidationError);
}

TEST(ForwardKinematics, ZeroPoseIsStraightLine) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto d = decode_genome(random_genome(rng));
    const Pose root = random_pose(rng);
    const Pose p = forward_kinematics(d, root, JointState::Zero(static_cast<Eigen::Index>(d.dof())));
    EXPECT_LT((p.position - (root.position + d.total_length() * root.z_axis())).norm(), 1e-12);
    EXPECT_LT(testing::quaternion_distance(p.orientation, root.orientation), 1e-12);
  }
}

TEST(ForwardKinematics, OrientationStaysUnit) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 500; ++i) {
    const auto d = decode_genome(random_genome(rng));
    const Pose p = forward_kinematics(d, random_pose(rng), random_configuration(d, rng));
    EXPECT_NEAR(p.orientation.norm(), 1.0, 1e-9);
  }
}

TEST(Jacobian, MatchesFiniteDifferences) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const auto d = decode_genome(random_genome(rng));
    const Pose root = random_pose(rng);
    const JointState q = random_configuration(d, rng);
    const Jacobian j = jacobian(d, root, q);
    const auto fd = testing::finite_difference_jacobian(d, root, q, 1e-6);
    ASSERT_EQ(j.cols(), fd.cols());
    if (j.cols() > 0) {
      EXPECT_LT((j - fd).cwiseAbs().maxCoeff(), 1e-5) << d.joint_string();
    }
  }
}

TEST(Jacobian, PrismaticColumnAndEmpty) {
  const Jacobian j = jacobian(parse_design("S:0.3"), Pose::identity(), JointState::Zero(1));
  Vector6d expected;
  expected << 0, 0, 1, 0, 0, 0;
  EXPECT_EQ(j.col(0), expected);
  EXPECT_EQ(jacobian(parse_design("F:0.2,F:0.2"), Pose::identity(), JointState(0)).cols(), 0);
}

TEST(Jacobian, FusedPassAgreesWithSeparateCalls) {
  std::mt19937_64 rng(10);
  const auto d = decode_genome(random_genome(rng));
  const JointState q = random_configuration(d, rng);
  Jacobian j;
  const Pose p = forward_kinematics(d, Pose::identity(), q, j);
  EXPECT_EQ(p.position, forward_kinematics(d, Pose::identity(), q).position);
  EXPECT_EQ(j, jacobian(d, Pose::identity(), q));
}

TEST(PoseError, BasicCases) {
  Pose a;
  a.position = Eigen::Vector3d(0.1, 0.2, 0.3);
  EXPECT_EQ(pose_error(a, a), Vector6d::Zero());

  Pose b = a;
  b.position.x() -= 0.1;
  Vector6d e = pose_error(a, b);
  EXPECT_NEAR(e[0], 0.1, 1e-15);
  EXPECT_EQ(e.tail<5>(), (Eigen::Matrix<double, 5, 1>::Zero()));

  Pose c = a;
  c.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(kPi / 2, Eigen::Vector3d::UnitZ()));
  e = pose_error(c, a);
  Vector6d expected;
  expected << 0, 0, 0, 0, 0, kPi / 2;
  EXPECT_LT((e - expected).norm(), 1e-12);
}

TEST(PoseError, AngleInZeroToPi) {
  Pose a, b;
  a.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(1.5 * kPi, Eigen::Vector3d::UnitX()));
  const Vector6d e = pose_error(a, b);
  EXPECT_NEAR(e.tail<3>().norm(), 0.5 * kPi, 1e-12);
  EXPECT_LT(e[3], 0.0);  // 3pi/2 about +x is pi/2 about -x
}

TEST(PoseError, NormInvariantUnderCommonRigidTransform) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const Pose a = random_pose(rng), b = random_pose(rng), t = random_pose(rng);
    EXPECT_NEAR(pose_error(t * a, t * b).norm(), pose_error(a, b).norm(), 1e-12);
  }
}

TEST(ChainReach, BoundsForwardKinematics) {
  EXPECT_DOUBLE_EQ(chain_reach(parse_design("F:0.2,F:0.3")), 0.5);
  EXPECT_DOUBLE_EQ(chain_reach(parse_design("S:0.3")), 0.6);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const auto d = decode_genome(random_genome(rng));
    const Pose p = forward_kinematics(d, Pose::identity(), random_configuration(d, rng));
    EXPECT_LE(p.position.norm(), chain_reach(d) + 1e-9);
  }
}

}  // namespace
}  // namespace morphoforge
