#pragma once

#include <Eigen/Dense>

#include "softhex/spatial.hpp"

namespace softhex {

using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

// Generalized coordinates of the composite platform:
//   q = [base position (world), roll-pitch-yaw, q1/q2 of arms 1..3]
// Attitude uses the Z-Y-X convention: R = rot_z(yaw) rot_y(pitch) rot_x(roll).
struct FullState {
  Vec12 q = Vec12::Zero();
  Vec12 qd = Vec12::Zero();

  Eigen::Ref<const Vec3> position() const { return q.segment<3>(0); }
  Eigen::Ref<const Vec3> rpy() const { return q.segment<3>(3); }
  Eigen::Ref<const Vec2> arm(int a) const { return q.segment<2>(6 + 2 * a); }
  Eigen::Ref<const Vec3> velocity() const { return qd.segment<3>(0); }
  Eigen::Ref<const Vec3> rpy_rate() const { return qd.segment<3>(3); }
  Eigen::Ref<const Vec2> arm_rate(int a) const { return qd.segment<2>(6 + 2 * a); }
};

// World-frame attitude from roll-pitch-yaw.
Mat3 rpy_rotation(const Vec3& rpy);

// Body angular velocity map: omega_B = euler_rate_map(rpy) * rpy_dot.
// Singular at |pitch| = pi/2; the simulation guard keeps pitch well away.
Mat3 euler_rate_map(const Vec3& rpy);

// Time derivative of euler_rate_map along rpy_dot.
Mat3 euler_rate_map_derivative(const Vec3& rpy, const Vec3& rpy_dot);

// Derived rigid-body view of the base.
struct BodyState {
  Vec3 position;
  Mat3 rotation;
  Vec3 velocity;    // world frame
  Vec3 omega_body;  // body frame
};
BodyState body_state(const FullState& state);

}  // namespace softhex
