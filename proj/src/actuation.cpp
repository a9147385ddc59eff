#include "softhex/actuation.hpp"

#include <cmath>
#include <string>

#include "softhex/errors.hpp"

namespace softhex {

void PropellerParams::validate() const {
  if (tilt < 0 || tilt >= M_PI / 2) {
    throw ValidationError("PropellerParams: tilt must be in [0, pi/2)");
  }
  if (!(arm_length > 0)) {
    throw ValidationError("PropellerParams: arm_length must be > 0");
  }
  if (drag_to_thrust < 0) {
    throw ValidationError("PropellerParams: drag_to_thrust must be >= 0");
  }
  if (!(thrust_coefficient > 0)) {
    throw ValidationError("PropellerParams: thrust_coefficient must be > 0");
  }
  if (!(max_thrust > 0)) {
    throw ValidationError("PropellerParams: max_thrust must be > 0");
  }
}

namespace {

void check_index(int index) {
  if (index < 1 || index > 6) {
    throw ValidationError("propeller index must be 1..6, got " + std::to_string(index));
  }
}

double spin_sign(int index) { return (index % 2 == 1) ? 1.0 : -1.0; }  // (-1)^(i-1)

}  // namespace

double propeller_azimuth(int index) {
  check_index(index);
  return (index - 1) * M_PI / 3.0;
}

PropellerPose propeller_pose(int index, const std::array<Vec2, 3>& arm_q,
                             const ArmParams& arm, const PropellerParams& prop) {
  check_index(index);
  const Mat3 az = rot_z(propeller_azimuth(index));
  PropellerPose pose;
  if (index % 2 == 1) {
    const double q1 = arm_q[(index - 1) / 2](0);
    const PlanarTransform seg = pcc_transform(q1, arm.length1);
    pose.rotation = az * rot_y(q1) * rot_x(-prop.tilt);
    pose.position = az * Vec3(seg.translation.x(), 0, seg.translation.y());
  } else {
    pose.rotation = az * rot_x(prop.tilt);
    pose.position = az * Vec3(prop.arm_length, 0, 0);
  }
  return pose;
}

WrenchMaps wrench_maps(const std::array<Vec2, 3>& arm_q, const ArmParams& arm,
                       const PropellerParams& prop) {
  WrenchMaps maps;
  for (int i = 1; i <= 6; ++i) {
    const PropellerPose pose = propeller_pose(i, arm_q, arm, prop);
    const Vec3 dir = pose.rotation.col(2);  // unit thrust direction
    maps.F1.col(i - 1) = dir;
    maps.F2.col(i - 1) = pose.position.cross(dir) + spin_sign(i) * prop.drag_to_thrust * dir;
  }
  return maps;
}

ThrustWrench thrust_wrench(const Vec6& thrusts, const std::array<Vec2, 3>& arm_q,
                           const Mat3& base_rotation, const ArmParams& arm,
                           const PropellerParams& prop) {
  const WrenchMaps maps = wrench_maps(arm_q, arm, prop);
  ThrustWrench w;
  w.force_world = base_rotation * (maps.F1 * thrusts);
  w.torque_body = maps.F2 * thrusts;
  return w;
}

std::array<Vec2, 3> arm_angles(const FullState& state) {
  return {Vec2(state.arm(0)), Vec2(state.arm(1)), Vec2(state.arm(2))};
}

MatG input_map(const FullState& state, const ArmParams& arm, const PropellerParams& prop) {
  const std::array<Vec2, 3> q = arm_angles(state);
  const WrenchMaps maps = wrench_maps(q, arm, prop);
  const Mat3 r_base = rpy_rotation(state.rpy());
  const Mat3 rate_map = euler_rate_map(state.rpy());

  MatG g = MatG::Zero();
  g.block<3, 6>(0, 0) = r_base * maps.F1;
  g.block<3, 6>(3, 0) = rate_map.transpose() * maps.F2;

  // Soft rotors bend their carrying arm: arm rows of thrust columns are the
  // rotor-point Jacobian (body frame) against the thrust direction.
  for (int a = 0; a < 3; ++a) {
    const int i = 2 * a + 1;
    const Mat3 az = rot_z(propeller_azimuth(i));
    const Vec2 rate = pcc_endpoint_rate(q[a](0), arm.length1);
    const Vec3 dp_dq1 = az * Vec3(rate.x(), 0, rate.y());
    const Vec3 dir = maps.F1.col(i - 1);
    g(6 + 2 * a, i - 1) = dp_dq1.dot(dir);  // q2 row stays zero: rotor rides segment 1
  }

  // Tendon columns: unit torque spread uniformly over the arm's rotational
  // chain joints, pulled back through Jm^T.
  for (int a = 0; a < 3; ++a) {
    Vec8 tau_xi = Vec8::Zero();
    tau_xi(0) = tau_xi(3) = tau_xi(4) = tau_xi(7) = 1.0;
    g.block<2, 1>(6 + 2 * a, 6 + a) = arm_jacobian_m(q[a], arm).transpose() * tau_xi;
  }
  return g;
}

}  // namespace softhex
