#pragma once

#include <array>

#include <Eigen/Dense>

#include "softhex/pcc_arm.hpp"
#include "softhex/spatial.hpp"
#include "softhex/state.hpp"

namespace softhex {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using MatG = Eigen::Matrix<double, 12, 9>;

// Rotor ring: six tilted propellers, odd indices carried by the soft arms,
// even indices on rigid arms, alternating spin direction (-1)^(i-1).
struct PropellerParams {
  double tilt = 20.0 * M_PI / 180.0;  // rad, cant angle about each arm axis
  double arm_length = 0.30;           // m, rigid-arm rotor radius
  double drag_to_thrust = 0.016;      // m, aerodynamic drag torque per thrust
  double thrust_coefficient = 1e-5;   // N s^2, f = c_f * spin^2 (log reporting)
  double max_thrust = 8.0;            // N, per-rotor saturation bound

  void validate() const;
};

// Azimuth of propeller i (1-based): (i-1)*pi/3 around the body z axis.
double propeller_azimuth(int index);

// Body-frame pose of propeller i. Soft-arm rotors (odd i) ride the tip of
// their arm's first segment and tilt with the bend angle q1; rigid rotors
// (even i) sit at arm_length with the opposite cant sign.
struct PropellerPose {
  Mat3 rotation;  // thrust axis = rotation * e_z
  Vec3 position;  // m, from the base origin
};
PropellerPose propeller_pose(int index, const std::array<Vec2, 3>& arm_q,
                             const ArmParams& arm, const PropellerParams& prop);

// Per-unit-thrust body-frame wrench maps: force directions F1 and moment
// columns F2 (lever arm plus signed drag torque), both 3x6.
struct WrenchMaps {
  Eigen::Matrix<double, 3, 6> F1;
  Eigen::Matrix<double, 3, 6> F2;
};
WrenchMaps wrench_maps(const std::array<Vec2, 3>& arm_q, const ArmParams& arm,
                       const PropellerParams& prop);

// Total thrust wrench: world-frame force and body-frame torque.
struct ThrustWrench {
  Vec3 force_world;
  Vec3 torque_body;
};
ThrustWrench thrust_wrench(const Vec6& thrusts, const std::array<Vec2, 3>& arm_q,
                           const Mat3& base_rotation, const ArmParams& arm,
                           const PropellerParams& prop);

// Generalized-force map G (12x9) for inputs u = [f_1..f_6, tau_1..tau_3]:
// force rows R_B * F1, attitude rows Q^T * F2, arm rows from each soft
// rotor's point Jacobian; tendon columns distribute unit torque uniformly
// over the arm's rotational chain joints, projected through Jm^T.
MatG input_map(const FullState& state, const ArmParams& arm, const PropellerParams& prop);

// Arm angles packed per arm from the generalized coordinates.
std::array<Vec2, 3> arm_angles(const FullState& state);

}  // namespace softhex
