#pragma once

#include <array>

#include <Eigen/Dense>

#include "softhex/spatial.hpp"

namespace softhex {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

// One constant-curvature soft arm: two in-plane segments actuated by a single
// tendon, plus the rotor mass carried at the tip of segment 1.
struct ArmParams {
  double length1 = 0.20;     // m, segment 1 arc length
  double length2 = 0.10;     // m, segment 2 arc length
  double mass1 = 0.05;       // kg, segment 1 (split over its two slider links)
  double mass2 = 0.03;       // kg, segment 2
  double rotor_mass = 0.06;  // kg, propeller + motor at the segment-1 tip
  double stiffness = 0.5;    // N*m/rad elastic restoring per bend angle (0 = off)
  // Structural damping (0 = off). The second-bend apparent inertia is
  // ~2.3e-5 kg*m^2, so the decay rate D/B must stay inside the explicit
  // integrator's stability region at dt = 0.002 s: D <= ~0.03.
  double damping = 0.005;    // N*m*s/rad
  double max_angle = M_PI;   // rad, |q_j| limit enforced by the simulation guard

  void validate() const;
  double segment_length(int segment) const { return segment == 0 ? length1 : length2; }
};

// In-plane pose of a constant-curvature segment tip: rotation by the bend
// angle q, translation [L sin(q)/q, L (1 - cos q)/q]. Continuous through
// q = 0 via series expansion.
PlanarTransform pcc_transform(double q, double L);

// d/dq of the planar tip translation (x, y).
Vec2 pcc_endpoint_rate(double q, double L);

// Half chord of the arc: f(q) = L sin(q/2)/q, the slider-link extension of
// the 4-joint rigid chain that replicates the segment.
double chord_half(double q, double L);

// d f/d q, with limit -L q/24 at q -> 0.
double chord_half_rate(double q, double L);

// Rigid-chain joint values replicating one segment: [q/2, f(q), f(q), q/2]
// (rotate half the bend, slide along the chord twice, rotate the other half).
Eigen::Vector4d augmented_map(double q, double L);

// d augmented_map / d q = [1/2, f'(q), f'(q), 1/2].
Eigen::Vector4d jacobian_m_segment(double q, double L);

// Standard Denavit-Hartenberg link transform: RotZ(theta) TransZ(d) TransX(a) RotX(alpha).
Mat4 dh_link(double a, double alpha, double d, double theta);

// The four link transforms of one segment's equivalent rigid chain, evaluated
// at the on-manifold joint values augmented_map(q, L).
std::array<Mat4, 4> dh_chain(double q, double L);

// Frames of the full 8-joint arm chain (two segments) at arbitrary joint
// values xi, expressed in the arm-local frame (x outward along the straight
// arm, z the bending direction). frames[0] is the fixed bending-plane prefix;
// frames[k] follows link k.
struct ChainFrames {
  std::array<Mat4, 9> frames;
};
ChainFrames chain_frames(const Vec8& xi, const ArmParams& params);

// Positional Jacobian (w.r.t. the 8 chain joints) of a point rigidly attached
// to frame `frame_index`, currently at arm-local position `point`.
Eigen::Matrix<double, 3, 8> chain_point_jacobian(const ChainFrames& chain,
                                                 int frame_index,
                                                 const Vec3& point);

// Stacked on-manifold joint values for both segments (8-vector).
Vec8 arm_augmented_state(const Vec2& q, const ArmParams& params);

// 8x2 block-diagonal Jacobian of arm_augmented_state w.r.t. (q1, q2).
Eigen::Matrix<double, 8, 2> arm_jacobian_m(const Vec2& q, const ArmParams& params);

// Mass model of the equivalent chain: each segment's mass split equally over
// its two slider-link frames, rotor mass added at the segment-1 tip.
struct ArmMassPoint {
  int frame_index;  // chain frame the point rides on
  double mass;      // kg
};
std::array<ArmMassPoint, 4> arm_mass_points(const ArmParams& params);

// Point-mass kinematics of one arm in arm-local coordinates: positions and
// (q1, q2)-Jacobians of the four mass points, the end effector, and the
// transverse (bending-plane) tip deflection used as the controlled scalar.
struct ArmKinematics {
  std::array<Vec3, 4> mass_positions;
  std::array<Eigen::Matrix<double, 3, 2>, 4> mass_jacobians;
  std::array<double, 4> masses;
  Vec3 tip;
  Eigen::Matrix<double, 3, 2> tip_jacobian;
  double lateral;  // transverse tip deflection == tip.z() in arm-local frame
  Eigen::Matrix<double, 1, 2> lateral_jacobian;
};
ArmKinematics arm_kinematics(const Vec2& q, const ArmParams& params);

// Mass matrix of the free 8-joint chain (point-mass model).
Mat8 augmented_mass_matrix(const Vec8& xi, const ArmParams& params);

// Gravity generalized forces of the free chain; gravity given in arm-local frame.
Vec8 augmented_gravity(const Vec8& xi, const ArmParams& params, const Vec3& gravity_local);

// Projected two-coordinate arm dynamics on the constant-curvature manifold:
// B(q) = Jm^T B_xi Jm, C from the Christoffel symbols of B(q) (central
// differences), g = Jm^T g_xi. Fixed base at the given orientation; gravity
// expressed in the arm-local frame.
struct ArmDynamics {
  Eigen::Matrix2d B;
  Eigen::Matrix2d C;
  Vec2 g;
};
ArmDynamics arm_dynamics(const Vec2& q, const Vec2& qd, const ArmParams& params,
                         const Vec3& gravity_local);

}  // namespace softhex
