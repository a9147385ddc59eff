#pragma once

#include <Eigen/Dense>

#include "softhex/pcc_arm.hpp"
#include "softhex/spatial.hpp"
#include "softhex/state.hpp"

namespace softhex {

// Rigid hexarotor hub the three soft arms attach to. gravity_fraction scales
// the ambient field (1 = Earth, 0 = free space) without touching the nominal
// constant used elsewhere for normalization.
struct PlatformParams {
  double base_mass = 1.2;                        // kg
  Vec3 base_inertia = Vec3(0.012, 0.012, 0.020);  // kg*m^2, principal, body axes
  double gravity = 9.81;                          // m/s^2
  double gravity_fraction = 1.0;

  void validate() const;
  double effective_gravity() const { return gravity * gravity_fraction; }
};

// Mount azimuth of soft arm a (0..2) about the body z axis. The soft arms sit
// on the odd rotor rays: 0, 120, 240 degrees.
double arm_azimuth(int arm_index);

// Positional Jacobian (3x12) of a body-frame point p riding arm `arm_index`
// (jac_local = d p / d q_arm in the body frame), mapped to world coordinates:
//   v_world = J * qd,  J = [I | -R [p]x Q | R jac_local].
// Pass arm_index < 0 for a point rigid to the base (no arm columns).
Eigen::Matrix<double, 3, 12> point_world_jacobian(const FullState& state, const Vec3& p_body,
                                                  const Eigen::Matrix<double, 3, 2>& jac_local,
                                                  int arm_index);

// Composite mass matrix (12x12, symmetric positive definite): hub translation
// and rotation plus the point-mass arms.
Mat12 mass_matrix(const FullState& state, const ArmParams& arm, const PlatformParams& plat);

// Coriolis/centrifugal matrix from the Christoffel symbols of the mass
// matrix, central differences in the non-translational coordinates (the mass
// matrix is translation invariant). Satisfies the skew symmetry of Bdot - 2C.
Mat12 coriolis_matrix(const FullState& state, const ArmParams& arm, const PlatformParams& plat);

// Generalized gravity forces (gradient of the potential).
Vec12 gravity_forces(const FullState& state, const ArmParams& arm, const PlatformParams& plat);

// Arm elastic restoring and structural damping, as generalized forces on the
// left-hand side (resist deflection / motion).
Vec12 elastic_forces(const FullState& state, const ArmParams& arm);
Vec12 damping_forces(const FullState& state, const ArmParams& arm);

double kinetic_energy(const FullState& state, const ArmParams& arm, const PlatformParams& plat);
double potential_energy(const FullState& state, const ArmParams& arm, const PlatformParams& plat);
double elastic_energy(const FullState& state, const ArmParams& arm);

struct FullDynamics {
  Mat12 B;  // mass matrix
  Mat12 C;  // Coriolis matrix
  Vec12 g;  // gravity forces
};
FullDynamics full_dynamics(const FullState& state, const ArmParams& arm,
                           const PlatformParams& plat);

// Arm tip (end effector) in world coordinates, and its 3x12 Jacobian.
Vec3 tip_world_position(const FullState& state, const ArmParams& arm, int arm_index);
Eigen::Matrix<double, 3, 12> tip_world_jacobian(const FullState& state, const ArmParams& arm,
                                                int arm_index);

// Joint accelerations under the applied generalized force (actuation plus
// contact), with gravity, Coriolis, elastic and damping terms internal:
//   B qdd = applied - C qd - g - K q_arm - D qd_arm.
// Throws NumericalError if the mass matrix is numerically singular.
Vec12 forward_dynamics(const FullState& state, const Vec12& applied, const ArmParams& arm,
                       const PlatformParams& plat);

}  // namespace softhex
