#pragma once

#include <Eigen/Dense>

#include "softhex/actuation.hpp"
#include "softhex/dynamics.hpp"
#include "softhex/state.hpp"
#include "softhex/trajectory.hpp"

namespace softhex {

// Diagonal tracking gains of the pose loop plus the scalar arm-task gains.
struct Gains {
  Vec3 k_p = Vec3(9, 9, 9);
  Vec3 k_v = Vec3(6, 6, 6);
  Vec3 k_R = Vec3(12, 12, 12);
  Vec3 k_omega = Vec3(7, 7, 7);
  double k_p_arm = 120;
  double k_d_arm = 12;

  void validate() const;
};

struct PoseErrors {
  Vec3 e_p;           // p_d - p_B
  Vec3 e_v;           // v_d - v_B
  Vec3 e_R;           // 1/2 vee(R_B^T R_d - R_d^T R_B)
  Vec3 e_omega;       // R_B^T R_d omega_d - omega_B
  Vec3 omega_dot_ff;  // d/dt (R_B^T R_d omega_d): the mapped-rate feedforward
};
PoseErrors pose_errors(const FullState& state, const TrajectorySample& sample);

// Rotation error magnitude as an angle (radians): asin of the clamped norm of
// e_R, exact for errors up to 90 degrees.
double attitude_error_angle(const Vec3& e_R);

struct VirtualAccelerations {
  Vec3 nu_p;  // k_p e_p + k_v e_v + a_d
  Vec3 nu_R;  // k_R e_R + k_omega e_omega + omega_dot_ff (angular acceleration demand)
};
VirtualAccelerations virtual_accelerations(const PoseErrors& errors,
                                           const TrajectorySample& sample, const Gains& gains);

// Scalar transverse-tip task per arm: k_p_arm (lat_ref - lat) - k_d_arm lat_rate.
Vec3 arm_errors(const FullState& state, const TrajectorySample& sample, const Gains& gains,
                const ArmParams& arm);

struct ControlInput {
  Vec9 u = Vec9::Zero();           // [f1..f6 (N), tendon torques (N*m)]
  int saturation_count = 0;        // thrust entries clamped to [0, f_max]
  double min_singular_value = 0;   // of the input map at this state
  Vec12 nu_full = Vec12::Zero();   // assembled acceleration demand (diagnostics)
};

// Model-based tracking law: assemble the 12-dim acceleration demand (position
// block, attitude demand mapped to Euler-angle accelerations, each scalar arm
// task lifted through the damped pseudoinverse of its lateral Jacobian row),
// then u = pinv(G) (B nu + C qd + g + elastic + damping), thrusts saturated
// to [0, f_max]. Throws AllocationError when G is numerically rank-deficient.
ControlInput control_law(const FullState& state, const TrajectorySample& sample,
                         const Gains& gains, const ArmParams& arm, const PlatformParams& plat,
                         const PropellerParams& prop);

// Static equilibrium at a level attitude: solve for thrusts/tendon inputs and
// the arm rest shape such that G u balances gravity plus the arm springs
// exactly, with the first bend angle of every arm pinned to q1_ref. Newton
// iteration on (u, q_arm); throws NumericalError if it fails to converge.
struct HoverTrim {
  Vec9 u;
  FullState state;      // trim posture at the requested position, zero rates
  double residual;      // ||G u - g_total|| at the solution
  int iterations;
  double arm_lateral;   // transverse tip coordinate of the trim arm shape
};
HoverTrim hover_trim(const Vec3& position, double q1_ref, const ArmParams& arm,
                     const PlatformParams& plat, const PropellerParams& prop);

}  // namespace softhex
