#pragma once

#include <array>

#include <Eigen/Dense>

#include "softhex/dynamics.hpp"
#include "softhex/pcc_arm.hpp"
#include "softhex/state.hpp"

namespace softhex {

// Frictionless penalty ground: a vertical spring-damper pushes each arm tip
// out of the half-space z < ground_height. The force never pulls.
struct ContactParams {
  double ground_height = 0.0;      // m
  double normal_stiffness = 5000;  // N/m
  // The apparent mass at a tip is ~0.02 kg, so the contact decay rate d_n/m
  // must stay inside the explicit integrator's stability region at
  // dt = 0.002 s: d_n <= ~25. 5 gives a contact damping ratio of ~0.26.
  double normal_damping = 5;       // N*s/m

  void validate() const;
};

struct ContactForces {
  std::array<Vec3, 3> tip_force;  // world frame, one per arm tip
  Vec12 generalized;              // sum of J_tip^T f over the arms
  bool any_active = false;
};

ContactForces contact_forces(const FullState& state, const ArmParams& arm,
                             const ContactParams& contact);

// Elastic energy stored in the penalty springs (damping excluded), for energy
// bookkeeping in conservative test setups.
double contact_energy(const FullState& state, const ArmParams& arm, const ContactParams& contact);

}  // namespace softhex
