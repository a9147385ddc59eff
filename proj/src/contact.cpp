#include "softhex/contact.hpp"

#include <algorithm>

#include "softhex/errors.hpp"

namespace softhex {

void ContactParams::validate() const {
  if (!(normal_stiffness > 0)) throw ValidationError("normal_stiffness must be positive");
  if (!(normal_damping >= 0)) throw ValidationError("normal_damping must be non-negative");
  if (!std::isfinite(ground_height)) throw ValidationError("ground_height must be finite");
}

ContactForces contact_forces(const FullState& state, const ArmParams& arm,
                             const ContactParams& contact) {
  ContactForces out;
  out.generalized = Vec12::Zero();
  for (int a = 0; a < 3; ++a) {
    out.tip_force[a] = Vec3::Zero();
    const Vec3 tip = tip_world_position(state, arm, a);
    const double depth = contact.ground_height - tip.z();
    if (depth <= 0) continue;
    const Eigen::Matrix<double, 3, 12> j = tip_world_jacobian(state, arm, a);
    const double tip_rate = (j * state.qd).z();
    const double magnitude =
        std::max(0.0, contact.normal_stiffness * depth - contact.normal_damping * tip_rate);
    if (magnitude <= 0) continue;
    out.tip_force[a] = Vec3(0, 0, magnitude);
    out.generalized.noalias() += j.transpose() * out.tip_force[a];
    out.any_active = true;
  }
  return out;
}

double contact_energy(const FullState& state, const ArmParams& arm,
                      const ContactParams& contact) {
  double e = 0;
  for (int a = 0; a < 3; ++a) {
    const double depth = contact.ground_height - tip_world_position(state, arm, a).z();
    if (depth > 0) e += 0.5 * contact.normal_stiffness * depth * depth;
  }
  return e;
}

}  // namespace softhex
