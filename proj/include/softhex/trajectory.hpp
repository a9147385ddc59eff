#pragma once

#include <vector>

#include <Eigen/Dense>

#include "softhex/spatial.hpp"

namespace softhex {

// Bouncing-ball-inspired reference: ballistic arcs (vertical acceleration
// -g_frac*g) joined by a soft stance compression, ridden at constant forward
// speed. Phase joints are C1 (position and velocity continuous; the vertical
// acceleration steps at touchdown and liftoff, like a ball meeting the
// ground). The level lead-in hands over to the first arc through a one-time
// jerk ramp, so the only acceleration steps are the contact events
// themselves. g_frac = 0 degenerates to pure level translation.
struct TrajectoryParams {
  double apex_height = 0.05;     // m, hop apex above cruise_height (fixed across g_frac)
  double stance_duration = 0.15; // s
  double stance_depth = 0.05;    // m, compression at mid-stance
  double ramp_duration = 0.06;   // s, one-time jerk ramp from cruise into the first arc
  double forward_speed = 1.0;    // m/s, authoritative (hop length follows)
  double g_frac = 0.3;           // morphing factor in [0, 1]
  double cruise_height = 0.25;   // m, base altitude at touchdown/liftoff
  double lead_in = 1.0;          // s, level velocity ramp before the first hop
  double gravity = 9.81;         // m/s^2
  int n_hops = 8;                // sizes the default horizon of generate()
  double arm_lateral_ref = 0;    // m, transverse arm-tip hold target, passed through

  void validate() const;
  // Ballistic flight time of one hop: 2 sqrt(2 apex_height / (g_frac g)).
  // Infinite at g_frac = 0.
  double airborne_duration() const;
  double cycle_duration() const;  // airborne + stance
  // Vertical speed when an arc meets the stance: sqrt(2 g_frac g apex_height).
  double touchdown_speed() const;
  // Peak compression of the stance profile. Equals stance_depth unless the
  // depth is set below half the slope-matched sine dip, whose shoulders then
  // dip deeper than the midpoint.
  double max_stance_dip() const;
  // First time the reference meets the ground plane: the jerk ramp enters the
  // first arc mid-flight, half an airborne phase less half a ramp before
  // touchdown. Infinite at g_frac = 0.
  double first_touchdown_time() const;
  double hop_length() const;  // forward_speed * cycle_duration
};

// phase codes in TrajectorySample
enum class TrajectoryPhase { kLevel = 0, kDescent = 1, kStance = 2, kAscent = 3 };

struct TrajectorySample {
  double t = 0;
  Vec3 p_d = Vec3::Zero();
  Vec3 v_d = Vec3::Zero();
  Vec3 a_d = Vec3::Zero();
  Mat3 R_d = Mat3::Identity();
  Vec3 omega_d = Vec3::Zero();      // desired body frame
  Vec3 omega_dot_d = Vec3::Zero();  // desired body frame
  double arm_lateral_ref = 0;
  TrajectoryPhase phase = TrajectoryPhase::kLevel;
  bool orientation_fallback = false;  // near-zero speed: orientation held at identity
};

// Velocity-aligned desired attitude: x along v, z from x cross e_y
// (normalized), y = z cross x for a right-handed frame. Near-zero or
// e_y-parallel velocity falls back to identity.
Mat3 desired_orientation(const Vec3& v);

// Closed-form reference at time t (exact derivatives; C2 inside phases, C1 at
// the contact joints).
TrajectorySample sample_trajectory(const TrajectoryParams& params, double t);

// Uniform sampling at dt. duration <= 0 sizes the horizon from n_hops.
std::vector<TrajectorySample> generate(const TrajectoryParams& params, double dt,
                                       double duration = -1);

}  // namespace softhex
