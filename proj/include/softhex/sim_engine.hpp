#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "softhex/contact.hpp"
#include "softhex/controller.hpp"
#include "softhex/dynamics.hpp"
#include "softhex/trajectory.hpp"

namespace softhex {

// Everything the plant and controller need, bundled for the run loop.
struct WorldParams {
  ArmParams arm;
  PlatformParams plat;
  PropellerParams prop;
  ContactParams contact;
  Gains gains;

  void validate() const;
};

// Per-rotor cost model integrated over the run: induced power (f^{3/2},
// momentum theory) or plain thrust-time (f). Normalized results are
// insensitive to the proportionality constant, which is therefore 1.
enum class EnergyMetric { kInduced, kThrust };

double energy_integrand(const Vec9& u, EnergyMetric metric);

struct SimConfig {
  double dt = 0.002;                      // s
  double duration = 10.0;                 // s
  int log_every = 1;                      // steps between log rows
  double pitch_guard = 75.0 * M_PI / 180; // rad, abort beyond this pitch
  EnergyMetric energy_metric = EnergyMetric::kInduced;

  void validate() const;
};

// One log sample. CSV column order (bit-exact):
//   t, p_B(3), quat(w,x,y,z), v_B(3), omega_B(3), q_arm(6), qd_arm(6),
//   u(9), f_contact(3 tips x 3), e_p(3), e_R_angle, energy_integrand
struct LogRow {
  double t = 0;
  Vec3 p_B = Vec3::Zero();
  double quat[4] = {1, 0, 0, 0};  // w, x, y, z
  Vec3 v_B = Vec3::Zero();
  Vec3 omega_B = Vec3::Zero();
  Vec6 q_arm = Vec6::Zero();
  Vec6 qd_arm = Vec6::Zero();
  Vec9 u = Vec9::Zero();
  double f_contact[9] = {0};
  Vec3 e_p = Vec3::Zero();
  double e_R_angle = 0;
  double energy_integrand = 0;

  bool contact_active() const;
};

struct SimLog {
  std::vector<LogRow> rows;
  int total_saturations = 0;  // thrust-clamp events over the whole run

  // Trapezoidal integral of the energy integrand over rows with t >= t_start.
  double energy(double t_start = 0) const;
  // Maximal intervals [t_begin, t_end] with any tip contact force > 0.
  // Contact-free gaps shorter than merge_gap are absorbed: a stance that
  // rolls the load from tip to tip drops contact for a few milliseconds at
  // each handover, and those gaps belong to the same stance event.
  std::vector<std::pair<double, double>> stance_intervals(double merge_gap = 0) const;
  double peak_position_error() const;
  // Largest attitude error (radians) and the time it occurs.
  double peak_attitude_error(double* t_peak = nullptr) const;
  // Max position error over the second half of every contact-free interval
  // at least min_interval long (settling metric: excludes the error carried
  // across a liftoff, and brief gaps inside a stance scramble).
  double flight_position_error(double min_interval = 0) const;
  void write_csv(std::ostream& os) const;
};

// One classical 4th-order step with the input held constant; contact and the
// state-dependent input map are evaluated inside every stage. Throws
// NumericalError when the result is non-finite or violates the pitch/arm
// angle guards, with the last valid state in the message.
FullState step(const FullState& state, const Vec9& u, double dt, const WorldParams& world,
               double pitch_guard = 75.0 * M_PI / 180);

// Closed-loop rollout: at every step the reference is sampled, the control
// law runs, and the state advances by dt. Logs rows at t = 0, log_every*dt,
// ... and the final time. Integration/controller failures are rethrown with
// the simulation time prepended.
using ReferenceFn = std::function<TrajectorySample(double)>;
SimLog simulate(const FullState& x0, const ReferenceFn& ref, const WorldParams& world,
                const SimConfig& sim);

// ---------------------------------------------------------------------------
// Experiments

struct HoverRunResult {
  SimLog log;
  HoverTrim trim;
  double final_error = 0;    // ||e_p|| at the end
  double settle_time = 0;    // first time after which ||e_p|| stays < 1 mm
};

// Regulation experiment: trim at `position`, displace the start by `offset`,
// hold the trim reference.
HoverRunResult run_hover_regulation(const WorldParams& world, const SimConfig& sim,
                                    const Vec3& position, const Vec3& offset,
                                    double q1_ref = -0.5);

// Arms working as springy legs: ground reactions of tens of newtons act on
// the free bending direction, which only the spring restrains, so the
// locomotion experiments run much stiffer bending springs than the bare-arm
// default.
inline WorldParams jumping_world() {
  WorldParams w;
  w.arm.stiffness = 12.0;
  w.arm.damping = 0.01;
  // Contact torques kick the attitude at every touchdown and the error must
  // die out within a flight arc (~0.3 s), so the pose loops run much faster
  // than the hover defaults.
  w.gains.k_p = Vec3::Constant(16);
  w.gains.k_v = Vec3::Constant(9);
  w.gains.k_R = Vec3::Constant(40);
  w.gains.k_omega = Vec3::Constant(13);
  w.contact.normal_damping = 15;
  return w;
}

// The velocity-aligned attitude pitches the nose into the descent, so the
// stance must roll the contact from the leading tip to the trailing ones:
// forward travel during the stance has to cover the tip-hang swing of the
// pitch sweep. A brisk forward speed also keeps that sweep shallow, which
// matters because free-fall arcs leave the rotors idling near zero thrust
// with almost no torque authority; the low apex and the long lead-in keep
// the hardest morphing factors (touchdown speed grows with the morphing
// factor) inside what the legs and the idle-arc attitude authority absorb.
inline TrajectoryParams jumping_trajectory() {
  TrajectoryParams t;
  t.forward_speed = 3.0;
  t.stance_duration = 0.45;
  t.apex_height = 0.03;
  t.lead_in = 2.5;
  return t;
}

struct JumpConfig {
  WorldParams world = jumping_world();
  TrajectoryParams traj = jumping_trajectory();
  SimConfig sim;
  double q1_ref = -0.5;           // arm bend held by the tip task
  double ground_clearance = 0.012;  // m, leading-tip height above ground at touchdown
  bool auto_cruise_height = true;   // size traj.cruise_height from the touchdown-attitude hang
  bool auto_stance_depth = true;    // size traj.stance_depth to keep pressing as the pitch levels
  double stance_press = 0.005;      // m, reference press into the ground at mid-stance
  // Extra press per unit of touchdown speed. A faster fall carries more
  // momentum to absorb, so the legs are loaded deeper before the reversal;
  // level gaits keep only the fixed press and stay on rotor tracking.
  double stance_press_per_speed = 0.03;  // m per m/s
};

struct JumpSummary {
  double peak_position_error = 0;
  double peak_attitude_error = 0;       // rad
  double peak_attitude_error_time = 0;  // s
  bool attitude_peak_in_stance = false;
  double flight_position_error = 0;
  std::vector<std::pair<double, double>> stance_intervals;  // merged stance events
  int hops = 0;             // detected stance events
  double energy = 0;        // over the whole log
  double energy_cyclic = 0; // over t >= lead_in (steady bouncing cost)
  int total_saturations = 0;
};

JumpSummary summarize_jump(const SimLog& log, const TrajectoryParams& traj);

struct JumpResult {
  SimLog log;
  JumpSummary summary;
  HoverTrim trim;
  TrajectoryParams traj;  // as actually flown (resolved cruise height / arm ref)
};

// Closed-loop bouncing run: trim the platform, align the trajectory altitude
// so the tips graze the ground with the configured clearance, start at the
// trajectory origin, and track it for sim.duration.
JumpResult run_jump_experiment(const JumpConfig& cfg);

struct SweepRow {
  double gamma = 0;
  bool ok = false;
  std::string error;
  double energy = 0;      // cyclic window (t >= lead_in)
  double normalized = 0;  // E(gamma)/E(0); NaN when no gamma = 0 baseline
  double vs_hover = 0;    // E(gamma)/E_hover over the same window
  JumpSummary summary;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double hover_power = 0;  // constant trim integrand (energy per second)
};

// Runs the jump experiment over the morphing factors (concurrently; one
// failure is recorded in its row without aborting the others).
SweepResult gravity_sweep(const JumpConfig& base, const std::vector<double>& gammas);

void write_sweep_csv(const SweepResult& sweep, std::ostream& os);

}  // namespace softhex
