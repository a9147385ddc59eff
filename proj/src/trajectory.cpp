#include "softhex/trajectory.hpp"

#include <cmath>
#include <limits>

#include "softhex/errors.hpp"

namespace softhex {

namespace {
constexpr double kSpeedEpsilon = 1e-9;  // m/s, below this the frame is held at identity
}

void TrajectoryParams::validate() const {
  if (!(apex_height > 0)) throw ValidationError("apex_height must be positive");
  if (!(stance_duration > 0)) throw ValidationError("stance_duration must be positive");
  if (!(stance_depth > 0)) throw ValidationError("stance_depth must be positive");
  if (!(ramp_duration > 0)) throw ValidationError("ramp_duration must be positive");
  if (!(forward_speed > 0)) throw ValidationError("forward_speed must be positive");
  if (!(g_frac >= 0 && g_frac <= 1)) throw ValidationError("g_frac must lie in [0, 1]");
  if (!(cruise_height > 0)) throw ValidationError("cruise_height must be positive");
  if (!(lead_in > ramp_duration)) {
    throw ValidationError("lead_in must exceed ramp_duration (the hand-over ramp runs inside it)");
  }
  if (!(gravity > 0)) throw ValidationError("gravity must be positive");
  if (n_hops < 1) throw ValidationError("n_hops must be at least 1");
  if (g_frac > 0) {
    if (!(ramp_duration < airborne_duration())) {
      throw ValidationError(
          "ramp_duration must be shorter than the airborne duration (the hand-over ramp must "
          "end inside the first arc)");
    }
    if (!(cruise_height > max_stance_dip())) {
      throw ValidationError("cruise_height must exceed the stance dip (it would cross the ground)");
    }
  }
}

double TrajectoryParams::airborne_duration() const {
  if (g_frac == 0) return std::numeric_limits<double>::infinity();
  return 2 * std::sqrt(2 * apex_height / (g_frac * gravity));
}

double TrajectoryParams::cycle_duration() const {
  return airborne_duration() + stance_duration;
}

double TrajectoryParams::touchdown_speed() const {
  return std::sqrt(2 * g_frac * gravity * apex_height);
}

double TrajectoryParams::max_stance_dip() const {
  if (g_frac == 0) return 0;
  const double slope_amp = touchdown_speed() * stance_duration / M_PI;
  if (stance_depth >= 0.5 * slope_amp) return stance_depth;
  return slope_amp * slope_amp / (4 * (slope_amp - stance_depth));
}

double TrajectoryParams::first_touchdown_time() const {
  if (g_frac == 0) return std::numeric_limits<double>::infinity();
  return lead_in + 0.5 * (airborne_duration() - ramp_duration);
}

double TrajectoryParams::hop_length() const { return forward_speed * cycle_duration(); }

Mat3 desired_orientation(const Vec3& v) {
  const double n = v.norm();
  if (n < kSpeedEpsilon) return Mat3::Identity();
  const Vec3 x = v / n;
  Vec3 z = x.cross(Vec3::UnitY());
  const double zn = z.norm();
  if (zn < kSpeedEpsilon) return Mat3::Identity();  // velocity along e_y: frame undefined
  z /= zn;
  const Vec3 y = z.cross(x);
  Mat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return r;
}

TrajectorySample sample_trajectory(const TrajectoryParams& params, double t) {
  TrajectorySample out;
  out.t = t;
  out.arm_lateral_ref = params.arm_lateral_ref;

  // Forward motion: smoothstep velocity ramp over the lead-in, then constant.
  double x, vx, ax, jx;
  if (t < params.lead_in) {
    const double u = t / params.lead_in;
    x = params.forward_speed * params.lead_in * (u * u * u - 0.5 * u * u * u * u);
    vx = params.forward_speed * u * u * (3 - 2 * u);
    ax = params.forward_speed * 6 * u * (1 - u) / params.lead_in;
    jx = params.forward_speed * 6 * (1 - 2 * u) / (params.lead_in * params.lead_in);
  } else {
    x = params.forward_speed * (t - 0.5 * params.lead_in);
    vx = params.forward_speed;
    ax = 0;
    jx = 0;
  }

  // Vertical motion. The cruise altitude sits a hair above the hop apex so
  // that a jerk ramp (acceleration 0 -> -g_eff over ramp_duration, ending at
  // t = lead_in) drops the reference exactly onto the first arc, half a ramp
  // past its apex. From there the cycle is ballistic arcs of constant
  // acceleration -g_eff joined by stance compressions: a slope-matched sine
  // dip riding with touchdown speed v0, plus a sine-squared term steering the
  // midpoint to stance_depth without touching the entry/exit slopes.
  const double g_eff = params.g_frac * params.gravity;
  const double t_j = params.ramp_duration;
  const double alt_lead =
      params.cruise_height + params.apex_height + g_eff * t_j * t_j / 24;
  double z = alt_lead, vz = 0, az = 0, jz = 0;
  out.phase = TrajectoryPhase::kLevel;
  if (params.g_frac > 0 && t >= params.lead_in - t_j) {
    if (t < params.lead_in) {  // one-time hand-over ramp into the first arc
      const double s = t - (params.lead_in - t_j);
      jz = -g_eff / t_j;
      az = jz * s;
      vz = 0.5 * jz * s * s;
      z = alt_lead + jz * s * s * s / 6;
      out.phase = TrajectoryPhase::kDescent;
    } else {
      const double t_air = params.airborne_duration();
      const double t_s = params.stance_duration;
      const double v0 = params.touchdown_speed();
      // the ramp ends half a ramp past the first apex
      const double entry = 0.5 * (t_air + t_j);
      const double c = std::fmod(t - params.lead_in + entry, t_air + t_s);
      if (c < t_air) {  // ballistic arc, liftoff to touchdown
        z = params.cruise_height + v0 * c - 0.5 * g_eff * c * c;
        vz = v0 - g_eff * c;
        az = -g_eff;
        out.phase = c < 0.5 * t_air ? TrajectoryPhase::kAscent : TrajectoryPhase::kDescent;
      } else {  // stance compression
        const double s = c - t_air;
        const double w = M_PI / t_s;
        const double amp = v0 / w;                 // slope-matched sine dip
        const double bump = params.stance_depth - amp;  // midpoint correction
        const double sn = std::sin(w * s), cs = std::cos(w * s);
        const double s2 = std::sin(2 * w * s), c2 = std::cos(2 * w * s);
        z = params.cruise_height - (amp * sn + bump * sn * sn);
        vz = -(amp * w * cs + bump * w * s2);
        az = amp * w * w * sn - 2 * bump * w * w * c2;
        jz = amp * w * w * w * cs + 4 * bump * w * w * w * s2;
        out.phase = TrajectoryPhase::kStance;
      }
    }
  }

  out.p_d = Vec3(x, 0, z);
  out.v_d = Vec3(vx, 0, vz);
  out.a_d = Vec3(ax, 0, az);

  // Velocity-aligned attitude with analytic rates (planar trajectory: pure
  // pitch phi = atan2(vz, vx), R_d = rot_y(-phi)).
  const double v2 = vx * vx + vz * vz;
  if (std::sqrt(v2) < kSpeedEpsilon) {
    out.orientation_fallback = true;
    return out;
  }
  out.R_d = desired_orientation(out.v_d);
  const double phi_dot = (vx * az - vz * ax) / v2;
  const double va = vx * ax + vz * az;
  const double phi_ddot = (vx * jz - vz * jx) / v2 - 2 * phi_dot * va / v2;
  out.omega_d = Vec3(0, -phi_dot, 0);
  out.omega_dot_d = Vec3(0, -phi_ddot, 0);
  return out;
}

std::vector<TrajectorySample> generate(const TrajectoryParams& params, double dt,
                                       double duration) {
  params.validate();
  if (!(dt > 0)) throw ValidationError("dt must be positive");
  if (duration <= 0) {
    const double cycle =
        params.g_frac > 0 ? params.cycle_duration() : 1.0;  // level: one second per "hop"
    duration = params.lead_in + params.n_hops * cycle;
  }
  const int n = static_cast<int>(std::floor(duration / dt + 0.5)) + 1;
  std::vector<TrajectorySample> samples;
  samples.reserve(n);
  for (int i = 0; i < n; ++i) samples.push_back(sample_trajectory(params, i * dt));
  return samples;
}

}  // namespace softhex
