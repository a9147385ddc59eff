#include "softhex/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>

#include "softhex/errors.hpp"

namespace softhex {

namespace {

std::string describe_state(const FullState& s) {
  std::ostringstream os;
  os << "p=[" << s.q.segment<3>(0).transpose() << "] rpy=[" << s.q.segment<3>(3).transpose()
     << "] q_arm=[" << s.q.segment<6>(6).transpose() << "]";
  return os.str();
}

void append_value(std::string& line, double v, bool first) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  if (!first) line += ',';
  line += buf;
}

}  // namespace

void WorldParams::validate() const {
  arm.validate();
  plat.validate();
  prop.validate();
  contact.validate();
  gains.validate();
}

double energy_integrand(const Vec9& u, EnergyMetric metric) {
  double s = 0;
  for (int i = 0; i < 6; ++i) {
    const double f = std::max(0.0, u(i));
    s += metric == EnergyMetric::kInduced ? f * std::sqrt(f) : f;
  }
  return s;
}

void SimConfig::validate() const {
  if (!(dt > 0)) throw ValidationError("dt must be positive");
  if (!(duration >= dt)) throw ValidationError("duration must cover at least one step");
  if (log_every < 1) throw ValidationError("log_every must be >= 1");
  if (!(pitch_guard > 0) || pitch_guard > M_PI / 2) {
    throw ValidationError("pitch_guard must be in (0, pi/2]");
  }
}

bool LogRow::contact_active() const {
  for (double v : f_contact) {
    if (v != 0.0) return true;
  }
  return false;
}

double SimLog::energy(double t_start) const {
  double e = 0;
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    if (rows[i].t < t_start) continue;
    e += 0.5 * (rows[i].energy_integrand + rows[i + 1].energy_integrand) *
         (rows[i + 1].t - rows[i].t);
  }
  return e;
}

std::vector<std::pair<double, double>> SimLog::stance_intervals(double merge_gap) const {
  std::vector<std::pair<double, double>> out;
  bool in = false;
  for (const LogRow& r : rows) {
    if (r.contact_active()) {
      if (!out.empty() && r.t - out.back().second <= merge_gap) {
        out.back().second = r.t;
      } else if (!in) {
        out.emplace_back(r.t, r.t);
      } else {
        out.back().second = r.t;
      }
      in = true;
    } else {
      in = false;
    }
  }
  return out;
}

double SimLog::peak_position_error() const {
  double peak = 0;
  for (const LogRow& r : rows) peak = std::max(peak, r.e_p.norm());
  return peak;
}

double SimLog::peak_attitude_error(double* t_peak) const {
  double peak = 0, tp = 0;
  for (const LogRow& r : rows) {
    if (r.e_R_angle > peak) {
      peak = r.e_R_angle;
      tp = r.t;
    }
  }
  if (t_peak) *t_peak = tp;
  return peak;
}

double SimLog::flight_position_error(double min_interval) const {
  double peak = 0;
  size_t i = 0;
  while (i < rows.size()) {
    if (rows[i].contact_active()) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < rows.size() && !rows[j + 1].contact_active()) ++j;
    if (rows[j].t - rows[i].t >= min_interval) {
      // settling metric: only the second half of the contact-free interval
      const double t_mid = 0.5 * (rows[i].t + rows[j].t);
      for (size_t k = i; k <= j; ++k) {
        if (rows[k].t >= t_mid) peak = std::max(peak, rows[k].e_p.norm());
      }
    }
    i = j + 1;
  }
  return peak;
}

void SimLog::write_csv(std::ostream& os) const {
  os << "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz,"
        "arm1_q1,arm1_q2,arm2_q1,arm2_q2,arm3_q1,arm3_q2,"
        "arm1_qd1,arm1_qd2,arm2_qd1,arm2_qd2,arm3_qd1,arm3_qd2,"
        "f1,f2,f3,f4,f5,f6,tau1,tau2,tau3,"
        "fc1_x,fc1_y,fc1_z,fc2_x,fc2_y,fc2_z,fc3_x,fc3_y,fc3_z,"
        "ep_x,ep_y,ep_z,e_R_angle,energy_integrand\n";
  std::string line;
  for (const LogRow& r : rows) {
    line.clear();
    append_value(line, r.t, true);
    for (int i = 0; i < 3; ++i) append_value(line, r.p_B(i), false);
    for (int i = 0; i < 4; ++i) append_value(line, r.quat[i], false);
    for (int i = 0; i < 3; ++i) append_value(line, r.v_B(i), false);
    for (int i = 0; i < 3; ++i) append_value(line, r.omega_B(i), false);
    for (int i = 0; i < 6; ++i) append_value(line, r.q_arm(i), false);
    for (int i = 0; i < 6; ++i) append_value(line, r.qd_arm(i), false);
    for (int i = 0; i < 9; ++i) append_value(line, r.u(i), false);
    for (int i = 0; i < 9; ++i) append_value(line, r.f_contact[i], false);
    for (int i = 0; i < 3; ++i) append_value(line, r.e_p(i), false);
    append_value(line, r.e_R_angle, false);
    append_value(line, r.energy_integrand, false);
    line += '\n';
    os << line;
  }
}

FullState step(const FullState& state, const Vec9& u, double dt, const WorldParams& world,
               double pitch_guard) {
  const auto deriv = [&](const FullState& s) -> Vec12 {
    const Vec12 applied = input_map(s, world.arm, world.prop) * u +
                          contact_forces(s, world.arm, world.contact).generalized;
    return forward_dynamics(s, applied, world.arm, world.plat);
  };
  const auto advance = [](const FullState& s, double h, const Vec12& dq, const Vec12& dqd) {
    FullState n = s;
    n.q += h * dq;
    n.qd += h * dqd;
    return n;
  };

  const Vec12 a1 = deriv(state);
  const FullState s2 = advance(state, 0.5 * dt, state.qd, a1);
  const Vec12 a2 = deriv(s2);
  const FullState s3 = advance(state, 0.5 * dt, s2.qd, a2);
  const Vec12 a3 = deriv(s3);
  const FullState s4 = advance(state, dt, s3.qd, a3);
  const Vec12 a4 = deriv(s4);

  FullState next = state;
  next.q += dt / 6.0 * (state.qd + 2 * s2.qd + 2 * s3.qd + s4.qd);
  next.qd += dt / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);

  if (!next.q.allFinite() || !next.qd.allFinite()) {
    throw NumericalError("integration produced a non-finite state; last valid state: " +
                         describe_state(state));
  }
  if (std::abs(next.q(4)) > pitch_guard) {
    throw NumericalError("pitch guard tripped; last valid state: " + describe_state(state));
  }
  for (int i = 6; i < 12; ++i) {
    if (std::abs(next.q(i)) > world.arm.max_angle) {
      throw NumericalError("arm angle guard tripped; last valid state: " +
                           describe_state(state));
    }
  }
  return next;
}

SimLog simulate(const FullState& x0, const ReferenceFn& ref, const WorldParams& world,
                const SimConfig& sim) {
  world.validate();
  sim.validate();

  const long n = std::lround(sim.duration / sim.dt);
  SimLog log;
  log.rows.reserve(static_cast<size_t>(n / sim.log_every) + 2);

  FullState state = x0;
  for (long k = 0; k <= n; ++k) {
    const double t = k * sim.dt;
    const TrajectorySample sample = ref(t);
    ControlInput ci;
    try {
      ci = control_law(state, sample, world.gains, world.arm, world.plat, world.prop);
    } catch (const std::exception& e) {
      throw NumericalError("controller failed at t = " + std::to_string(t) + " s: " + e.what());
    }
    log.total_saturations += ci.saturation_count;

    if (k % sim.log_every == 0 || k == n) {
      const ContactForces fc = contact_forces(state, world.arm, world.contact);
      const PoseErrors err = pose_errors(state, sample);
      LogRow row;
      row.t = t;
      row.p_B = state.position();
      const Eigen::Quaterniond quat(rpy_rotation(state.rpy()));
      row.quat[0] = quat.w();
      row.quat[1] = quat.x();
      row.quat[2] = quat.y();
      row.quat[3] = quat.z();
      row.v_B = state.velocity();
      row.omega_B = euler_rate_map(state.rpy()) * state.rpy_rate();
      row.q_arm = state.q.tail<6>();
      row.qd_arm = state.qd.tail<6>();
      row.u = ci.u;
      for (int a = 0; a < 3; ++a) {
        for (int i = 0; i < 3; ++i) row.f_contact[3 * a + i] = fc.tip_force[a](i);
      }
      row.e_p = err.e_p;
      row.e_R_angle = attitude_error_angle(err.e_R);
      row.energy_integrand = energy_integrand(ci.u, sim.energy_metric);
      log.rows.push_back(row);
    }

    if (k < n) {
      try {
        state = step(state, ci.u, sim.dt, world, sim.pitch_guard);
      } catch (const NumericalError& e) {
        throw NumericalError("aborted at t = " + std::to_string(t) + " s: " + e.what());
      }
    }
  }
  return log;
}

HoverRunResult run_hover_regulation(const WorldParams& world, const SimConfig& sim,
                                    const Vec3& position, const Vec3& offset, double q1_ref) {
  HoverRunResult out;
  out.trim = hover_trim(position, q1_ref, world.arm, world.plat, world.prop);

  FullState x0 = out.trim.state;
  x0.q.head<3>() += offset;

  TrajectorySample hold;
  hold.p_d = position;
  hold.arm_lateral_ref = out.trim.arm_lateral;
  out.log = simulate(x0, [hold](double t) {
    TrajectorySample s = hold;
    s.t = t;
    return s;
  }, world, sim);

  out.final_error = out.log.rows.back().e_p.norm();
  out.settle_time = std::numeric_limits<double>::infinity();
  for (size_t i = out.log.rows.size(); i-- > 0;) {
    if (out.log.rows[i].e_p.norm() >= 1e-3) {
      if (i + 1 < out.log.rows.size()) out.settle_time = out.log.rows[i + 1].t;
      break;
    }
    out.settle_time = out.log.rows[i].t;
  }
  return out;
}

JumpSummary summarize_jump(const SimLog& log, const TrajectoryParams& traj) {
  JumpSummary s;
  s.peak_position_error = log.peak_position_error();
  s.peak_attitude_error = log.peak_attitude_error(&s.peak_attitude_error_time);
  // Contact can briefly drop out mid-stance while the pitch sweep rolls the
  // load between tips; only arc-length gaps count as flight, and the same
  // threshold glues the tip-to-tip handovers into whole stance events.
  const double min_flight =
      traj.g_frac > 0 ? 0.5 * traj.airborne_duration() : 0.0;
  s.flight_position_error = log.flight_position_error(min_flight);
  s.stance_intervals = log.stance_intervals(min_flight);
  s.hops = static_cast<int>(s.stance_intervals.size());
  // The attitude disturbance must be a stance phenomenon, not flight drift:
  // the peak has to fall inside a commanded stance window of the gait.
  s.attitude_peak_in_stance =
      sample_trajectory(traj, s.peak_attitude_error_time).phase == TrajectoryPhase::kStance;
  s.energy = log.energy();
  s.energy_cyclic = log.energy(traj.lead_in);
  s.total_saturations = log.total_saturations;
  return s;
}

JumpResult run_jump_experiment(const JumpConfig& cfg) {
  JumpResult out;
  out.trim = hover_trim(Vec3(0, 0, 1), cfg.q1_ref, cfg.world.arm, cfg.world.plat, cfg.world.prop);

  out.traj = cfg.traj;
  // Tip hang below the base at the trim arm posture, level and at the
  // touchdown attitude: the velocity-aligned reference pitches the nose into
  // the descent, which drops the leading tip well below its level hang.
  const double pitch_td = std::atan2(out.traj.touchdown_speed(), out.traj.forward_speed);
  const auto hang_at = [&](double pitch) {
    FullState tilted = out.trim.state;
    tilted.q(4) = pitch;
    double lowest = std::numeric_limits<double>::infinity();
    for (int arm = 0; arm < 3; ++arm) {
      lowest = std::min(lowest,
                        tip_world_position(tilted, cfg.world.arm, arm).z() - tilted.q(2));
    }
    return -lowest;
  };
  if (cfg.auto_cruise_height) {
    out.traj.cruise_height =
        cfg.world.contact.ground_height + hang_at(pitch_td) + cfg.ground_clearance;
  }
  if (cfg.auto_stance_depth) {
    // Deep enough to keep pressing while the pitch sweep levels out and the
    // tips rise toward their level hang. The press grows with touchdown speed
    // so harder falls load the legs deeper before the reversal.
    const double press =
        cfg.stance_press + cfg.stance_press_per_speed * out.traj.touchdown_speed();
    out.traj.stance_depth = hang_at(pitch_td) - hang_at(0) + cfg.ground_clearance + press;
  }
  out.traj.arm_lateral_ref = out.trim.arm_lateral;  // tip task holds the trim shape
  out.traj.validate();

  const TrajectorySample start = sample_trajectory(out.traj, 0.0);
  FullState x0 = out.trim.state;
  x0.q.head<3>() = start.p_d;

  const TrajectoryParams traj = out.traj;
  out.log = simulate(x0, [traj](double t) { return sample_trajectory(traj, t); }, cfg.world,
                     cfg.sim);
  out.summary = summarize_jump(out.log, out.traj);
  return out;
}

SweepResult gravity_sweep(const JumpConfig& base, const std::vector<double>& gammas) {
  for (size_t i = 0; i < gammas.size(); ++i) {
    if (gammas[i] < 0 || gammas[i] > 1) throw ValidationError("morphing factor outside [0, 1]");
    if (i > 0 && gammas[i] <= gammas[i - 1]) {
      throw ValidationError("morphing factors must be strictly increasing");
    }
  }

  SweepResult out;
  const HoverTrim trim =
      hover_trim(Vec3(0, 0, 1), base.q1_ref, base.world.arm, base.world.plat, base.world.prop);
  out.hover_power = energy_integrand(trim.u, base.sim.energy_metric);
  const double window = base.sim.duration - base.traj.lead_in;
  if (!(window > 0)) throw ValidationError("duration must exceed the trajectory lead-in");

  std::vector<std::future<SweepRow>> futures;
  futures.reserve(gammas.size());
  for (double gamma : gammas) {
    futures.push_back(std::async(std::launch::async, [gamma, &base, window, &out]() {
      SweepRow row;
      row.gamma = gamma;
      try {
        // Same gait, different morphing factor: each row jumps to the same
        // apex, so a lighter effective weight floats longer and lands faster
        // (touchdown speed grows with the square root of the factor).
        JumpConfig cfg = base;
        cfg.traj.g_frac = gamma;
        const JumpResult res = run_jump_experiment(cfg);
        row.summary = res.summary;
        row.energy = res.summary.energy_cyclic;
        row.vs_hover = row.energy / (out.hover_power * window);
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      return row;
    }));
  }
  for (auto& f : futures) out.rows.push_back(f.get());

  double e0 = std::numeric_limits<double>::quiet_NaN();
  for (const SweepRow& r : out.rows) {
    if (r.ok && r.gamma == 0.0) e0 = r.energy;
  }
  for (SweepRow& r : out.rows) {
    r.normalized = r.ok ? r.energy / e0 : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& os) {
  os << "gamma,energy,normalized,vs_hover,hops,peak_ep,peak_e_R_rad,flight_ep,ok,error\n";
  for (const SweepRow& r : sweep.rows) {
    std::string line;
    append_value(line, r.gamma, true);
    append_value(line, r.energy, false);
    append_value(line, r.normalized, false);
    append_value(line, r.vs_hover, false);
    line += ',' + std::to_string(r.summary.hops);
    append_value(line, r.summary.peak_position_error, false);
    append_value(line, r.summary.peak_attitude_error, false);
    append_value(line, r.summary.flight_position_error, false);
    line += r.ok ? ",1," : ",0,";
    std::string err = r.error;
    for (char& c : err) {
      if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    line += err;
    line += '\n';
    os << line;
  }
}

}  // namespace softhex
