#include <doctest.h>

#include <cmath>
#include <sstream>

#include "softhex/errors.hpp"
#include "softhex/sim_engine.hpp"

using namespace softhex;

namespace {

ReferenceFn hold_reference(const Vec3& position, double arm_lateral_ref) {
  TrajectorySample hold;
  hold.p_d = position;
  hold.arm_lateral_ref = arm_lateral_ref;
  return [hold](double t) {
    TrajectorySample s = hold;
    s.t = t;
    return s;
  };
}

double total_energy(const FullState& s, const WorldParams& w) {
  return kinetic_energy(s, w.arm, w.plat) + potential_energy(s, w.arm, w.plat) +
         elastic_energy(s, w.arm) + contact_energy(s, w.arm, w.contact);
}

JumpConfig short_jump_config(double g_frac, double duration) {
  JumpConfig cfg;
  cfg.traj.g_frac = g_frac;
  cfg.sim.duration = duration;
  return cfg;
}

}  // namespace

TEST_CASE("sim config validation") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = SimConfig{};
  c.duration = 1e-9;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = SimConfig{};
  c.log_every = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("free fall for one second matches the ballistic solution") {
  WorldParams world;
  FullState s;
  s.q(2) = 50;  // far above the ground plane
  const Vec9 u = Vec9::Zero();
  for (int k = 0; k < 500; ++k) s = step(s, u, 0.002, world);
  CHECK(std::abs(s.q(2) - 50 + 0.5 * 9.81) < 1e-6);          // dz = -4.905 m
  CHECK(s.qd(2) == doctest::Approx(-9.81).epsilon(1e-9));
  CHECK(std::abs(s.q(0)) < 1e-12);
  CHECK(std::abs(s.q(1)) < 1e-12);
  CHECK(s.q.tail<6>().norm() < 1e-10);  // uniform gravity leaves the arms unloaded
}

TEST_CASE("a trimmed platform under its trim input does not move") {
  WorldParams world;
  const HoverTrim trim = hover_trim(Vec3(0, 0, 1), -0.5, world.arm, world.plat, world.prop);
  FullState s = trim.state;
  for (int k = 0; k < 100; ++k) s = step(s, trim.u, 0.002, world);
  CHECK((s.q - trim.state.q).norm() < 1e-10);
  CHECK(s.qd.norm() < 1e-10);
}

TEST_CASE("halving the step changes the endpoint at fourth order") {
  WorldParams world;
  const HoverTrim trim = hover_trim(Vec3(0, 0, 5), -0.5, world.arm, world.plat, world.prop);
  const Vec9 u = 0.95 * trim.u;  // gentle powered descent with arm motion
  const auto endpoint = [&](double dt) {
    FullState s = trim.state;
    const int n = static_cast<int>(std::lround(0.5 / dt));
    for (int k = 0; k < n; ++k) s = step(s, u, dt, world);
    return s;
  };
  const FullState y1 = endpoint(0.004);
  const FullState y2 = endpoint(0.002);
  const FullState y3 = endpoint(0.001);
  const double d12 = (y1.q - y2.q).norm() + (y1.qd - y2.qd).norm();
  const double d23 = (y2.q - y3.q).norm() + (y2.qd - y3.qd).norm();
  CHECK(d12 / d23 > 11.0);  // exactly 16 for an order-4 method
  CHECK(d12 / d23 < 22.0);
}

TEST_CASE("unactuated contact-free flight conserves total energy") {
  WorldParams world;
  world.arm.damping = 0;                  // structural damping off
  world.contact.ground_height = -1000;    // out of reach for a 2 s fall
  FullState s;
  for (int a = 0; a < 3; ++a) s.q.segment<2>(6 + 2 * a) = Vec2(-0.4, 0.2);
  s.qd.segment<6>(6) << 0.3, -0.2, 0.1, 0.4, -0.3, 0.2;
  const double e0 = total_energy(s, world);
  double ke_max = 0;
  double drift = 0;
  const Vec9 u = Vec9::Zero();
  for (int k = 0; k < 1000; ++k) {
    s = step(s, u, 0.002, world);
    ke_max = std::max(ke_max, kinetic_energy(s, world.arm, world.plat));
    drift = std::max(drift, std::abs(total_energy(s, world) - e0));
  }
  CHECK(ke_max > 100.0);  // substantial exchange actually happened
  CHECK(drift < 1e-3 * ke_max);
}

TEST_CASE("pitch guard aborts a tumbling run with a diagnostic") {
  WorldParams world;
  FullState s;
  s.q(2) = 50;
  s.qd(4) = 10;  // fast pitch tumble, no actuation to stop it
  const Vec9 u = Vec9::Zero();
  CHECK_THROWS_WITH_AS(
      [&] {
        for (int k = 0; k < 200; ++k) s = step(s, u, 0.002, world);
      }(),
      doctest::Contains("pitch guard"), NumericalError);
}

TEST_CASE("simulate logs uniformly from zero through the final time") {
  WorldParams world;
  const HoverTrim trim = hover_trim(Vec3(0, 0, 1), -0.5, world.arm, world.plat, world.prop);
  SimConfig sim;
  sim.duration = 0.1;
  const SimLog log =
      simulate(trim.state, hold_reference(Vec3(0, 0, 1), trim.arm_lateral), world, sim);
  REQUIRE(log.rows.size() == 51);
  CHECK(log.rows.front().t == 0.0);
  CHECK(log.rows.back().t == doctest::Approx(0.1).epsilon(1e-12));
  for (size_t i = 1; i < log.rows.size(); ++i) {
    CHECK(log.rows[i].t - log.rows[i - 1].t == doctest::Approx(0.002).epsilon(1e-9));
  }
}

TEST_CASE("hover log energy equals duration times the constant integrand") {
  WorldParams world;
  const HoverTrim trim = hover_trim(Vec3(0, 0, 1), -0.5, world.arm, world.plat, world.prop);
  SimConfig sim;
  sim.duration = 1.0;
  const SimLog log =
      simulate(trim.state, hold_reference(Vec3(0, 0, 1), trim.arm_lateral), world, sim);
  CHECK(log.total_saturations == 0);

  double expect = 0;
  for (int i = 0; i < 6; ++i) expect += std::pow(trim.u(i), 1.5);
  CHECK(log.energy() == doctest::Approx(expect).epsilon(1e-6));

  // thrust-time metric behind the switch
  double thrust_sum = 0;
  for (int i = 0; i < 6; ++i) thrust_sum += trim.u(i);
  CHECK(energy_integrand(trim.u, EnergyMetric::kThrust) ==
        doctest::Approx(thrust_sum).epsilon(1e-12));
}

TEST_CASE("csv output has the fixed 49-column schema") {
  WorldParams world;
  const HoverTrim trim = hover_trim(Vec3(0, 0, 1), -0.5, world.arm, world.plat, world.prop);
  SimConfig sim;
  sim.duration = 0.01;
  const SimLog log =
      simulate(trim.state, hold_reference(Vec3(0, 0, 1), trim.arm_lateral), world, sim);
  std::ostringstream os;
  log.write_csv(os);
  std::istringstream is(os.str());
  std::string line;
  size_t n_lines = 0;
  while (std::getline(is, line)) {
    const size_t commas = static_cast<size_t>(std::count(line.begin(), line.end(), ','));
    CHECK(commas == 48);  // 49 columns
    ++n_lines;
  }
  CHECK(n_lines == log.rows.size() + 1);
}

TEST_CASE("identical configurations produce bit-identical logs") {
  const JumpConfig cfg = short_jump_config(0.3, 2.0);
  const JumpResult a = run_jump_experiment(cfg);
  const JumpResult b = run_jump_experiment(cfg);
  REQUIRE(a.log.rows.size() == b.log.rows.size());
  std::ostringstream sa, sb;
  a.log.write_csv(sa);
  b.log.write_csv(sb);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("level translation tracks to well under a centimeter") {
  const JumpResult res = run_jump_experiment(short_jump_config(0.0, 3.0));
  CHECK(res.summary.peak_position_error < 0.01);
  CHECK(res.summary.hops == 0);  // never touches the ground
  CHECK(res.summary.flight_position_error <= res.summary.peak_position_error);
}

TEST_CASE("a bouncing run detects stance intervals after the lead-in") {
  const JumpConfig cfg = short_jump_config(0.3, 3.0);
  const JumpResult res = run_jump_experiment(cfg);
  CHECK(res.summary.hops >= 2);
  for (const auto& [a, b] : res.summary.stance_intervals) {
    CHECK(a >= cfg.traj.lead_in);
    CHECK(b >= a);
  }
  // frictionless model: tip forces are vertical and non-negative
  for (const LogRow& r : res.log.rows) {
    for (int tip = 0; tip < 3; ++tip) {
      CHECK(r.f_contact[3 * tip + 0] == 0.0);
      CHECK(r.f_contact[3 * tip + 1] == 0.0);
      CHECK(r.f_contact[3 * tip + 2] >= 0.0);
    }
  }
  // the resolved trajectory grazes the ground by the configured clearance
  CHECK(res.traj.cruise_height > 0);
  CHECK(res.summary.energy > 0);
  CHECK(res.summary.energy_cyclic < res.summary.energy);
}

TEST_CASE("hover regulation recovers a 5 cm offset to under a millimeter") {
  WorldParams world;
  SimConfig sim;
  sim.duration = 3.0;
  const HoverRunResult res =
      run_hover_regulation(world, sim, Vec3(0, 0, 1), Vec3(0.05, 0, 0));
  CHECK(res.final_error < 1e-3);
  CHECK(res.settle_time <= 3.0);
  CHECK(res.trim.residual < 1e-10);
}

TEST_CASE("sweep rows are isolated, ordered, and normalized against gamma zero") {
  JumpConfig cfg = short_jump_config(0.3, 2.5);
  const std::vector<double> gammas = {0.0, 0.3, 1.0};
  const SweepResult sweep = gravity_sweep(cfg, gammas);
  REQUIRE(sweep.rows.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(sweep.rows[i].gamma == gammas[i]);
    CHECK(sweep.rows[i].ok);
  }
  CHECK(sweep.rows[0].normalized == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sweep.hover_power > 0);

  std::ostringstream os;
  write_sweep_csv(sweep, os);
  std::istringstream is(os.str());
  std::string line;
  size_t n_lines = 0;
  while (std::getline(is, line)) ++n_lines;
  CHECK(n_lines == 4);  // header + 3 rows

  CHECK_THROWS_AS(gravity_sweep(cfg, {0.3, 0.1}), ValidationError);
  CHECK_THROWS_AS(gravity_sweep(cfg, {0.5, 1.5}), ValidationError);
}
