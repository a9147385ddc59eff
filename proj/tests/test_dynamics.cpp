#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "softhex/actuation.hpp"
#include "softhex/dynamics.hpp"
#include "softhex/errors.hpp"

using namespace softhex;

namespace {

FullState random_state(unsigned seed, double arm_range = 1.2) {
  auto gen = test_helpers::rng(seed);
  FullState s;
  for (int i = 0; i < 3; ++i) s.q(i) = test_helpers::uniform(gen, -2, 2);
  s.q(3) = test_helpers::uniform(gen, -0.6, 0.6);
  s.q(4) = test_helpers::uniform(gen, -0.6, 0.6);
  s.q(5) = test_helpers::uniform(gen, -M_PI, M_PI);
  for (int i = 6; i < 12; ++i) s.q(i) = test_helpers::uniform(gen, -arm_range, arm_range);
  for (int i = 0; i < 12; ++i) s.qd(i) = test_helpers::uniform(gen, -1.5, 1.5);
  return s;
}

double total_mass(const ArmParams& arm, const PlatformParams& plat) {
  return plat.base_mass + 3 * (arm.mass1 + arm.mass2 + arm.rotor_mass);
}

Mat12 mass_matrix_flow_derivative(const FullState& state, const ArmParams& arm,
                                  const PlatformParams& plat, double h = 1e-6) {
  FullState sp = state;
  FullState sm = state;
  sp.q += h * state.qd;
  sm.q -= h * state.qd;
  return (mass_matrix(sp, arm, plat) - mass_matrix(sm, arm, plat)) / (2 * h);
}

}  // namespace

TEST_CASE("platform parameter validation") {
  PlatformParams plat;
  CHECK_NOTHROW(plat.validate());
  plat.base_mass = 0;
  CHECK_THROWS_AS(plat.validate(), ValidationError);
  plat = PlatformParams{};
  plat.gravity_fraction = -0.1;
  CHECK_THROWS_AS(plat.validate(), ValidationError);
  plat = PlatformParams{};
  plat.base_inertia.y() = -1;
  CHECK_THROWS_AS(plat.validate(), ValidationError);
}

TEST_CASE("arm mounts sit on the odd rotor rays") {
  CHECK(arm_azimuth(0) == 0.0);
  CHECK(arm_azimuth(1) == doctest::Approx(2 * M_PI / 3).epsilon(1e-15));
  CHECK(arm_azimuth(2) == doctest::Approx(4 * M_PI / 3).epsilon(1e-15));
  for (int a = 0; a < 3; ++a) {
    CHECK(arm_azimuth(a) == doctest::Approx(propeller_azimuth(2 * a + 1)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(arm_azimuth(3), ValidationError);
}

TEST_CASE("mass matrix is symmetric positive definite") {
  const ArmParams arm;
  const PlatformParams plat;
  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    const FullState s = random_state(seed);
    const Mat12 b = mass_matrix(s, arm, plat);
    CHECK((b - b.transpose()).norm() < 1e-12);
    const Eigen::SelfAdjointEigenSolver<Mat12> eig(b);
    CHECK(eig.eigenvalues().minCoeff() > 0);
  }
}

TEST_CASE("translational block is the total mass, exactly") {
  const ArmParams arm;
  const PlatformParams plat;
  const FullState s = random_state(7);
  const Mat12 b = mass_matrix(s, arm, plat);
  const double m_tot = total_mass(arm, plat);
  CHECK(m_tot == doctest::Approx(1.62).epsilon(1e-15));
  CHECK((b.block<3, 3>(0, 0) - m_tot * Mat3::Identity()).norm() < 1e-13);
}

TEST_CASE("distinct arms do not couple inertially") {
  const ArmParams arm;
  const PlatformParams plat;
  const FullState s = random_state(11);
  const Mat12 b = mass_matrix(s, arm, plat);
  for (int a = 0; a < 3; ++a) {
    for (int c = 0; c < 3; ++c) {
      if (a == c) continue;
      CHECK(b.block<2, 2>(6 + 2 * a, 6 + 2 * c).norm() == 0.0);
    }
  }
}

TEST_CASE("mass matrix ignores base position") {
  const ArmParams arm;
  const PlatformParams plat;
  FullState s = random_state(13);
  const Mat12 b0 = mass_matrix(s, arm, plat);
  s.q.head<3>() += Vec3(5, -3, 11);
  CHECK((mass_matrix(s, arm, plat) - b0).norm() == 0.0);
}

TEST_CASE("arm block of the composite mass matrix matches the standalone arm") {
  const ArmParams arm;
  const PlatformParams plat;
  const FullState s = random_state(17);
  const Mat12 b = mass_matrix(s, arm, plat);
  for (int a = 0; a < 3; ++a) {
    const ArmDynamics standalone = arm_dynamics(s.arm(a), Vec2::Zero(), arm, Vec3::Zero());
    CHECK((b.block<2, 2>(6 + 2 * a, 6 + 2 * a) - standalone.B).norm() < 1e-12);
  }
}

TEST_CASE("gravity forces are the gradient of the potential") {
  const ArmParams arm;
  const PlatformParams plat;
  const FullState s = random_state(19);
  const Vec12 g = gravity_forces(s, arm, plat);
  for (int k = 0; k < 12; ++k) {
    const double fd = test_helpers::central_diff(
        [&](double x) {
          FullState sk = s;
          sk.q(k) = x;
          return potential_energy(sk, arm, plat);
        },
        s.q(k));
    CHECK(g(k) == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
  }
}

TEST_CASE("gravity rows of the base translation weigh the whole vehicle") {
  const ArmParams arm;
  const PlatformParams plat;
  const FullState s = random_state(23);
  const Vec12 g = gravity_forces(s, arm, plat);
  CHECK(g(0) == 0.0);
  CHECK(g(1) == 0.0);
  CHECK(g(2) == doctest::Approx(total_mass(arm, plat) * plat.gravity).epsilon(1e-14));
}

TEST_CASE("zero ambient field kills gravity but not inertia") {
  const ArmParams arm;
  PlatformParams plat;
  plat.gravity_fraction = 0;
  const FullState s = random_state(29);
  CHECK(gravity_forces(s, arm, plat).norm() == 0.0);
  CHECK(potential_energy(s, arm, plat) == 0.0);
  CHECK(mass_matrix(s, arm, plat).norm() > 1.0);
}

TEST_CASE("arm gravity rows match the standalone arm at level attitude") {
  const ArmParams arm;
  const PlatformParams plat;
  FullState s = random_state(31);
  s.q.segment<3>(3).setZero();
  const Vec12 g = gravity_forces(s, arm, plat);
  for (int a = 0; a < 3; ++a) {
    const ArmDynamics standalone =
        arm_dynamics(s.arm(a), Vec2::Zero(), arm, Vec3(0, 0, -plat.gravity));
    CHECK((g.segment<2>(6 + 2 * a) - standalone.g).norm() < 1e-12);
  }
}

TEST_CASE("elastic and damping forces act on the arm coordinates only") {
  ArmParams arm;
  const FullState s = random_state(37);
  const Vec12 e = elastic_forces(s, arm);
  const Vec12 d = damping_forces(s, arm);
  CHECK(e.head<6>().norm() == 0.0);
  CHECK(d.head<6>().norm() == 0.0);
  CHECK((e.tail<6>() - arm.stiffness * s.q.tail<6>()).norm() == 0.0);
  CHECK((d.tail<6>() - arm.damping * s.qd.tail<6>()).norm() == 0.0);
  arm.stiffness = 0;
  arm.damping = 0;
  CHECK(elastic_forces(s, arm).norm() == 0.0);
  CHECK(damping_forces(s, arm).norm() == 0.0);
  CHECK(elastic_energy(s, arm) == 0.0);
}

TEST_CASE("power balance: Bdot - 2C is skew along the flow") {
  const ArmParams arm;
  const PlatformParams plat;
  for (unsigned seed : {41u, 43u}) {
    const FullState s = random_state(seed);
    const Mat12 bdot = mass_matrix_flow_derivative(s, arm, plat);
    const Mat12 c = coriolis_matrix(s, arm, plat);
    const double mismatch = s.qd.dot((bdot - 2 * c) * s.qd);
    CHECK(std::abs(mismatch) < 1e-5 * std::max(1.0, s.qd.squaredNorm()));
  }
}

TEST_CASE("translation rows: momentum derivative equals the Coriolis force") {
  const ArmParams arm;
  const PlatformParams plat;
  const FullState s = random_state(47);
  const Mat12 bdot = mass_matrix_flow_derivative(s, arm, plat);
  const Mat12 c = coriolis_matrix(s, arm, plat);
  CHECK(((bdot - c) * s.qd).head<3>().norm() < 1e-5);
}

TEST_CASE("arm block of the Coriolis matrix matches the standalone arm") {
  const ArmParams arm;
  const PlatformParams plat;
  FullState s = random_state(53);
  s.qd.setZero();
  s.qd.segment<2>(8) = Vec2(0.8, -0.6);  // only arm 1 moves
  const Mat12 c = coriolis_matrix(s, arm, plat);
  const ArmDynamics standalone = arm_dynamics(s.arm(1), s.arm_rate(1), arm, Vec3::Zero());
  CHECK((c.block<2, 2>(8, 8) - standalone.C).norm() < 1e-5);
}

TEST_CASE("free fall from rest accelerates the mass center at -g") {
  const ArmParams arm;
  const PlatformParams plat;
  FullState s = random_state(59);
  s.qd.setZero();
  const Vec12 qdd = forward_dynamics(s, Vec12::Zero(), arm, plat);
  const Mat12 b = mass_matrix(s, arm, plat);
  // with zero velocity the mass-center acceleration is the momentum rows of B qdd
  const Vec3 com_acc = (b.topRows<3>() * qdd) / total_mass(arm, plat);
  CHECK((com_acc - Vec3(0, 0, -plat.gravity)).norm() < 1e-9);
}

TEST_CASE("reduced ambient field scales the free-fall acceleration") {
  const ArmParams arm;
  PlatformParams plat;
  plat.gravity_fraction = 0.3;
  FullState s = random_state(61);
  s.qd.setZero();
  const Vec12 qdd = forward_dynamics(s, Vec12::Zero(), arm, plat);
  const Mat12 b = mass_matrix(s, arm, plat);
  const Vec3 com_acc = (b.topRows<3>() * qdd) / total_mass(arm, plat);
  CHECK((com_acc - Vec3(0, 0, -0.3 * plat.gravity)).norm() < 1e-9);
}

TEST_CASE("forward dynamics solves the stated linear system") {
  const ArmParams arm;
  const PlatformParams plat;
  const FullState s = random_state(67);
  auto gen = test_helpers::rng(71);
  Vec12 applied;
  for (int i = 0; i < 12; ++i) applied(i) = test_helpers::uniform(gen, -2, 2);
  const Vec12 qdd = forward_dynamics(s, applied, arm, plat);
  const FullDynamics dyn = full_dynamics(s, arm, plat);
  const Vec12 rhs =
      applied - dyn.C * s.qd - dyn.g - elastic_forces(s, arm) - damping_forces(s, arm);
  CHECK((dyn.B * qdd - rhs).norm() < 1e-10);
}

TEST_CASE("tip world kinematics: Jacobian against finite differences") {
  const ArmParams arm;
  const PlatformParams plat;
  const FullState s = random_state(73);
  for (int a = 0; a < 3; ++a) {
    const Eigen::Matrix<double, 3, 12> j = tip_world_jacobian(s, arm, a);
    for (int k = 0; k < 12; ++k) {
      const Eigen::VectorXd fd = test_helpers::central_diff_col(
          [&](const Eigen::VectorXd& q) -> Eigen::VectorXd {
            FullState sk = s;
            sk.q = q;
            return tip_world_position(sk, arm, a);
          },
          s.q, k);
      CHECK((j.col(k) - fd).norm() < 2e-7);
    }
  }
}

TEST_CASE("tip velocity from the Jacobian matches the chain rule") {
  const ArmParams arm;
  const PlatformParams plat;
  const FullState s = random_state(79);
  for (int a = 0; a < 3; ++a) {
    const Vec3 v_jac = tip_world_jacobian(s, arm, a) * s.qd;
    const double h = 1e-6;
    FullState sp = s;
    FullState sm = s;
    sp.q += h * s.qd;
    sm.q -= h * s.qd;
    const Vec3 v_fd =
        (tip_world_position(sp, arm, a) - tip_world_position(sm, arm, a)) / (2 * h);
    CHECK((v_jac - v_fd).norm() < 2e-6);
  }
}
