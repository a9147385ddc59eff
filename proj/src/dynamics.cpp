#include "softhex/dynamics.hpp"

#include <array>
#include <cmath>

#include "softhex/errors.hpp"

namespace softhex {

namespace {

constexpr double kChristoffelStep = 1e-6;

// Arm point-mass kinematics rotated into the body frame.
struct BodyArm {
  std::array<Vec3, 4> positions;
  std::array<Eigen::Matrix<double, 3, 2>, 4> jacobians;
  std::array<double, 4> masses;
};

BodyArm body_arm(const FullState& state, const ArmParams& arm, int a) {
  const ArmKinematics kin = arm_kinematics(state.arm(a), arm);
  const Mat3 mount = rot_z(arm_azimuth(a));
  BodyArm out;
  for (int k = 0; k < 4; ++k) {
    out.positions[k] = mount * kin.mass_positions[k];
    out.jacobians[k] = mount * kin.mass_jacobians[k];
    out.masses[k] = kin.masses[k];
  }
  return out;
}

}  // namespace

void PlatformParams::validate() const {
  if (!(base_mass > 0)) throw ValidationError("base_mass must be positive");
  if (!(base_inertia.array() > 0).all()) throw ValidationError("base_inertia must be positive");
  if (!(gravity > 0)) throw ValidationError("gravity must be positive");
  if (!(gravity_fraction >= 0)) throw ValidationError("gravity_fraction must be non-negative");
}

double arm_azimuth(int arm_index) {
  if (arm_index < 0 || arm_index > 2) throw ValidationError("arm index must be 0..2");
  return arm_index * 2.0 * M_PI / 3.0;
}

Eigen::Matrix<double, 3, 12> point_world_jacobian(const FullState& state, const Vec3& p_body,
                                                  const Eigen::Matrix<double, 3, 2>& jac_local,
                                                  int arm_index) {
  const Mat3 r = rpy_rotation(state.rpy());
  const Mat3 qmap = euler_rate_map(state.rpy());
  Eigen::Matrix<double, 3, 12> j = Eigen::Matrix<double, 3, 12>::Zero();
  j.block<3, 3>(0, 0) = Mat3::Identity();
  j.block<3, 3>(0, 3) = -r * skew(p_body) * qmap;
  if (arm_index >= 0) j.block<3, 2>(0, 6 + 2 * arm_index) = r * jac_local;
  return j;
}

Mat12 mass_matrix(const FullState& state, const ArmParams& arm, const PlatformParams& plat) {
  Mat12 b = Mat12::Zero();
  b.block<3, 3>(0, 0) = plat.base_mass * Mat3::Identity();
  const Mat3 qmap = euler_rate_map(state.rpy());
  b.block<3, 3>(3, 3) = qmap.transpose() * plat.base_inertia.asDiagonal() * qmap;
  for (int a = 0; a < 3; ++a) {
    const BodyArm ba = body_arm(state, arm, a);
    for (int k = 0; k < 4; ++k) {
      const Eigen::Matrix<double, 3, 12> j =
          point_world_jacobian(state, ba.positions[k], ba.jacobians[k], a);
      b.noalias() += ba.masses[k] * j.transpose() * j;
    }
  }
  return b;
}

Mat12 coriolis_matrix(const FullState& state, const ArmParams& arm, const PlatformParams& plat) {
  // dB/dq_k for the nine non-translational coordinates (B ignores base position).
  std::array<Mat12, 12> db;
  db[0].setZero();
  db[1].setZero();
  db[2].setZero();
  for (int k = 3; k < 12; ++k) {
    FullState sp = state;
    FullState sm = state;
    sp.q(k) += kChristoffelStep;
    sm.q(k) -= kChristoffelStep;
    db[k] = (mass_matrix(sp, arm, plat) - mass_matrix(sm, arm, plat)) / (2.0 * kChristoffelStep);
  }
  Mat12 c = Mat12::Zero();
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      double cij = 0;
      for (int k = 0; k < 12; ++k) {
        cij += 0.5 * (db[k](i, j) + db[j](i, k) - db[i](j, k)) * state.qd(k);
      }
      c(i, j) = cij;
    }
  }
  return c;
}

Vec12 gravity_forces(const FullState& state, const ArmParams& arm, const PlatformParams& plat) {
  const double g_eff = plat.effective_gravity();
  Vec12 g = Vec12::Zero();
  g(2) = plat.base_mass * g_eff;
  for (int a = 0; a < 3; ++a) {
    const BodyArm ba = body_arm(state, arm, a);
    for (int k = 0; k < 4; ++k) {
      const Eigen::Matrix<double, 3, 12> j =
          point_world_jacobian(state, ba.positions[k], ba.jacobians[k], a);
      g.noalias() += ba.masses[k] * g_eff * j.transpose() * Vec3::UnitZ();
    }
  }
  return g;
}

Vec12 elastic_forces(const FullState& state, const ArmParams& arm) {
  Vec12 f = Vec12::Zero();
  f.tail<6>() = arm.stiffness * state.q.tail<6>();
  return f;
}

Vec12 damping_forces(const FullState& state, const ArmParams& arm) {
  Vec12 f = Vec12::Zero();
  f.tail<6>() = arm.damping * state.qd.tail<6>();
  return f;
}

double kinetic_energy(const FullState& state, const ArmParams& arm, const PlatformParams& plat) {
  return 0.5 * state.qd.dot(mass_matrix(state, arm, plat) * state.qd);
}

double potential_energy(const FullState& state, const ArmParams& arm, const PlatformParams& plat) {
  const double g_eff = plat.effective_gravity();
  const Mat3 r = rpy_rotation(state.rpy());
  double v = plat.base_mass * g_eff * state.position().z();
  for (int a = 0; a < 3; ++a) {
    const BodyArm ba = body_arm(state, arm, a);
    for (int k = 0; k < 4; ++k) {
      const Vec3 p = state.position() + r * ba.positions[k];
      v += ba.masses[k] * g_eff * p.z();
    }
  }
  return v;
}

double elastic_energy(const FullState& state, const ArmParams& arm) {
  return 0.5 * arm.stiffness * state.q.tail<6>().squaredNorm();
}

FullDynamics full_dynamics(const FullState& state, const ArmParams& arm,
                           const PlatformParams& plat) {
  FullDynamics dyn;
  dyn.B = mass_matrix(state, arm, plat);
  dyn.C = coriolis_matrix(state, arm, plat);
  dyn.g = gravity_forces(state, arm, plat);
  return dyn;
}

Vec3 tip_world_position(const FullState& state, const ArmParams& arm, int arm_index) {
  const ArmKinematics kin = arm_kinematics(state.arm(arm_index), arm);
  const Mat3 mount = rot_z(arm_azimuth(arm_index));
  return state.position() + rpy_rotation(state.rpy()) * (mount * kin.tip);
}

Eigen::Matrix<double, 3, 12> tip_world_jacobian(const FullState& state, const ArmParams& arm,
                                                int arm_index) {
  const ArmKinematics kin = arm_kinematics(state.arm(arm_index), arm);
  const Mat3 mount = rot_z(arm_azimuth(arm_index));
  return point_world_jacobian(state, mount * kin.tip, mount * kin.tip_jacobian, arm_index);
}

Vec12 forward_dynamics(const FullState& state, const Vec12& applied, const ArmParams& arm,
                       const PlatformParams& plat) {
  const FullDynamics dyn = full_dynamics(state, arm, plat);
  const Vec12 rhs = applied - dyn.C * state.qd - dyn.g - elastic_forces(state, arm) -
                    damping_forces(state, arm);
  Eigen::LDLT<Mat12> ldlt(dyn.B);
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-12) {
    throw NumericalError("mass matrix is numerically singular");
  }
  return ldlt.solve(rhs);
}

}  // namespace softhex
