#include "softhex/pcc_arm.hpp"

#include <cmath>

#include "softhex/errors.hpp"

namespace softhex {

namespace {

// Below this bend angle the closed forms are replaced by their 4th-order
// series to stay continuous and accurate through q = 0.
constexpr double kSmallAngle = 1e-4;

// Fixed prefix aligning the DH chain's working plane with the arm-local
// frame: chain plane (x, y) -> arm-local (x, z), bending toward +z.
Mat4 bending_plane_prefix() {
  // rot_x(pi/2) * rot_z(pi/2), written out so the right angles stay exact
  Mat3 r;
  r << 0, -1, 0,
       0, 0, -1,
       1, 0, 0;
  return make_transform(r, Vec3::Zero());
}

bool chain_joint_is_revolute(int joint) {  // 1-based chain joint index
  const int r = (joint - 1) % 4;
  return r == 0 || r == 3;
}

}  // namespace

void ArmParams::validate() const {
  if (!(length1 > 0) || !(length2 > 0)) {
    throw ValidationError("ArmParams: segment lengths must be > 0");
  }
  if (mass1 < 0 || mass2 < 0 || rotor_mass < 0) {
    throw ValidationError("ArmParams: masses must be >= 0");
  }
  if (mass1 + mass2 + rotor_mass <= 0) {
    throw ValidationError("ArmParams: total arm mass must be > 0");
  }
  if (stiffness < 0 || damping < 0) {
    throw ValidationError("ArmParams: stiffness and damping must be >= 0");
  }
  if (!(max_angle > 0) || max_angle > M_PI) {
    throw ValidationError("ArmParams: max_angle must be in (0, pi]");
  }
}

PlanarTransform pcc_transform(double q, double L) {
  PlanarTransform t;
  const double c = std::cos(q), s = std::sin(q);
  t.rotation << c, -s, s, c;
  if (std::abs(q) < kSmallAngle) {
    const double q2 = q * q;
    t.translation.x() = L * (1.0 - q2 / 6.0 + q2 * q2 / 120.0);
    t.translation.y() = L * (q / 2.0 - q * q2 / 24.0);
  } else {
    t.translation.x() = L * s / q;
    t.translation.y() = L * (1.0 - c) / q;
  }
  return t;
}

Vec2 pcc_endpoint_rate(double q, double L) {
  if (std::abs(q) < kSmallAngle) {
    const double q2 = q * q;
    return Vec2(L * (-q / 3.0 + q * q2 / 30.0),
                L * (0.5 - q2 / 8.0 + q2 * q2 / 144.0));
  }
  const double c = std::cos(q), s = std::sin(q);
  return Vec2(L * (q * c - s) / (q * q), L * (q * s - (1.0 - c)) / (q * q));
}

double chord_half(double q, double L) {
  if (std::abs(q) < kSmallAngle) {
    const double q2 = q * q;
    return L * (0.5 - q2 / 48.0 + q2 * q2 / 3840.0);
  }
  return L * std::sin(q / 2.0) / q;
}

double chord_half_rate(double q, double L) {
  if (std::abs(q) < kSmallAngle) {
    return L * (-q / 24.0 + q * q * q / 960.0);
  }
  return L * (q * std::cos(q / 2.0) - 2.0 * std::sin(q / 2.0)) / (2.0 * q * q);
}

Eigen::Vector4d augmented_map(double q, double L) {
  const double f = chord_half(q, L);
  return Eigen::Vector4d(q / 2.0, f, f, q / 2.0);
}

Eigen::Vector4d jacobian_m_segment(double q, double L) {
  const double fp = chord_half_rate(q, L);
  return Eigen::Vector4d(0.5, fp, fp, 0.5);
}

Mat4 dh_link(double a, double alpha, double d, double theta) {
  const double ct = std::cos(theta), st = std::sin(theta);
  // the chain twists are all right angles; keep them exact so a straight
  // segment has an exactly zero transverse deflection
  double ca = std::cos(alpha), sa = std::sin(alpha);
  if (alpha == M_PI / 2) {
    ca = 0.0;
    sa = 1.0;
  } else if (alpha == -M_PI / 2) {
    ca = 0.0;
    sa = -1.0;
  }
  Mat4 t;
  t << ct, -st * ca, st * sa, a * ct,
       st, ct * ca, -ct * sa, a * st,
       0, sa, ca, d,
       0, 0, 0, 1;
  return t;
}

std::array<Mat4, 4> dh_chain(double q, double L) {
  const Eigen::Vector4d m = augmented_map(q, L);
  return {dh_link(0, M_PI / 2, 0, m(0)),
          dh_link(0, 0, m(1), 0),
          dh_link(0, -M_PI / 2, m(2), 0),
          dh_link(0, 0, 0, m(3))};
}

ChainFrames chain_frames(const Vec8& xi, const ArmParams& params) {
  (void)params;  // link geometry is carried entirely by xi
  ChainFrames chain;
  chain.frames[0] = bending_plane_prefix();
  const double alphas[4] = {M_PI / 2, 0, -M_PI / 2, 0};
  for (int k = 1; k <= 8; ++k) {
    const int r = (k - 1) % 4;
    const double theta = chain_joint_is_revolute(k) ? xi(k - 1) : 0.0;
    const double d = chain_joint_is_revolute(k) ? 0.0 : xi(k - 1);
    chain.frames[k] = chain.frames[k - 1] * dh_link(0, alphas[r], d, theta);
  }
  return chain;
}

Eigen::Matrix<double, 3, 8> chain_point_jacobian(const ChainFrames& chain,
                                                 int frame_index,
                                                 const Vec3& point) {
  Eigen::Matrix<double, 3, 8> jac = Eigen::Matrix<double, 3, 8>::Zero();
  for (int k = 1; k <= 8 && k <= frame_index; ++k) {
    const Vec3 z = chain.frames[k - 1].block<3, 1>(0, 2);
    if (chain_joint_is_revolute(k)) {
      const Vec3 o = chain.frames[k - 1].block<3, 1>(0, 3);
      jac.col(k - 1) = z.cross(point - o);
    } else {
      jac.col(k - 1) = z;
    }
  }
  return jac;
}

Vec8 arm_augmented_state(const Vec2& q, const ArmParams& params) {
  Vec8 xi;
  xi.head<4>() = augmented_map(q(0), params.length1);
  xi.tail<4>() = augmented_map(q(1), params.length2);
  return xi;
}

Eigen::Matrix<double, 8, 2> arm_jacobian_m(const Vec2& q, const ArmParams& params) {
  Eigen::Matrix<double, 8, 2> jm = Eigen::Matrix<double, 8, 2>::Zero();
  jm.block<4, 1>(0, 0) = jacobian_m_segment(q(0), params.length1);
  jm.block<4, 1>(4, 1) = jacobian_m_segment(q(1), params.length2);
  return jm;
}

std::array<ArmMassPoint, 4> arm_mass_points(const ArmParams& params) {
  return {ArmMassPoint{2, params.mass1 / 2},
          ArmMassPoint{4, params.mass1 / 2 + params.rotor_mass},
          ArmMassPoint{6, params.mass2 / 2},
          ArmMassPoint{8, params.mass2 / 2}};
}

ArmKinematics arm_kinematics(const Vec2& q, const ArmParams& params) {
  const Vec8 xi = arm_augmented_state(q, params);
  const ChainFrames chain = chain_frames(xi, params);
  const Eigen::Matrix<double, 8, 2> jm = arm_jacobian_m(q, params);
  const auto points = arm_mass_points(params);

  ArmKinematics out;
  for (int i = 0; i < 4; ++i) {
    const Vec3 p = chain.frames[points[i].frame_index].block<3, 1>(0, 3);
    out.mass_positions[i] = p;
    out.mass_jacobians[i] = chain_point_jacobian(chain, points[i].frame_index, p) * jm;
    out.masses[i] = points[i].mass;
  }
  out.tip = out.mass_positions[3];
  out.tip_jacobian = out.mass_jacobians[3];
  out.lateral = out.tip.z();
  out.lateral_jacobian = out.tip_jacobian.row(2);
  return out;
}

Mat8 augmented_mass_matrix(const Vec8& xi, const ArmParams& params) {
  const ChainFrames chain = chain_frames(xi, params);
  Mat8 b = Mat8::Zero();
  for (const auto& mp : arm_mass_points(params)) {
    const Vec3 p = chain.frames[mp.frame_index].block<3, 1>(0, 3);
    const Eigen::Matrix<double, 3, 8> j = chain_point_jacobian(chain, mp.frame_index, p);
    b.noalias() += mp.mass * j.transpose() * j;
  }
  return b;
}

Vec8 augmented_gravity(const Vec8& xi, const ArmParams& params, const Vec3& gravity_local) {
  const ChainFrames chain = chain_frames(xi, params);
  Vec8 g = Vec8::Zero();
  for (const auto& mp : arm_mass_points(params)) {
    const Vec3 p = chain.frames[mp.frame_index].block<3, 1>(0, 3);
    const Eigen::Matrix<double, 3, 8> j = chain_point_jacobian(chain, mp.frame_index, p);
    g.noalias() -= mp.mass * j.transpose() * gravity_local;  // dV/dxi, V = -m g.p
  }
  return g;
}

namespace {

Eigen::Matrix2d projected_mass_matrix(const Vec2& q, const ArmParams& params) {
  const Eigen::Matrix<double, 8, 2> jm = arm_jacobian_m(q, params);
  return jm.transpose() * augmented_mass_matrix(arm_augmented_state(q, params), params) * jm;
}

}  // namespace

ArmDynamics arm_dynamics(const Vec2& q, const Vec2& qd, const ArmParams& params,
                         const Vec3& gravity_local) {
  ArmDynamics dyn;
  dyn.B = projected_mass_matrix(q, params);

  // Coriolis matrix from the Christoffel symbols of B(q); dB/dq by central
  // differences keeps the passivity structure (Bdot - 2C antisymmetric).
  const double h = 1e-6;
  Eigen::Matrix2d db[2];
  for (int k = 0; k < 2; ++k) {
    Vec2 qp = q, qm = q;
    qp(k) += h;
    qm(k) -= h;
    db[k] = (projected_mass_matrix(qp, params) - projected_mass_matrix(qm, params)) / (2 * h);
  }
  dyn.C.setZero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        dyn.C(i, j) += 0.5 * (db[k](i, j) + db[j](i, k) - db[i](j, k)) * qd(k);
      }
    }
  }

  const Eigen::Matrix<double, 8, 2> jm = arm_jacobian_m(q, params);
  dyn.g = jm.transpose() * augmented_gravity(arm_augmented_state(q, params), params, gravity_local);
  return dyn;
}

}  // namespace softhex
