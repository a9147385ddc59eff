#include "softhex/controller.hpp"

#include <algorithm>
#include <cmath>

#include "softhex/errors.hpp"

namespace softhex {

namespace {
constexpr double kArmLiftDamping = 1e-6;    // damped pseudoinverse of the 1x2 task row
constexpr double kRankTolerance = 1e-8;     // minimum acceptable singular value of G
constexpr double kTrimTolerance = 1e-10;    // Newton convergence on ||F||
constexpr int kTrimMaxIterations = 100;
}  // namespace

void Gains::validate() const {
  if (!(k_p.array() > 0).all() || !(k_v.array() > 0).all() || !(k_R.array() > 0).all() ||
      !(k_omega.array() > 0).all()) {
    throw ValidationError("pose gains must be positive");
  }
  if (!(k_p_arm > 0) || !(k_d_arm > 0)) throw ValidationError("arm gains must be positive");
}

PoseErrors pose_errors(const FullState& state, const TrajectorySample& sample) {
  const BodyState body = body_state(state);
  PoseErrors e;
  e.e_p = sample.p_d - body.position;
  e.e_v = sample.v_d - body.velocity;
  const Mat3 m = body.rotation.transpose() * sample.R_d;
  e.e_R = 0.5 * vee(m - m.transpose());
  const Vec3 omega_d_body = m * sample.omega_d;
  e.e_omega = omega_d_body - body.omega_body;
  // Differentiating m omega_d with dm/dt = -[omega_B]x m + m [omega_d]x gives
  // the exact rate feedforward in body axes.
  e.omega_dot_ff = m * sample.omega_dot_d - body.omega_body.cross(omega_d_body);
  return e;
}

double attitude_error_angle(const Vec3& e_R) {
  return std::asin(std::min(1.0, e_R.norm()));
}

VirtualAccelerations virtual_accelerations(const PoseErrors& errors,
                                           const TrajectorySample& sample, const Gains& gains) {
  VirtualAccelerations nu;
  nu.nu_p = gains.k_p.cwiseProduct(errors.e_p) + gains.k_v.cwiseProduct(errors.e_v) + sample.a_d;
  nu.nu_R = gains.k_R.cwiseProduct(errors.e_R) + gains.k_omega.cwiseProduct(errors.e_omega) +
            errors.omega_dot_ff;
  return nu;
}

Vec3 arm_errors(const FullState& state, const TrajectorySample& sample, const Gains& gains,
                const ArmParams& arm) {
  Vec3 nu;
  for (int a = 0; a < 3; ++a) {
    const ArmKinematics kin = arm_kinematics(state.arm(a), arm);
    const double lateral_rate = (kin.lateral_jacobian * state.arm_rate(a))(0);
    nu(a) = gains.k_p_arm * (sample.arm_lateral_ref - kin.lateral) - gains.k_d_arm * lateral_rate;
  }
  return nu;
}

ControlInput control_law(const FullState& state, const TrajectorySample& sample,
                         const Gains& gains, const ArmParams& arm, const PlatformParams& plat,
                         const PropellerParams& prop) {
  const PoseErrors errors = pose_errors(state, sample);
  const VirtualAccelerations nu = virtual_accelerations(errors, sample, gains);

  // Attitude demand arrives as an angular acceleration; convert to Euler-angle
  // accelerations through omega = Q(eta) eta_dot.
  const Mat3 qmap = euler_rate_map(state.rpy());
  if (std::abs(qmap.determinant()) < 1e-6) {
    throw NumericalError("attitude rate map singular (pitch near 90 degrees)");
  }
  const Vec3 eta_ddot =
      qmap.partialPivLu().solve(nu.nu_R - euler_rate_map_derivative(state.rpy(), state.rpy_rate()) *
                                              state.rpy_rate());

  const Vec3 nu_arm = arm_errors(state, sample, gains, arm);

  ControlInput out;
  out.nu_full.segment<3>(0) = nu.nu_p;
  out.nu_full.segment<3>(3) = eta_ddot;
  for (int a = 0; a < 3; ++a) {
    const ArmKinematics kin = arm_kinematics(state.arm(a), arm);
    const Eigen::Matrix<double, 1, 2> j = kin.lateral_jacobian;
    const double denom = (j * j.transpose())(0) + kArmLiftDamping;
    out.nu_full.segment<2>(6 + 2 * a) = j.transpose() * (nu_arm(a) / denom);
  }

  const FullDynamics dyn = full_dynamics(state, arm, plat);
  const Vec12 rhs = dyn.B * out.nu_full + dyn.C * state.qd + dyn.g + elastic_forces(state, arm) +
                    damping_forces(state, arm);

  const MatG g_map = input_map(state, arm, prop);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(g_map,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.min_singular_value = svd.singularValues().minCoeff();
  if (out.min_singular_value < kRankTolerance) {
    throw AllocationError("input map numerically rank-deficient", out.min_singular_value);
  }

  // Each arm carries one scalar task, so one curvature combination per arm is
  // left free. Completing those accelerations so the demand lies in the range
  // of the input map makes the pseudoinverse solve exact; a plain least squares
  // would instead smear its residual over the low-inertia arm rows as large
  // unrequested bending accelerations.
  Eigen::Matrix<double, 12, 3> free_bend = Eigen::Matrix<double, 12, 3>::Zero();
  for (int a = 0; a < 3; ++a) {
    const ArmKinematics kin = arm_kinematics(state.arm(a), arm);
    const Vec2 n(-kin.lateral_jacobian(0, 1), kin.lateral_jacobian(0, 0));
    const double norm = n.norm();
    free_bend.block<2, 1>(6 + 2 * a, a) = norm > 1e-12 ? Vec2(n / norm) : Vec2(1.0, 0.0);
  }
  Eigen::Matrix<double, 12, 12> completed;
  completed.block<12, 9>(0, 0) = g_map;
  completed.block<12, 3>(0, 9) = -dyn.B * free_bend;
  const Eigen::FullPivLU<Eigen::Matrix<double, 12, 12>> lu(completed);
  if (!lu.isInvertible()) {
    throw AllocationError("input map and free bending directions do not span the demand",
                          out.min_singular_value);
  }
  const Vec12 sol = lu.solve(rhs);
  out.u = sol.head<9>();
  out.nu_full += free_bend * sol.tail<3>();

  for (int i = 0; i < 6; ++i) {
    const double clamped = std::clamp(out.u(i), 0.0, prop.max_thrust);
    if (clamped != out.u(i)) ++out.saturation_count;
    out.u(i) = clamped;
  }
  return out;
}

HoverTrim hover_trim(const Vec3& position, double q1_ref, const ArmParams& arm,
                     const PlatformParams& plat, const PropellerParams& prop) {
  using Vec15 = Eigen::Matrix<double, 15, 1>;
  using Mat15 = Eigen::Matrix<double, 15, 15>;

  FullState s;
  s.q.head<3>() = position;

  const auto residual_of = [&](const Vec9& u, const Vec6& q_arm) -> Vec15 {
    FullState sq = s;
    sq.q.tail<6>() = q_arm;
    const MatG g_map = input_map(sq, arm, prop);
    const Vec12 g_total = gravity_forces(sq, arm, plat) + elastic_forces(sq, arm);
    Vec15 f;
    f.head<12>() = g_map * u - g_total;
    for (int a = 0; a < 3; ++a) f(12 + a) = q_arm(2 * a) - q1_ref;
    return f;
  };

  // start from the pinned bend with a least-squares gravity-balancing input
  Vec6 q_arm;
  for (int a = 0; a < 3; ++a) q_arm.segment<2>(2 * a) = Vec2(q1_ref, 0.5 * q1_ref);
  FullState s0 = s;
  s0.q.tail<6>() = q_arm;
  const Eigen::MatrixXd g0 = input_map(s0, arm, prop);
  Vec9 u = g0.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
               .solve(gravity_forces(s0, arm, plat) + elastic_forces(s0, arm));

  Vec15 f = residual_of(u, q_arm);
  int iter = 0;
  const double h = 1e-7;
  for (; iter < kTrimMaxIterations && f.norm() > kTrimTolerance; ++iter) {
    Mat15 jac = Mat15::Zero();
    FullState sq = s;
    sq.q.tail<6>() = q_arm;
    jac.block<12, 9>(0, 0) = input_map(sq, arm, prop);
    for (int k = 0; k < 6; ++k) {
      Vec6 qp = q_arm, qm = q_arm;
      qp(k) += h;
      qm(k) -= h;
      jac.block<15, 1>(0, 9 + k) = (residual_of(u, qp) - residual_of(u, qm)) / (2 * h);
    }
    const Vec15 dx = jac.fullPivLu().solve(-f);
    double step = 1.0;
    for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
      const Vec9 u_try = u + step * dx.head<9>();
      const Vec6 q_try = q_arm + step * dx.tail<6>();
      const Vec15 f_try = residual_of(u_try, q_try);
      if (f_try.norm() < f.norm()) {
        u = u_try;
        q_arm = q_try;
        f = f_try;
        break;
      }
    }
  }
  if (f.norm() > 1e-8) {
    throw NumericalError("hover trim failed to converge");
  }

  HoverTrim trim;
  trim.u = u;
  trim.state = s;
  trim.state.q.tail<6>() = q_arm;
  trim.residual = f.head<12>().norm();
  trim.iterations = iter;
  trim.arm_lateral = arm_kinematics(trim.state.arm(0), arm).lateral;
  return trim;
}

}  // namespace softhex
