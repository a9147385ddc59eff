#include "softhex/state.hpp"

#include <cmath>

namespace softhex {

Mat3 rpy_rotation(const Vec3& rpy) {
  return rot_z(rpy(2)) * rot_y(rpy(1)) * rot_x(rpy(0));
}

Mat3 euler_rate_map(const Vec3& rpy) {
  const double cphi = std::cos(rpy(0)), sphi = std::sin(rpy(0));
  const double cth = std::cos(rpy(1)), sth = std::sin(rpy(1));
  Mat3 q;
  q << 1, 0, -sth,
       0, cphi, sphi * cth,
       0, -sphi, cphi * cth;
  return q;
}

Mat3 euler_rate_map_derivative(const Vec3& rpy, const Vec3& rpy_dot) {
  const double cphi = std::cos(rpy(0)), sphi = std::sin(rpy(0));
  const double cth = std::cos(rpy(1)), sth = std::sin(rpy(1));
  const double dphi = rpy_dot(0), dth = rpy_dot(1);
  Mat3 dq;
  dq << 0, 0, -cth * dth,
        0, -sphi * dphi, cphi * cth * dphi - sphi * sth * dth,
        0, -cphi * dphi, -sphi * cth * dphi - cphi * sth * dth;
  return dq;
}

BodyState body_state(const FullState& state) {
  BodyState b;
  b.position = state.position();
  b.rotation = rpy_rotation(state.rpy());
  b.velocity = state.velocity();
  b.omega_body = euler_rate_map(state.rpy()) * state.rpy_rate();
  return b;
}

}  // namespace softhex
