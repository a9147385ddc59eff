#include "softhex/spatial.hpp"

#include <cmath>

#include "softhex/errors.hpp"

namespace softhex {

Mat3 rot_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return r;
}

Mat3 rot_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << c, 0, s,
       0, 1, 0,
      -s, 0, c;
  return r;
}

Mat3 rot_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return r;
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(),
       v.z(), 0, -v.x(),
      -v.y(), v.x(), 0;
  return m;
}

Vec3 vee(const Mat3& m, double antisymmetry_tol) {
  const double defect = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (defect > antisymmetry_tol) {
    throw ValidationError("vee: matrix is not antisymmetric (defect " +
                          std::to_string(defect) + ")");
  }
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

Mat4 make_transform(const Mat3& rotation, const Vec3& translation) {
  Mat4 t = Mat4::Identity();
  t.topLeftCorner<3, 3>() = rotation;
  t.topRightCorner<3, 1>() = translation;
  return t;
}

}  // namespace softhex
