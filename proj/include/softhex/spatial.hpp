#pragma once

#include <Eigen/Dense>

namespace softhex {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Elementary rotations, right-handed, angle in radians.
Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

// Cross-product matrix: skew(v) * w == v x w.
Mat3 skew(const Vec3& v);

// Inverse of skew. Throws ValidationError if the matrix deviates from
// antisymmetry by more than antisymmetry_tol (max abs entry of M + M^T).
Vec3 vee(const Mat3& m, double antisymmetry_tol = 1e-9);

// Rigid transform in a bending plane: rotation by `angle` plus translation.
// matrix() gives the homogeneous 3x3 form with last row [0 0 1].
struct PlanarTransform {
  Eigen::Matrix2d rotation = Eigen::Matrix2d::Identity();
  Vec2 translation = Vec2::Zero();

  PlanarTransform operator*(const PlanarTransform& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }
  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m.topLeftCorner<2, 2>() = rotation;
    m.topRightCorner<2, 1>() = translation;
    return m;
  }
};

// Homogeneous 4x4 helpers.
Mat4 make_transform(const Mat3& rotation, const Vec3& translation);

}  // namespace softhex
