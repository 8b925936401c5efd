#pragma once

#include <Eigen/Dense>

namespace crashdet {

using Vec2 = Eigen::Vector2d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using VecXi = Eigen::VectorXi;

inline constexpr double kGravity = 9.81;  // m/s^2

// 90-degree counterclockwise rotation of a planar vector.
inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

inline Eigen::Matrix2d rot2(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

inline double deg2rad(double deg) { return deg * M_PI / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / M_PI; }

}  // namespace crashdet
