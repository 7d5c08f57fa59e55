#include "vhm/oracles.h"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>

namespace vhm {
namespace oracle {

namespace {
constexpr double kPi = std::numbers::pi;

double centralAngle(const Vec3& x, const Vec3& y) {
  Vec3 a = x.normalized();
  Vec3 b = y.normalized();
  return std::atan2(a.cross(b).norm(), a.dot(b));
}
} // namespace

double sphereDistance(const Vec3& x, const Vec3& y, double radius) {
  return radius * centralAngle(x, y);
}

Vec3 sphereTransport(const Vec3& x, const Vec3& y, const Vec3& X, double radius) {
  (void)radius;
  double angle = centralAngle(x, y);
  Vec3 axis = x.cross(y);
  if (axis.norm() < 1e-14) {
    if (angle < kPi / 2) return X; // same point
    throw Error("sphere transport undefined for antipodal points");
  }
  return Eigen::AngleAxisd(angle, axis.normalized()) * X;
}

Vec3 sphereLogVector(const Vec3& x, const Vec3& y, double radius) {
  double angle = centralAngle(x, y);
  if (angle > kPi - 1e-8)
    throw Error("sphere log undefined near the antipode");
  if (angle < 1e-14) return Vec3::Zero();
  Vec3 n = x.normalized();
  Vec3 dir = (y.normalized() - y.normalized().dot(n) * n).normalized();
  return radius * angle * dir;
}

Vec2 sphereLog(const Vec3& x, const Vec3& y, const Vec3& zeroDir, double radius) {
  Vec3 v = sphereLogVector(x, y, radius);
  Vec3 n = x.normalized();
  Vec3 e1 = (zeroDir - zeroDir.dot(n) * n).normalized();
  Vec3 e2 = n.cross(e1);
  double r = v.norm();
  if (r == 0.0) return Vec2{0.0, 0.0};
  return Vec2{r, std::atan2(v.dot(e2), v.dot(e1))};
}

Vec3 sphereExp(const Vec3& x, const Vec3& tangent, double radius) {
  double r = tangent.norm();
  if (r < 1e-16) return x;
  Vec3 n = x.normalized();
  Vec3 dir = (tangent - tangent.dot(n) * n).normalized();
  double angle = r / radius;
  return radius * (std::cos(angle) * n + std::sin(angle) * dir);
}

Vec2 planarLog(const IntrinsicMesh& mesh, int from, int to) {
  if (!mesh.hasPositions()) throw Error("no embedding available");
  Vec3 d = mesh.positions[to] - mesh.positions[from];
  return Vec2{d.x(), d.y()};
}

double planarDistance(const IntrinsicMesh& mesh, int from, int to) {
  if (!mesh.hasPositions()) throw Error("no embedding available");
  return (mesh.positions[to] - mesh.positions[from]).norm();
}

} // namespace oracle
} // namespace vhm
