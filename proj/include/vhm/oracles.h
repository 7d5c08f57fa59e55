#pragma once

#include "vhm/mesh.h"

namespace vhm {
namespace oracle {

/// Closed-form reference quantities on the round sphere of the given radius,
/// plus flat-chart references for planar meshes. Used by tests and the
/// validation suites; deliberately shares no code with the discrete solvers.

double sphereDistance(const Vec3& x, const Vec3& y, double radius = 1.0);

/// Parallel transport of the tangent vector X at x along the minimizing great
/// circle to y (rotation about x cross y).
Vec3 sphereTransport(const Vec3& x, const Vec3& y, const Vec3& X, double radius = 1.0);

/// Logarithmic map as a tangent vector at x pointing toward y, with magnitude
/// equal to the geodesic distance. Throws Error near the antipode.
Vec3 sphereLogVector(const Vec3& x, const Vec3& y, double radius = 1.0);

/// Geodesic polar coordinates (r, phi) of y seen from x, with phi measured
/// counterclockwise (around the outward normal) from the tangent direction
/// zeroDir.
Vec2 sphereLog(const Vec3& x, const Vec3& y, const Vec3& zeroDir, double radius = 1.0);

/// Exponential map: walk from x along the tangent vector's great circle for
/// arc length |tangent|.
Vec3 sphereExp(const Vec3& x, const Vec3& tangent, double radius = 1.0);

/// Flat-chart references for meshes embedded in the z = const plane.
Vec2 planarLog(const IntrinsicMesh& mesh, int from, int to);
double planarDistance(const IntrinsicMesh& mesh, int from, int to);

} // namespace oracle
} // namespace vhm
