#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <stdexcept>
#include <string>

namespace vhm {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using SparseReal = Eigen::SparseMatrix<double>;
using SparseComplex = Eigen::SparseMatrix<Complex>;

/// Error type for all structured failures (bad connectivity, degenerate
/// geometry, solver breakdown). The message names the offending element.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Tangent vector in the polar coordinate system of a vertex, encoded as a
/// complex number r*e^{i*phi}.
struct TangentVector {
  Complex value{0.0, 0.0};
  int basis = -1; // vertex id whose frame the value lives in

  double magnitude() const { return std::abs(value); }
  double angle() const { return std::arg(value); }
};

/// Location on the mesh: either exactly at a vertex, or inside a face with
/// barycentric coordinates (ordered by the face's canonical corner order).
struct SurfacePoint {
  enum class Type { Vertex, Face };
  Type type = Type::Vertex;
  int element = -1;            // vertex id or face id
  Vec3 baryCoords{1.0, 0.0, 0.0}; // used when type == Face

  static SurfacePoint vertex(int v) {
    SurfacePoint p;
    p.type = Type::Vertex;
    p.element = v;
    return p;
  }
  static SurfacePoint face(int f, const Vec3& bary) {
    SurfacePoint p;
    p.type = Type::Face;
    p.element = f;
    p.baryCoords = bary;
    return p;
  }
  bool isVertex() const { return type == Type::Vertex; }
};

} // namespace vhm
