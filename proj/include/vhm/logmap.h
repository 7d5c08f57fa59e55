#pragma once

#include "vhm/solver.h"
#include "vhm/vector_heat.h"

#include <memory>
#include <utility>
#include <vector>

namespace vhm {

/// Right-hand side for the radial-field diffusion: outward unit normals of an
/// infinitesimal circle around the source, projected onto the piecewise
/// linear hat functions. Entries are complex vectors in each vertex's own
/// polar frame and do not depend on the circle radius.
struct RadialInitialData {
  int source = -1;
  Complex sourceEntry{0.0, 0.0};
  std::vector<std::pair<int, Complex>> neighborEntries;
};

RadialInitialData radialInitialConditions(const IntrinsicMesh& mesh, int source);

/// Geodesic polar coordinates about a basepoint, sampled at vertices.
struct LogMapField {
  SurfacePoint basepoint;
  Vec u, v; // u + i v = r e^{i phi}, exact by construction
  Vec r;    // geodesic distance estimate, zero at the basepoint
  Vec phi;  // angle from the horizontal field to the radial field
  std::vector<TangentVector> H; // unit horizontal directions
  std::vector<TangentVector> R; // unit radial directions, zero at the basepoint
};

/// Global logarithmic map: a horizontal field by vector heat transport of the
/// zero direction, a radial field by vector diffusion of the circle-normal
/// initial data, and the radial coordinate by integrating the radial field
/// with one Poisson solve. All three systems are prefactored once, so maps
/// about many basepoints cost backsolves only.
class LogMapSolver {
 public:
  LogMapSolver(const IntrinsicMesh& mesh, double t, bool useIdt = true);

  /// h0 picks the phi = 0 direction: for vertex basepoints it is read in the
  /// vertex's polar frame, for face-interior basepoints in the face's
  /// canonical layout chart. Face basepoints distribute the diffusion data
  /// barycentrically over the face corners.
  LogMapField compute(const SurfacePoint& basepoint, Complex h0) const;

  const VectorHeatSolver& heat() const { return heat_; }
  const IntrinsicMesh& mesh() const { return heat_.mesh(); }

 private:
  VectorHeatSolver heat_;
  std::unique_ptr<RealFactorization> poisson_;
};

/// Barycentric-linear evaluation of (u, v) at any surface point.
Vec2 logMapAt(const IntrinsicMesh& mesh, const LogMapField& field, const SurfacePoint& p);

} // namespace vhm
