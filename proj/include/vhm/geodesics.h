#pragma once

#include "vhm/mesh.h"

#include <vector>

namespace vhm {

struct TraceSegment {
  int face = -1;
  SurfacePoint entry, exit;
  double length = 0.0;
};

struct GeodesicTrace {
  SurfacePoint start;
  Complex direction{0.0, 0.0}; // as passed in, magnitude = requested length
  double length = 0.0;
  std::vector<TraceSegment> path;
  SurfacePoint endpoint;
  Complex endDirection{0.0, 0.0}; // unit, in the endpoint's frame
  bool truncated = false;         // hit the boundary before the full length
};

/// Walks a straightest geodesic from the start point for arc length |v|.
/// Direction conventions match the log map: at a vertex start arg(v) is read
/// in the vertex's normalized polar frame, at a face-interior start in the
/// face's canonical layout chart; endDirection uses the same convention at
/// the endpoint. Crossed edges are unfolded isometrically; a hit interior
/// vertex is passed straight through (equal normalized angle on both sides);
/// boundary contact truncates the trace.
GeodesicTrace traceGeodesic(const IntrinsicMesh& mesh, const SurfacePoint& start,
                            Complex v);

/// Carries a tangent vector from the trace start to its endpoint through the
/// same unfolding rotations. Magnitude is preserved exactly; the angle to the
/// trace direction is the transport invariant.
Complex transportAlongTrace(const IntrinsicMesh& mesh, const GeodesicTrace& trace,
                            Complex value);

} // namespace vhm
