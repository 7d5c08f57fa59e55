#pragma once

#include "vhm/types.h"

#include <array>
#include <vector>

namespace vhm {

/// Manifold triangle mesh described purely by its connectivity and positive
/// edge lengths, with per-vertex polar tangent spaces.
///
/// Connectivity is a halfedge structure. Interior halfedges have a face;
/// boundary halfedges carry face() == -1 and close the twin pairing. Per
/// directed halfedge we store the direction angle phi of the edge in the
/// tail vertex's normalized polar coordinates, and the unit complex rotation
/// that carries tangent vectors from the tail frame to the head frame.
struct IntrinsicMesh {
  // connectivity
  std::vector<int> heNext;   // next halfedge in face (or boundary loop)
  std::vector<int> heTwin;
  std::vector<int> heTail;   // origin vertex
  std::vector<int> heEdge;
  std::vector<int> heFace;   // -1 for boundary halfedges
  std::vector<int> vertexHalfedge; // outgoing; CW-most interior one on boundary
  std::vector<int> edgeHalfedge;   // the interior halfedge created first
  std::vector<int> faceHalfedge;

  // intrinsic geometry
  std::vector<double> edgeLength;
  std::vector<double> cornerAngle; // per interior halfedge, at its tail
  std::vector<double> faceArea;
  std::vector<double> angleSum;    // Theta per vertex
  std::vector<char> vertexIsBoundary;

  // tangent-space layout
  std::vector<double> halfedgeAngle;       // phi per halfedge
  std::vector<Complex> transportRotation;  // r per halfedge, tail -> head

  // optional embedding (empty when built from lengths alone)
  std::vector<Vec3> positions;

  int nVertices() const { return static_cast<int>(vertexHalfedge.size()); }
  int nEdges() const { return static_cast<int>(edgeLength.size()); }
  int nFaces() const { return static_cast<int>(faceHalfedge.size()); }
  int nHalfedges() const { return static_cast<int>(heNext.size()); }
  bool hasPositions() const { return !positions.empty(); }

  bool isInterior(int he) const { return heFace[he] >= 0; }
  int hePrev(int he) const { return heNext[heNext[he]]; } // triangle faces only
  int heHead(int he) const { return heTail[heTwin[he]]; }

  // counter-clockwise successor among halfedges outgoing from heTail(he);
  // may return a boundary halfedge
  int ccwNextOutgoing(int he) const { return heTwin[hePrev(he)]; }

  /// All outgoing halfedges of v in CCW order; for boundary vertices the last
  /// one is the outgoing boundary halfedge.
  std::vector<int> outgoingHalfedges(int v) const;

  /// Interior halfedge from i to j, or -1 if no such directed edge exists
  /// among interior halfedges.
  int halfedgeBetween(int i, int j) const;

  /// Vertex ids at the corners of face f, in canonical order
  /// (tail of faceHalfedge[f] first).
  std::array<int, 3> faceVertices(int f) const;

  /// 2D layout of face f in its canonical chart: corner 0 at the origin,
  /// corner 1 on the positive x axis, corner 2 above.
  std::array<Vec2, 3> layoutFace(int f) const;

  /// Scale factor from actual angles to normalized polar angles at v
  /// (2*pi/Theta interior, pi/Theta boundary).
  double angleScale(int v) const;

  double meanEdgeLength() const;
  double totalArea() const;
};

/// Builds the mesh from triangle connectivity and vertex positions.
/// Throws Error on non-manifold connectivity, degenerate faces, or
/// triangle-inequality violations.
IntrinsicMesh buildIntrinsicMesh(const std::vector<std::array<int, 3>>& faces,
                                 const std::vector<Vec3>& positions);

/// Builds the mesh from triangle connectivity and explicit per-edge lengths.
/// Edges are indexed in order of first appearance while scanning faces
/// (i.e., in halfedge creation order).
IntrinsicMesh buildIntrinsicMesh(const std::vector<std::array<int, 3>>& faces,
                                 const std::vector<double>& edgeLengths);

/// Parallel transport of v across the edge between its basis vertex and the
/// other endpoint of edge e. Magnitude is preserved.
TangentVector transportAlongEdge(const IntrinsicMesh& mesh, const TangentVector& v, int edge);

/// Conversion between extrinsic 3-vectors at a vertex and the intrinsic
/// polar encoding. Requires positions. Extrinsic vectors are projected into
/// the vertex tangent plane (angle-weighted normal).
TangentVector extrinsicToTangent(const IntrinsicMesh& mesh, int vertex, const Vec3& v);
Vec3 tangentToExtrinsic(const IntrinsicMesh& mesh, const TangentVector& v);

/// Angle-weighted vertex normal (requires positions).
Vec3 vertexNormal(const IntrinsicMesh& mesh, int vertex);

/// Corner angle at vertex v inside face f.
double cornerAngleAt(const IntrinsicMesh& mesh, int f, int v);

/// Extrinsic position of a surface point (requires positions).
Vec3 surfacePointPosition(const IntrinsicMesh& mesh, const SurfacePoint& p);

namespace detail {
// Law of cosines for the angle opposite lOpp, clamped against roundoff.
double cornerFromLengths(double lA, double lB, double lOpp);
double heronArea(double a, double b, double c);
} // namespace detail

} // namespace vhm
