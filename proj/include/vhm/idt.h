#pragma once

#include "vhm/mesh.h"

namespace vhm {

/// Result of intrinsic Delaunay retriangulation. The mesh shares the vertex
/// set (and tangent frames) of the input; per-vertex tangent data transfers
/// between the two meshes by plain copy. The embedding is dropped because
/// flipped edges no longer correspond to straight extrinsic segments.
struct DelaunayResult {
  IntrinsicMesh mesh;
  int flipCount = 0;
  std::vector<int> vertexCorrespondence; // identity map
};

/// True if the interior edge satisfies the intrinsic Delaunay condition
/// (sum of the two opposite angles at most pi, up to tolerance).
bool edgeIsDelaunay(const IntrinsicMesh& mesh, int edge);

/// True if flipping the edge is geometrically valid: the edge is interior
/// and the two adjacent faces unfold to a quad that is strictly convex at
/// the shared edge's endpoints.
bool edgeIsFlippable(const IntrinsicMesh& mesh, int edge);

/// Flips the interior edge in place: connectivity rewires to the opposite
/// diagonal, the edge gets the unfolded diagonal length, and the two new
/// halfedge direction angles are laid out in the existing vertex frames.
/// All tangent frames and all other direction angles are untouched.
/// Throws Error for boundary or unflippable edges.
void flipEdge(IntrinsicMesh& mesh, int edge);

/// Flips edges until every interior edge is Delaunay.
DelaunayResult toIntrinsicDelaunay(const IntrinsicMesh& mesh);

} // namespace vhm
