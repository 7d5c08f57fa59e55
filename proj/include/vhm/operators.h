#pragma once

#include "vhm/mesh.h"

namespace vhm {

/// Cotangent weight of an edge: sum of the cotangents of the angles opposite
/// the edge in its one or two adjacent faces. May be negative before
/// Delaunay retriangulation.
double edgeCotanWeight(const IntrinsicMesh& mesh, int edge);

/// Cotangent Laplacian, assembled positive semidefinite from per-face 3x3
/// stencils. Constants lie in its kernel; systems are posed as (M + tL)x = b.
SparseReal assembleCotanLaplacian(const IntrinsicMesh& mesh);

/// Connection Laplacian for tangent-vector fields encoded as complex numbers
/// in the per-vertex polar frames. Same sparsity and diagonal as the cotan
/// Laplacian; off-diagonal entries carry the edge rotation raised to the
/// given symmetry degree (degree 1 for ordinary vector fields, n for
/// n-direction fields). Throws Error for degree < 1.
SparseComplex assembleConnectionLaplacian(const IntrinsicMesh& mesh, int degree = 1);

/// Lumped mass matrix diagonal: one third of the incident face areas.
Vec assembleMassMatrix(const IntrinsicMesh& mesh);

/// Integrated divergence of a per-vertex tangent field: for each edge the
/// inner products with the edge vector are averaged between the endpoint
/// frames, then accumulated with the cotan weights.
Vec divergence(const IntrinsicMesh& mesh, const std::vector<TangentVector>& field);

} // namespace vhm
