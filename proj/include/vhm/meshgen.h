#pragma once

#include "vhm/mesh.h"

#include <cstdint>

namespace vhm {

struct MeshData {
  std::vector<std::array<int, 3>> faces;
  std::vector<Vec3> positions;
};

IntrinsicMesh buildMesh(const MeshData& data);

/// Fan of n unit equilateral triangles around a center vertex, in the z=0 plane.
/// Vertex 0 is the center; with n == 6 the fan is flat and closed.
MeshData flatFan(int n = 6);

/// Unit square [0,1]^2 as an n-by-n grid of right-isoceles triangle pairs.
MeshData planarGrid(int n, double sideLength = 1.0);

/// Disk of given radius centered at the origin, rings of 6k vertices around
/// a center vertex; `rings` controls resolution.
MeshData planarDisk(int rings, double radius = 1.0);

/// Icosahedron subdivided `subdivisions` times, vertices projected to the
/// sphere of the given radius.
MeshData icosphere(int subdivisions, double radius = 1.0);

/// Icosphere with seeded tangential vertex jitter (re-projected), producing
/// an irregular but valid spherical triangulation. `amount` is the jitter
/// magnitude relative to mean edge length.
MeshData jitteredSphere(int subdivisions, double amount, uint64_t seed, double radius = 1.0);

/// Torus with major radius R, minor radius r.
MeshData torus(int nu, int nv, double R = 1.0, double r = 0.35);

/// Planar grid with seeded in-plane vertex jitter (interior vertices only);
/// large `amount` yields skinny, non-Delaunay triangles.
MeshData jitteredGrid(int n, double amount, uint64_t seed, double sideLength = 1.0);

/// Thin strip of very obtuse triangles (non-Delaunay by construction).
MeshData thinStrip(int n, double aspect = 8.0);

} // namespace vhm
