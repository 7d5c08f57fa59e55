#pragma once

#include "vhm/idt.h"
#include "vhm/mesh.h"
#include "vhm/solver.h"

#include <memory>
#include <optional>
#include <vector>

namespace vhm {

struct VectorSource {
  int vertex = 0;
  Complex value{0.0, 0.0};
  double weight = 1.0;
};

struct ScalarSource {
  int vertex = 0;
  double value = 0.0;
  double weight = 1.0;
};

struct TransportResult {
  std::vector<TangentVector> field; // normalized result, magnitude from the quotient
  CVec direction;                   // raw diffused vector field Y_t
  Vec magnitude;                    // closest-point interpolated magnitudes
  std::vector<char> degenerate;     // vertices where the direction vanished
  double t = 0.0;
};

struct ScalarInterpolationResult {
  Vec values;
  std::vector<char> degenerate; // vertices where the normalization underflowed
};

struct RoundtripCheck {
  double scaling = 0.0;    // net magnitude factor of the i->j->i round trip
  double angleError = 0.0; // direction discrepancy in radians
};

/// Diffusion time t = multiplier * h^2 with h the mean edge length.
double chooseTime(const IntrinsicMesh& mesh, double multiplier = 1.0);

/// Short-time vector heat diffusion on a fixed mesh: prefactors the scalar
/// and connection systems once (on the intrinsic Delaunay mesh by default)
/// and answers transport and interpolation queries by backsolves only.
/// Holds a reference to the mesh; the mesh must outlive the solver.
class VectorHeatSolver {
 public:
  VectorHeatSolver(const IntrinsicMesh& mesh, double t, int degree = 1,
                   bool useIdt = true);

  /// Algorithm: diffuse the vector sources under the connection Laplacian,
  /// diffuse source magnitudes and indicators under the scalar Laplacian,
  /// and combine so each vertex carries the transported nearest-source
  /// vector at the nearest source's magnitude.
  TransportResult parallelTransport(const std::vector<VectorSource>& sources) const;

  /// Closest-point interpolation of scalar source values.
  ScalarInterpolationResult scalarInterpolate(const std::vector<ScalarSource>& sources) const;

  /// Transports a unit vector i -> j, re-sources it at j, and reads it back
  /// at i. By the symmetry of the solution operator the round trip is a
  /// positive real scaling.
  RoundtripCheck transportRoundtrip(int i, int j) const;

  /// Raw backsolves against the prefactored heat systems, for callers that
  /// assemble their own right-hand sides (e.g. the log map's radial data).
  CVec diffuseVector(const CVec& rhs) const { return vectorSystem_->solve(rhs); }
  Vec diffuseScalar(const Vec& rhs) const { return scalarSystem_->solve(rhs); }

  const IntrinsicMesh& mesh() const { return mesh_; }
  const IntrinsicMesh& solveMesh() const { return idt_ ? idt_->mesh : mesh_; }
  double time() const { return t_; }
  int degree() const { return degree_; }

 private:
  const IntrinsicMesh& mesh_;
  double t_;
  int degree_;
  std::optional<DelaunayResult> idt_;
  Vec mass_;
  std::unique_ptr<ComplexFactorization> vectorSystem_;
  std::unique_ptr<RealFactorization> scalarSystem_;
};

} // namespace vhm
