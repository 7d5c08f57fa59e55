#pragma once

#include "vhm/logmap.h"

#include <cstdint>
#include <string>
#include <vector>

namespace vhm {

/// Weighted center-of-mass problem: either a discrete sample set or a
/// per-vertex density (weighted by lumped vertex masses). p = 2 asks for the
/// Karcher mean, p = 1 for the geometric median (Weiszfeld weights).
struct CenterProblem {
  std::vector<SurfacePoint> samples; // used when density is empty
  Vec density;                       // optional per-vertex rho >= 0
  int exponent = 2;                  // p
  double stepSize = 1.0;             // tau
  double tolerance = 1e-3;           // on |v|, in length units
  int maxIterations = 100;
};

struct CenterResult {
  SurfacePoint center;
  int iterations = 0;
  std::vector<SurfacePoint> trajectory; // m^0 .. m^k, for diagnosis
  double finalGradientNorm = 0.0;
  bool converged = false;
};

struct KarcherStep {
  Complex v{0.0, 0.0}; // update vector in the basepoint's frame
  SurfacePoint next;
};

/// Iterative centers on a fixed mesh. Prefactors the log map systems once;
/// every Karcher step is backsolves plus one geodesic trace.
class CenterSolver {
 public:
  CenterSolver(const IntrinsicMesh& mesh, double t, bool useIdt = true);

  /// One step m -> exp_m(tau v), with v the (weighted) average of the log
  /// map of the samples at m.
  KarcherStep karcherUpdate(const SurfacePoint& m, const CenterProblem& problem) const;

  CenterResult findCenter(const CenterProblem& problem, const SurfacePoint& initial) const;
  /// Random initialization at a seeded uniform vertex.
  CenterResult findCenter(const CenterProblem& problem, uint64_t seed) const;

  /// Mean of d(m, .)^p against the problem's weights.
  double energy(const SurfacePoint& m, const CenterProblem& problem) const;

  const LogMapSolver& logMap() const { return log_; }
  const IntrinsicMesh& mesh() const { return mesh_; }

 private:
  struct Gradient {
    Complex v{0.0, 0.0}; // in the log field's own angular gauge
    double energy = 0.0;
  };
  Gradient gradient(const LogMapField& field, const CenterProblem& problem) const;
  void validate(const CenterProblem& problem) const;

  const IntrinsicMesh& mesh_;
  LogMapSolver log_;
  Vec mass_;
};

struct VoronoiState {
  std::vector<SurfacePoint> sites;
  std::vector<Vec> cellDensities; // per site, per vertex; sums to 1 pointwise
  int iterations = 0;
  std::vector<std::string> warnings;
};

/// Geodesic centroidal Voronoi tessellation by Lloyd iteration: soft cell
/// densities from normalized scalar heat kernels of the sites, then a few
/// Karcher steps per site against its own cell density.
VoronoiState gcvt(const IntrinsicMesh& mesh, const std::vector<SurfacePoint>& initialSites,
                  double t, int lloydIterations, int karcherStepsPerIteration = 1);

/// Canonically ordered landmark set: geometric medians of the surface from
/// several seeded random starts (deduplicated within radius 2h), then
/// furthest-point sampling by the log map's radial distance. The medians
/// seed the distances but are not emitted.
std::vector<SurfacePoint> orderedLandmarks(const IntrinsicMesh& mesh, int count,
                                           int initialGuesses, uint64_t seed = 1,
                                           double extrinsicBias = 0.0);

} // namespace vhm
