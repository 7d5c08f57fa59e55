#include "vhm/centers.h"

#include "vhm/geodesics.h"
#include "vhm/operators.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace vhm {

namespace {

// angle, in the basepoint's own frame, of the log field's zero direction
double basepointGauge(const IntrinsicMesh& mesh, const LogMapField& field) {
  const SurfacePoint& bp = field.basepoint;
  if (bp.isVertex()) return std::arg(field.H[bp.element].value);
  auto corners = mesh.faceVertices(bp.element);
  auto chart = mesh.layoutFace(bp.element);
  int he = mesh.faceHalfedge[bp.element];
  Complex acc{0.0, 0.0};
  for (int c = 0; c < 3; c++) {
    double w = bp.baryCoords[c];
    if (w > 1e-12) {
      Complex H = field.H[corners[c]].value;
      Vec2 d = chart[(c + 1) % 3] - chart[c];
      double chartAngle =
          std::atan2(d.y(), d.x()) +
          (std::arg(H) - mesh.halfedgeAngle[he]) / mesh.angleScale(corners[c]);
      acc += w * std::polar(1.0, chartAngle);
    }
    he = mesh.heNext[he];
  }
  return std::arg(acc);
}

double pointDistance(const IntrinsicMesh& mesh, const SurfacePoint& a,
                     const SurfacePoint& b) {
  if (mesh.hasPositions())
    return (surfacePointPosition(mesh, a) - surfacePointPosition(mesh, b)).norm();
  if (a.type == b.type && a.element == b.element &&
      (a.isVertex() || (a.baryCoords - b.baryCoords).norm() < 1e-9))
    return 0.0;
  return std::numeric_limits<double>::infinity();
}

} // namespace

CenterSolver::CenterSolver(const IntrinsicMesh& mesh, double t, bool useIdt)
    : mesh_(mesh), log_(mesh, t, useIdt), mass_(assembleMassMatrix(mesh)) {}

void CenterSolver::validate(const CenterProblem& problem) const {
  if (problem.exponent != 1 && problem.exponent != 2)
    throw Error("center exponent must be 1 or 2");
  if (problem.stepSize <= 0.0) throw Error("step size must be positive");
  if (problem.tolerance <= 0.0) throw Error("tolerance must be positive");
  if (problem.maxIterations < 1) throw Error("at least one iteration required");
  if (problem.density.size() > 0) {
    if (problem.density.size() != mesh_.nVertices())
      throw Error("density must have one entry per vertex");
    if (problem.density.minCoeff() < 0.0) throw Error("density must be nonnegative");
    if ((mass_.array() * problem.density.array()).sum() <= 0.0)
      throw Error("density carries no mass");
  } else if (problem.samples.empty()) {
    throw Error("center problem has neither samples nor a density");
  }
}

CenterSolver::Gradient CenterSolver::gradient(const LogMapField& field,
                                              const CenterProblem& problem) const {
  double h = mesh_.meanEdgeLength();
  Complex acc{0.0, 0.0};
  double accW = 0.0, eSum = 0.0, eW = 0.0;
  auto add = [&](const Complex& z, double baseWeight, double distFloor) {
    double d = std::abs(z);
    eSum += baseWeight * (problem.exponent == 2 ? d * d : d);
    eW += baseWeight;
    double w = problem.exponent == 2 ? baseWeight
                                     : baseWeight / std::max(d, distFloor);
    acc += w * z;
    accW += w;
  };
  if (problem.density.size() > 0) {
    // a density samples every vertex, so the 1/d weight must be mollified at
    // the scale of one vertex's mass lump or the basepoint's own cell pins
    // the iteration
    for (int v = 0; v < mesh_.nVertices(); v++) {
      double w = mass_[v] * problem.density[v];
      if (w > 0.0) add(Complex{field.u[v], field.v[v]}, w, 0.5 * h);
    }
  } else {
    for (const SurfacePoint& y : problem.samples) {
      Vec2 lg = logMapAt(mesh_, field, y);
      add(Complex{lg.x(), lg.y()}, 1.0, 1e-8 * h);
    }
  }
  Gradient g;
  g.v = acc / accW;
  g.energy = eSum / eW;
  return g;
}

KarcherStep CenterSolver::karcherUpdate(const SurfacePoint& m,
                                        const CenterProblem& problem) const {
  validate(problem);
  LogMapField field = log_.compute(m, Complex{1.0, 0.0});
  Gradient g = gradient(field, problem);
  KarcherStep step;
  step.v = g.v * std::polar(1.0, basepointGauge(mesh_, field));
  step.next = std::abs(step.v) == 0.0
                  ? m
                  : traceGeodesic(mesh_, m, problem.stepSize * step.v).endpoint;
  return step;
}

CenterResult CenterSolver::findCenter(const CenterProblem& problem,
                                      const SurfacePoint& initial) const {
  validate(problem);
  CenterResult out;
  SurfacePoint m = initial;
  out.trajectory.push_back(m);
  LogMapField field = log_.compute(m, Complex{1.0, 0.0});
  for (int iter = 0; iter < problem.maxIterations; iter++) {
    Gradient g = gradient(field, problem);
    out.finalGradientNorm = std::abs(g.v);
    if (out.finalGradientNorm <= problem.tolerance) {
      out.converged = true;
      break;
    }
    Complex dir = g.v * std::polar(1.0, basepointGauge(mesh_, field));
    double step = problem.stepSize;
    bool accepted = false;
    for (int attempt = 0; attempt < 8 && !accepted; attempt++) {
      SurfacePoint next = traceGeodesic(mesh_, m, step * dir).endpoint;
      LogMapField nextField = log_.compute(next, Complex{1.0, 0.0});
      if (gradient(nextField, problem).energy <= g.energy + 1e-8) {
        m = next;
        field = std::move(nextField);
        accepted = true;
      } else {
        step *= 0.5; // energy went up: shorten this step only
      }
    }
    out.iterations = iter + 1;
    if (!accepted) break;
    out.trajectory.push_back(m);
  }
  out.center = m;
  return out;
}

CenterResult CenterSolver::findCenter(const CenterProblem& problem, uint64_t seed) const {
  std::mt19937_64 rng(seed);
  int v = std::uniform_int_distribution<int>(0, mesh_.nVertices() - 1)(rng);
  return findCenter(problem, SurfacePoint::vertex(v));
}

double CenterSolver::energy(const SurfacePoint& m, const CenterProblem& problem) const {
  validate(problem);
  return gradient(log_.compute(m, Complex{1.0, 0.0}), problem).energy;
}

VoronoiState gcvt(const IntrinsicMesh& mesh, const std::vector<SurfacePoint>& initialSites,
                  double t, int lloydIterations, int karcherStepsPerIteration) {
  if (initialSites.empty()) throw Error("gcvt needs at least one site");
  if (t <= 0.0) throw Error("kernel time must be positive");
  if (karcherStepsPerIteration < 1) throw Error("at least one Karcher step per iteration");

  VoronoiState state;
  state.sites = initialSites;
  int n = mesh.nVertices();
  int nSites = static_cast<int>(state.sites.size());
  double h = mesh.meanEdgeLength();
  CenterSolver centers(mesh, h);

  // split up coincident sites so their kernels are distinguishable
  for (int i = 0; i < nSites; i++) {
    for (int j = i + 1; j < nSites; j++) {
      if (pointDistance(mesh, state.sites[i], state.sites[j]) > 1e-12) continue;
      LogMapField f = centers.logMap().compute(state.sites[j], Complex{1.0, 0.0});
      Vec dist = f.r;
      for (int k = 0; k < nSites; k++) {
        if (k == j) continue;
        LogMapField fk = centers.logMap().compute(state.sites[k], Complex{1.0, 0.0});
        dist = dist.cwiseMin(fk.r);
      }
      int far = 0;
      dist.maxCoeff(&far);
      state.sites[j] = SurfacePoint::vertex(far);
      state.warnings.push_back("sites " + std::to_string(i) + " and " + std::to_string(j) +
                               " coincide; moved site " + std::to_string(j) +
                               " to the farthest vertex " + std::to_string(far));
    }
  }

  const IntrinsicMesh& sm = centers.logMap().heat().solveMesh();
  SparseReal system = t * assembleCotanLaplacian(sm);
  Vec massDiag = assembleMassMatrix(sm);
  for (int v = 0; v < n; v++) system.coeffRef(v, v) += massDiag[v];
  RealFactorization kernel(system);

  auto refreshDensities = [&] {
    state.cellDensities.assign(nSites, Vec());
    Vec sum = Vec::Zero(n);
    for (int i = 0; i < nSites; i++) {
      Vec rhs = Vec::Zero(n);
      const SurfacePoint& s = state.sites[i];
      if (s.isVertex()) {
        rhs[s.element] = 1.0;
      } else {
        auto corners = mesh.faceVertices(s.element);
        for (int c = 0; c < 3; c++) rhs[corners[c]] = s.baryCoords[c];
      }
      state.cellDensities[i] = kernel.solve(rhs).cwiseMax(0.0);
      sum += state.cellDensities[i];
    }
    for (int v = 0; v < n; v++) {
      for (int i = 0; i < nSites; i++) {
        if (sum[v] > 0.0)
          state.cellDensities[i][v] /= sum[v];
        else
          state.cellDensities[i][v] = 1.0 / nSites;
      }
    }
  };

  double moveTol = 1e-3 * h;
  for (int iter = 0; iter < lloydIterations; iter++) {
    refreshDensities();
    double maxMove = 0.0;
    for (int i = 0; i < nSites; i++) {
      CenterProblem problem;
      problem.density = state.cellDensities[i];
      SurfacePoint site = state.sites[i];
      for (int k = 0; k < karcherStepsPerIteration; k++)
        site = centers.karcherUpdate(site, problem).next;
      maxMove = std::max(maxMove, pointDistance(mesh, state.sites[i], site));
      state.sites[i] = site;
    }
    state.iterations = iter + 1;
    if (maxMove < moveTol) break;
  }
  refreshDensities();
  return state;
}

std::vector<SurfacePoint> orderedLandmarks(const IntrinsicMesh& mesh, int count,
                                           int initialGuesses, uint64_t seed,
                                           double extrinsicBias) {
  if (count < 0) throw Error("landmark count must be nonnegative");
  if (count == 0) return {};
  if (initialGuesses < 1) throw Error("at least one initial guess required");

  int n = mesh.nVertices();
  double h = mesh.meanEdgeLength();
  CenterSolver centers(mesh, h);
  CenterProblem problem;
  problem.exponent = 1;
  problem.density = Vec::Ones(n);
  problem.tolerance = 1e-2 * h;
  problem.maxIterations = 60;

  std::vector<SurfacePoint> medians;
  Vec minDist = Vec::Constant(n, std::numeric_limits<double>::infinity());
  for (int g = 0; g < initialGuesses; g++) {
    CenterResult res = centers.findCenter(problem, seed + g);
    LogMapField field = centers.logMap().compute(res.center, Complex{1.0, 0.0});
    bool duplicate = false;
    for (const SurfacePoint& kept : medians)
      duplicate = duplicate || logMapAt(mesh, field, kept).norm() < 2.0 * h;
    if (duplicate) continue;
    medians.push_back(res.center);
    minDist = minDist.cwiseMin(field.r);
  }

  Vec3 biasDir = Vec3{1.0, 0.7, 0.3}.normalized();
  std::vector<SurfacePoint> landmarks;
  for (int k = 0; k < count; k++) {
    int best = 0;
    double bestScore = -std::numeric_limits<double>::infinity();
    for (int v = 0; v < n; v++) {
      double score = minDist[v];
      if (extrinsicBias != 0.0 && mesh.hasPositions())
        score += extrinsicBias * mesh.positions[v].dot(biasDir);
      if (score > bestScore) {
        bestScore = score;
        best = v;
      }
    }
    landmarks.push_back(SurfacePoint::vertex(best));
    LogMapField field =
        centers.logMap().compute(SurfacePoint::vertex(best), Complex{1.0, 0.0});
    minDist = minDist.cwiseMin(field.r);
  }
  return landmarks;
}

} // namespace vhm
